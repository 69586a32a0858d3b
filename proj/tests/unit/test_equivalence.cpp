#include <doctest.h>

#include "../random_dae.hpp"
#include "daecanon/equivalence.hpp"
#include "helpers.hpp"

using namespace daecanon;

namespace {

Transform random_transform(testing::RandomDae& g, int m) {
  MatrixFn l = MatrixFn::identity(m), k = MatrixFn::identity(m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      l.set(i, j, g.smooth());
      k.set(j, i, g.smooth());
    }
  return {l, k};
}

}  // namespace

TEST_CASE("apply with the identity transform") {
  Context ctx(Interval{0.0, 1.0});
  testing::RandomDae g(7);
  DaePair p = g.prescf(BlockSpec({2, 1}, Ordering::Decreasing), 1);
  DaePair q = apply(Transform::identity(p.m()), p);
  CHECK(max_dev(q.E, p.E, ctx.check_pts) == 0);
  CHECK(max_dev(q.F, p.F, ctx.check_pts) == 0);
  CHECK(q.d == p.d);
}

TEST_CASE("apply follows the product rule") {
  Context ctx(Interval{0.0, 1.0});
  DaePair p;
  p.E = testing::rows({{"1"}});
  p.F = testing::rows({{"t"}});
  Transform t{testing::rows({{"exp(-t)"}}), testing::rows({{"exp(t)"}})};
  DaePair q = apply(t, p);
  CHECK(max_dev(q.E, testing::rows({{"1"}}), ctx.check_pts) < 1e-14);
  CHECK(max_dev(q.F, testing::rows({{"t+1"}}), ctx.check_pts) < 1e-14);
}

TEST_CASE("compose matches sequential application") {
  Context ctx(Interval{0.0, 1.0});
  testing::RandomDae g(11);
  DaePair p = g.prescf(BlockSpec({1, 1, 1}, Ordering::Decreasing), 2);
  Transform t1 = random_transform(g, p.m()), t2 = random_transform(g, p.m()), t3 = random_transform(g, p.m());
  DaePair seq = apply(t2, apply(t1, p));
  CHECK(verify_equivalent(p, seq, compose(t1, t2), ctx.check_pts, 1e-9).ok);
  Transform left = compose(compose(t1, t2), t3), right = compose(t1, compose(t2, t3));
  CHECK(max_dev(left.L, right.L, ctx.check_pts) < 1e-12);
  CHECK(max_dev(left.K, right.K, ctx.check_pts) < 1e-12);
}

TEST_CASE("verify_equivalent detects a perturbed K") {
  Context ctx(Interval{0.0, 1.0});
  testing::RandomDae g(3);
  DaePair p = g.prescf(BlockSpec({2, 2}, Ordering::Decreasing), 1);
  Transform t = random_transform(g, p.m());
  DaePair q = apply(t, p);
  CHECK(verify_equivalent(p, q, t, ctx.check_pts, 1e-9).ok);
  Transform bad = t;
  bad.K.set(0, 0, bad.K(0, 0) + ScalarFn(1e-6) * ScalarFn::time());
  EquivalenceReport rep = verify_equivalent(p, q, bad, ctx.check_pts, 1e-9);
  CHECK_FALSE(rep.ok);
  CHECK(std::max(rep.dev_E, rep.dev_F) > 1e-9);
}

TEST_CASE("elementary transforms are equivalences") {
  Context ctx(Interval{0.0, 1.0});
  testing::RandomDae g(5);
  BlockSpec spec({2, 1}, Ordering::Decreasing);
  DaePair p = g.prescf(spec, 2);
  Elementary up = elementary_upper(p, g.matrix(2, 3));
  CHECK(verify_equivalent(p, up.P, up.T, ctx.check_pts, 1e-9).ok);
  CHECK(max_dev(up.P.E, p.E, ctx.check_pts) < 1e-12);
  Elementary lo = elementary_lower(p, g.matrix(3, 2));
  CHECK(verify_equivalent(p, lo.P, lo.T, ctx.check_pts, 1e-9).ok);
  CHECK(max_dev(lo.P.E, p.E, ctx.check_pts) < 1e-12);
  CHECK(transform_nonsingular(up.T, ctx.check_pts));
  CHECK_FALSE(transform_nonsingular({MatrixFn(p.m(), p.m()), MatrixFn::identity(p.m())}, ctx.check_pts));
}
