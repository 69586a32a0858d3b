#include <doctest.h>

#include "../oracles.hpp"
#include "daecanon/blockstruct.hpp"
#include "daecanon/errors.hpp"
#include "helpers.hpp"

using namespace daecanon;
using testing::numeric;

TEST_CASE("block spec offsets and characteristics") {
  BlockSpec s({3, 2, 1}, Ordering::Decreasing);
  CHECK(s.a() == 6);
  CHECK(s.mu() == 3);
  CHECK(s.offset(0) == 0);
  CHECK(s.offset(2) == 5);
  CHECK_FALSE(s.equal_sizes());
  Characteristics c = characteristics(s, 2);
  CHECK(c.m == 8);
  CHECK(c.a == 6);
  CHECK(c.mu == 3);
  CHECK(c.r == 2 + 3);
  CHECK(c.theta == std::vector<int>{2, 1});
}

TEST_CASE("ordering strings round trip") {
  CHECK(ordering_from_string(to_string(Ordering::Increasing)) == Ordering::Increasing);
  CHECK(ordering_from_string(to_string(Ordering::Decreasing)) == Ordering::Decreasing);
  CHECK_THROWS(ordering_from_string("sideways"));
}

TEST_CASE("elementary nilpotent matrices") {
  CHECK(elementary_nilpotent_numeric(BlockSpec({1, 1}, Ordering::Decreasing)) == numeric(2, 2, {0, 1, 0, 0}));
  CHECK(elementary_nilpotent_numeric(BlockSpec({2, 1}, Ordering::Decreasing)) ==
        numeric(3, 3, {0, 0, 1, 0, 0, 0, 0, 0, 0}));
  CHECK(elementary_nilpotent_numeric(BlockSpec({1, 2}, Ordering::Increasing)) ==
        numeric(3, 3, {0, 1, 0, 0, 0, 0, 0, 0, 0}));
  Eigen::MatrixXd n = elementary_nilpotent_numeric(BlockSpec({2, 2, 1}, Ordering::Decreasing));
  CHECK(testing::svd_rank(n) == 3);
  CHECK(testing::svd_rank(n * n) == 1);
  CHECK((n * n * n).norm() == 0);
}

TEST_CASE("nilpotent characteristics from ranks") {
  NilpotentStructure s = characteristics_from_nilpotent(elementary_nilpotent_numeric(BlockSpec({3, 2, 1}, Ordering::Decreasing)));
  CHECK(s.mu == 3);
  CHECK(s.theta == std::vector<int>{2, 1});
  CHECK(s.ranks == std::vector<int>{6, 3, 1, 0});
  CHECK(characteristics_from_nilpotent(Eigen::MatrixXd::Zero(2, 2)).mu == 1);
  CHECK_THROWS_AS(characteristics_from_nilpotent(Eigen::MatrixXd::Identity(2, 2)), Error);
}

TEST_CASE("block triangularity checks") {
  Context ctx(Interval{0.0, 1.0});
  BlockSpec s({1, 1}, Ordering::Decreasing);
  MatrixFn upper = testing::rows({{"1+t", "sin(t)"}, {"0", "2"}});
  MatrixFn lower = testing::rows({{"1", "0"}, {"t", "1"}});
  MatrixFn strict = testing::rows({{"0", "exp(t)"}, {"0", "0"}});
  CHECK(is_but(upper, s, ctx));
  CHECK_FALSE(is_sut(upper, s, ctx));
  BlockCheck bad = is_but(lower, s, ctx);
  CHECK_FALSE(bad);
  CHECK(bad.bi == 1);
  CHECK(bad.bj == 0);
  CHECK(is_sut(strict, s, ctx));
  CHECK(is_sut_column(strict, s, ctx));
}

TEST_CASE("rc factor of a scaled elementary nilpotent") {
  Context ctx(Interval{0.0, 1.0});
  BlockSpec s({1, 1}, Ordering::Decreasing);
  MatrixFn n = testing::rows({{"0", "2+sin(t)"}, {"0", "0"}});
  MatrixFn r = rc_factor(n, s, ctx);
  MatrixFn want = testing::rows({{"2+sin(t)", "0"}, {"0", "1"}});
  CHECK(max_dev(r, want, ctx.check_pts) < 1e-14);
  CHECK(max_dev(r * elementary_nilpotent(s), n, ctx.check_pts) < 1e-14);
  CHECK(max_dev(rc_factor(elementary_nilpotent(s), s, ctx), MatrixFn::identity(2), ctx.check_pts) == 0);
}

TEST_CASE("rc factor rejects singular diagonal blocks and non-SUT input") {
  Context ctx(Interval{-1.0, 1.0});
  BlockSpec s({1, 1}, Ordering::Decreasing);
  CHECK_THROWS_AS(rc_factor(testing::rows({{"0", "t"}, {"0", "0"}}), s, ctx), Error);
  CHECK_THROWS_AS(rc_factor(testing::rows({{"0", "1"}, {"1", "0"}}), s, ctx), Error);
}
