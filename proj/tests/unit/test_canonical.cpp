#include <doctest.h>

#include "../oracles.hpp"
#include "daecanon/fixtures.hpp"
#include "helpers.hpp"

using namespace daecanon;

TEST_CASE("change of basis of the scalar pure ODE") {
  Context ctx(Interval{0.0, 1.0});
  MatrixFn omega = testing::rows({{"-2"}});
  CHECK(max_dev(omega_change_of_basis(omega, testing::rows({{"exp(-5*t)"}}), ctx), testing::rows({{"-7"}}),
                ctx.check_pts) < 1e-12);
  CHECK(max_dev(omega_change_of_basis(omega, testing::rows({{"exp(5*t)"}}), ctx), testing::rows({{"3"}}),
                ctx.check_pts) < 1e-12);
}

TEST_CASE("change of basis agrees with the transformed ODE") {
  Context ctx(Interval{0.0, 1.0});
  MatrixFn omega = testing::rows({{"t", "1"}, {"-1", "sin(t)"}});
  MatrixFn k = testing::rows({{"2+cos(t)", "t"}, {"0", "1"}});
  MatrixFn hat = omega_change_of_basis(omega, k, ctx);
  for (double t : ctx.check_pts) {
    Eigen::MatrixXd kv = k.eval(t);
    Eigen::MatrixXd want = kv.inverse() * (omega.eval(t) * kv + k.derivative().eval(t));
    CHECK((hat.eval(t) - want).norm() < 1e-12);
  }
}

TEST_CASE("canonical characteristics of the worked examples") {
  struct Want {
    const char* name;
    int m, d, r, mu;
    std::vector<int> theta;
  };
  for (const Want& w : {Want{"berger-ilchmann", 3, 1, 2, 2, {1}}, Want{"hmm98", 3, 1, 2, 2, {1}},
                        Want{"campbell-moore", 7, 4, 6, 3, {1, 1}}}) {
    Problem pr = fixture_problem(w.name);
    Context ctx(pr.iv);
    PipelineResult r = run_pipeline(pr.pair, pr.tag, ctx);
    Characteristics c = canonical_characteristics(r, ctx);
    CHECK_MESSAGE(c.m == w.m, w.name);
    CHECK_MESSAGE(c.d == w.d, w.name);
    CHECK_MESSAGE(c.r == w.r, w.name);
    CHECK_MESSAGE(c.mu == w.mu, w.name);
    CHECK_MESSAGE(c.theta == w.theta, w.name);
    testing::PencilStructure ps = testing::frozen_pencil_structure(pr.pair.E.eval(pr.iv.mid()), pr.pair.F.eval(pr.iv.mid()));
    CHECK_MESSAGE(ps.r == w.r, w.name);
  }
}

TEST_CASE("projector is idempotent with the right range and kernel") {
  for (const std::string& name : fixture_names()) {
    Problem pr = fixture_problem(name);
    Context ctx(pr.iv);
    PipelineResult r = run_pipeline(pr.pair, pr.tag, ctx);
    CanonicalObjects c = projector_from_prescf(r, ctx);
    ProjectorReport rep = check_projector(r, c, ctx.check_pts);
    CHECK_MESSAGE(rep.ok(1e-9), name);
    CHECK(rep.min_rank == r.d);
    CHECK(rep.max_rank == r.d);
    for (double t : {pr.iv.t0 + 0.1, pr.iv.mid()}) {
      Eigen::MatrixXd pi = c.Pi.eval(t);
      CHECK((pi * pi - pi).norm() < 1e-9);
      CHECK((pi - projector_via_k(r, t)).norm() < 1e-9);
    }
  }
}

TEST_CASE("pure ODE of the worked examples") {
  Problem bi = fixture_problem("berger-ilchmann");
  Context ctx(bi.iv);
  PipelineResult r = run_pipeline(bi.pair, bi.tag, ctx);
  PureOde ode = pure_ode(r, ctx);
  CHECK(max_dev(ode.omega, testing::rows({{"-1"}}), ctx.check_pts) < 1e-12);
  CHECK(ode.u_extractor.rows() == 1);
  CHECK(ode.u_extractor.cols() == 3);
}

TEST_CASE("factor inverse of orthogonal and general factors") {
  Context ctx(Interval{0.0, 1.0});
  MatrixFn rot = testing::rows({{"cos(t)", "-sin(t)"}, {"sin(t)", "cos(t)"}});
  CHECK(max_dev(factor_inverse(rot, ctx), rot.transpose(), ctx.check_pts) < 1e-14);
  MatrixFn gen = testing::rows({{"2", "t"}, {"0", "1"}});
  MatrixFn inv = factor_inverse(gen, ctx);
  CHECK(max_dev(gen * inv, MatrixFn::identity(2), ctx.check_pts) < 1e-14);
}
