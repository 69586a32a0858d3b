#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "daecanon/errors.hpp"
#include "daecanon/fixtures.hpp"
#include "daecanon/solver.hpp"
#include "oracles.hpp"
#include "random_dae.hpp"

using namespace daecanon;
using testing::RandomDae;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

std::string failing_labels(const ReproduceReport& rep) {
  std::string out;
  for (const auto& c : rep.checks)
    if (!c.pass) out += (out.empty() ? "" : ",") + c.label;
  return out;
}

bool literal_zero_product(const MatrixFn& a, const MatrixFn& b) { return (a * b).is_zero(); }

Outcome criterion1() {
  Outcome o;
  auto start = std::chrono::steady_clock::now();
  ReproduceReport rep = reproduce("berger-ilchmann", {}, 20);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(rep.all_pass(), "display mismatch: " + failing_labels(rep));
  const Stage* s4 = rep.result.stage("step4");
  o.require(s4 != nullptr, "no SSCF");
  if (s4) {
    std::vector<double> ts = uniform_points(Interval{0.1, 3.0}, 20);
    MatrixFn e = MatrixFn::from_rows({{1, 0, 0}, {0, 0, 1}, {0, 0, 0}});
    MatrixFn f = MatrixFn::from_rows({{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    o.require(max_dev(s4->P.E, e, ts) <= 1e-9 && max_dev(s4->P.F, f, ts) <= 1e-9, "final SSCF differs");
  }
  o.require(secs < 10, "runtime " + std::to_string(secs) + " s");
  o.detail << (o.pass ? "" : "; ") << "runtime " << secs << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (auto [eta, lambda] : std::vector<std::pair<double, double>>{{1, 2}, {0.5, -1}}) {
    std::string tag = "(eta=" + std::to_string(eta) + ",lambda=" + std::to_string(lambda) + ") ";
    ParamMap pm{{"eta", eta}, {"lambda", lambda}};
    ReproduceReport rep = reproduce("hmm98", pm, 20);
    const PipelineResult& r = rep.result;
    Context ctx(Interval{0, 2});
    std::vector<double> ts = uniform_points(ctx.iv, 20);
    MatrixFn omega = MatrixFn::from_rows({{parse("lambda+(-eta^2*t+eta)/((-eta*t+1)^2+1)", pm)}});
    o.require(max_dev(r.omega, omega, ts) <= 1e-9, tag + "omega differs");
    o.require(rep.find("Pi_can") && rep.find("Pi_can")->pass, tag + "Pi_can differs");
    o.require(literal_zero_product(r.A, r.B), tag + "AB is not exactly 0");
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.02 * i);
    std::vector<ScalarFn> q(3, ScalarFn(0.0));
    Eigen::VectorXd u0(1);
    u0 << std::sqrt(2.0);  // z1(0) = C gamma(0), C = 1
    Trajectory traj = solve_ivp(r, q, 0.0, u0, grid);
    double err = 0, scale = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double t = grid[k], c = std::exp(-lambda * t);
      Eigen::Vector3d x(c, c * (eta * t - 1), c * (1 - eta * t));
      err = std::max(err, (traj.x[k] - x).cwiseAbs().maxCoeff());
      scale = std::max(scale, x.cwiseAbs().maxCoeff());
    }
    o.require(err / scale < 1e-7, tag + "solution relative error " + std::to_string(err / scale));
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << tag << "solution rel err " << err / scale;
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (double alpha : {0.3, 1.0}) {
    std::string tag = "(alpha=" + std::to_string(alpha) + ") ";
    ReproduceReport rep = reproduce("campbell-moore", {{"alpha", alpha}}, 20);
    const PipelineResult& r = rep.result;
    o.require(rep.find("F0") && rep.find("F0")->pass, tag + "F0 differs");
    o.require(rep.find("F2") && rep.find("F2")->pass, tag + "F2 differs");
    const Characteristics& c = r.chars;
    o.require(c.mu == 3 && c.r == 6 && c.d == 4 && c.theta == std::vector<int>{1, 1}, tag + "characteristics differ");
    o.require(literal_zero_product(r.A, r.B), tag + "AB is not exactly 0");
    Context ctx(Interval{0.1, 1.4});
    CanonicalObjects co = projector_from_prescf(r, ctx);
    ProjectorReport pr = check_projector(r, co, uniform_points(ctx.iv, 20));
    o.require(pr.idempotency <= 1e-9 && pr.trace_dev <= 1e-9 && r.d == 4, tag + "projector identities fail");
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto specs = testing::property_specs();
  int n = 0;
  double worst_res = 0;
  for (int k = 0; k < 54; ++k) {
    RandomDae g(0xace0 + k);
    BlockSpec spec = specs[k % specs.size()];
    int d = 1 + k % 2;
    DaePair p = g.prescf(spec, d);
    std::string tag = "instance " + std::to_string(k) + ": ";
    try {
      Context ctx(Interval{0, 1});
      StructureTag st;
      st.kind = StructureKind::PreSCF;
      st.d = d;
      st.spec = spec;
      PipelineResult r = run_pipeline(p, st, ctx);
      o.require(r.failed_stage.empty(), tag + r.error);
      if (!r.failed_stage.empty()) continue;
      o.require(r.stage("step1")->iterations <= spec.mu() && r.stage("step2")->iterations <= spec.mu(),
                tag + "iteration bound");
      std::vector<double> ts = uniform_points(ctx.iv, 20);
      o.require(max_dev(r.stage("step1")->P.E, r.stage("step0")->P.E, ts) <= 1e-10 &&
                    max_dev(r.stage("step2")->P.E, r.stage("step0")->P.E, ts) <= 1e-10,
                tag + "E changed");
      const DaePair* prev = &r.input;
      for (const auto& s : r.stages) {
        o.require(verify_equivalent(*prev, s.P, s.T, ts, 1e-9).ok, tag + s.label + " not equivalent");
        prev = &s.P;
      }
      ProjectorReport pr = check_projector(r, projector_from_prescf(r, ctx), ts);
      o.require(pr.idempotency <= 1e-9 && pr.trace_dev <= 1e-9, tag + "projector");
      std::vector<ScalarFn> q;
      for (int i = 0; i < p.m(); ++i) q.push_back(g.smooth());
      Eigen::VectorXd u0(d);
      for (int i = 0; i < d; ++i) u0(i) = g.uniform(-1, 1);
      std::vector<double> grid;
      for (int i = 0; i <= 50; ++i) grid.push_back(0.02 * i);
      Trajectory traj = solve_ivp(r, q, 0.5, u0, grid);
      double res = residual(p, traj, q);
      worst_res = std::max(worst_res, res);
      o.require(res < 1e-7, tag + "residual " + std::to_string(res));
      ++n;
    } catch (const Error& e) {
      o.require(false, tag + e.what());
    }
  }
  o.require(n >= 50, "only " + std::to_string(n) + " instances completed");
  o.detail << (o.pass ? "" : "; ") << n << " instances, worst residual " << worst_res;
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto specs = testing::property_specs();
  int n = 0;
  for (int k = 0; k < 40; ++k) {
    RandomDae g(0xc0c0 + k);
    g.set_constant(true);
    BlockSpec spec = specs[k % specs.size()];
    int d = 1 + k % 2;
    DaePair p = g.prescf(spec, d);
    std::string tag = "instance " + std::to_string(k) + ": ";
    try {
      Context ctx(Interval{0, 1});
      StructureTag st;
      st.kind = StructureKind::PreSCF;
      st.d = d;
      st.spec = spec;
      PipelineResult r = run_pipeline(p, st, ctx);
      o.require(r.sscf, tag + "no SSCF: " + r.error + r.step4_diagnostic);
      if (!r.sscf) continue;
      Characteristics c = canonical_characteristics(r, ctx);
      testing::PencilStructure ref = testing::frozen_pencil_structure(p.E.eval(0.5), p.F.eval(0.5));
      o.require(c.mu == ref.mu && c.theta == ref.theta && c.d == ref.d && c.r == ref.r, tag + "structure differs");
      ++n;
    } catch (const Error& e) {
      o.require(false, tag + e.what());
    }
  }
  o.require(n >= 20, "only " + std::to_string(n) + " instances compared");
  o.detail << (o.pass ? "" : "; ") << n << " constant pairs";
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto run = [&](const DaePair& p, const StructureTag& st, const Interval& iv) {
    Context ctx(iv);
    return run_pipeline(p, st, ctx, {"step2", true});
  };
  int n = 0;
  for (int k = 0; k < 12; ++k) {
    RandomDae g(0xf00 + k);
    std::string tag = "case " + std::to_string(k) + ": ";
    try {
      Context ctx(Interval{0, 1});
      std::vector<BlockSpec> dec = {BlockSpec({1, 1}, Ordering::Decreasing), BlockSpec({2, 1}, Ordering::Decreasing),
                                    BlockSpec({2, 1, 1}, Ordering::Decreasing)};
      std::vector<BlockSpec> inc = {BlockSpec({1, 1}, Ordering::Increasing), BlockSpec({1, 2}, Ordering::Increasing),
                                    BlockSpec({1, 1, 2}, Ordering::Increasing)};
      int d = 1 + k % 2;

      StructureTag tt;
      tt.kind = StructureKind::TCanonical;
      tt.d = d;
      tt.spec = dec[k % 3];
      PipelineResult rt = run(g.t_canonical(*tt.spec, d), tt, ctx.iv);
      o.require(rt.failed_stage.empty(), tag + "T-canonical: " + rt.error);
      if (rt.failed_stage.empty()) {
        o.require(prescf_check(rt.stage("step0")->P, ctx).ok, tag + "T-canonical output not PreSCF");
        const Stage* s1 = rt.stage("step1");
        o.require(s1->iterations == 0 && s1->T.L.is_constant() && s1->T.K.is_constant() &&
                      max_dev(s1->T.K, MatrixFn::identity(s1->T.K.rows()), ctx.check_pts) == 0,
                  tag + "Step 1 not idle on T-canonical input");
        o.require(max_dev(rt.omega, rt.stage("step0")->P.F11(), ctx.check_pts) == 0, tag + "Omega changed");
      }

      StructureTag ts;
      ts.kind = StructureKind::SCanonical;
      ts.d = d;
      ts.spec = inc[k % 3];
      PipelineResult rs = run(g.s_canonical(*ts.spec, d), ts, ctx.iv);
      o.require(rs.failed_stage.empty(), tag + "S-canonical: " + rs.error);
      if (rs.failed_stage.empty()) {
        o.require(prescf_check(rs.stage("step0")->P, ctx).ok, tag + "S-canonical output not PreSCF");
        const Stage* s2 = rs.stage("step2");
        o.require(s2->iterations == 0 && max_dev(s2->T.K, MatrixFn::identity(s2->T.K.rows()), ctx.check_pts) == 0,
                  tag + "Step 2 not idle on S-canonical input");
        o.require(max_dev(s2->P.F22(), rs.R, ctx.check_pts) == 0, tag + "R changed in Step 2");
      }

      int m2 = 1 + k % 2, m1 = m2 + 1 + k % 2;
      DaePair h2 = g.hessenberg2(m1, m2);
      FrontendResult f2 = hessenberg2_step0(h2, m1, m2, ctx);
      int th = m2, d2 = m1 - m2;
      o.require(prescf_check(f2.P, ctx).ok, tag + "Hessenberg-2 output not PreSCF");
      o.require(f2.P.F.block(d2 + th, 0, th, d2).is_zero(), tag + "Hessenberg-2 F21 bottom block");
      o.require(max_dev(f2.P.F.block(d2, d2, th, th), f2.T.K.block(0, d2 + th, m1, th).transpose() * h2.F.block(0, m1, m1, m2),
                        ctx.check_pts) <= 1e-9,
                tag + "(F22)_11 != B_a2^T H12");

      int q3 = 1, q2 = 1 + k % 2, q1 = q2 + k % 2;
      double c = k % 3 == 0 ? 1.0 : -1.0;
      DaePair h3 = g.hessenberg3(q1, q2, q3, c);
      FrontendResult f3 = hessenberg3_step0(h3, q1, q2, q3, ctx);
      int d3 = f3.P.d;
      o.require(prescf_check(f3.P, ctx).ok, tag + "Hessenberg-3 output not PreSCF");
      o.require(d3 == q1 + q2 + q3 - 3 * q3, tag + "Hessenberg-3 d != m - 3 theta");
      const BlockSpec& sp = *f3.P.spec;
      MatrixFn f21 = f3.P.F21();
      int d31 = q1 - q3;
      o.require(f21.block(sp.offset(2), 0, sp.sizes[2], d3).is_zero() && f21.block(sp.offset(1), 0, sp.sizes[1], d31).is_zero(),
                tag + "Hessenberg-3 F21 pattern");
      ++n;
    } catch (const Error& e) {
      o.require(false, tag + e.what());
    }
  }
  o.detail << (o.pass ? "" : "; ") << n << " cases per frontend";
  return o;
}

Outcome criterion7() {
  Outcome o;
  testing::ExprGen gen(0x7777);
  int bad = 0;
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    std::string src = gen.expression(4);
    ScalarFn f = parse(src, gen.params());
    double t = gen.uniform(-1, 1);
    double h = 1e-5;
    double fd = (f.eval(t + h) - f.eval(t - h)) / (2 * h);
    double exact = f.derivative().eval(t);
    double rel = std::abs(fd - exact) / std::max(1.0, std::abs(exact));
    worst = std::max(worst, rel);
    if (!(rel <= 1e-6)) {
      if (bad++ < 3) o.require(false, src + " at t=" + std::to_string(t));
    }
  }
  o.require(bad == 0, std::to_string(bad) + " of 200 cases");
  o.detail << (o.pass ? "" : "; ") << "200 cases, worst relative deviation " << worst;
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 berger-ilchmann fixture regression", criterion1}, {"2 hmm98 fixture regression", criterion2},
      {"3 campbell-moore fixture regression", criterion3}, {"4 random PreSCF property suite", criterion4},
      {"5 constant-coefficient oracle", criterion5},  {"6 frontend suite", criterion6},
      {"7 derivative finite differences", criterion7}};
  int failed = 0;
  for (auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
