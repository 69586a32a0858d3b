#include "daecanon/canonical.hpp"

#include "daecanon/errors.hpp"

namespace daecanon {

MatrixFn factor_inverse(const MatrixFn& k, const Context& ctx) {
  bool orth = true;
  for (double t : ctx.check_pts) {
    Eigen::MatrixXd v = k.eval(t);
    if ((v.transpose() * v - Eigen::MatrixXd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff() > 1e-12) {
      orth = false;
      break;
    }
  }
  return orth ? k.transpose() : inverse(k, ctx);
}

namespace {

const Stage& need(const PipelineResult& r, const std::string& label) {
  const Stage* s = r.stage(label);
  if (!s) throw StructureError("StageMissing", "pipeline did not reach " + label);
  return *s;
}

}  // namespace

CanonicalObjects projector_from_prescf(const PipelineResult& r, const Context& ctx) {
  need(r, "step2");
  int d = r.d, a = r.spec.a();
  CanonicalObjects c;
  c.A = r.A;
  c.B = r.B;
  c.omega = r.omega;
  MatrixFn ab = r.A * r.B;
  MatrixFn ba = r.B * r.A;
  c.inner = blocks2(MatrixFn::identity(d) + ab, -(r.A + ab * r.A), r.B, -ba);
  MatrixFn k0 = r.total("step0").K;
  c.Pi = k0 * c.inner * factor_inverse(k0, ctx);
  MatrixFn k = r.total("step2").K;
  c.S_basis = k.block(0, 0, r.input.m(), d);
  c.N_basis = k.block(0, d, r.input.m(), a);
  return c;
}

Eigen::MatrixXd projector_via_k(const PipelineResult& r, double t) {
  Eigen::MatrixXd k = r.total("step2").K.eval(t);
  int m = static_cast<int>(k.rows());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  p.topLeftCorner(r.d, r.d).setIdentity();
  return k * p * k.inverse();
}

bool ProjectorReport::ok(double tol) const {
  return idempotency <= tol && trace_dev <= tol && range <= tol && kernel <= tol && route_dev <= tol &&
         complement_sigma > tol && min_rank == max_rank;
}

ProjectorReport check_projector(const PipelineResult& r, const CanonicalObjects& c, const std::vector<double>& ts) {
  ProjectorReport rep;
  rep.min_rank = 1 << 30;
  rep.complement_sigma = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    Eigen::MatrixXd p = c.Pi.eval(t), s = c.S_basis.eval(t), n = c.N_basis.eval(t);
    double sc = std::max(1.0, p.cwiseAbs().maxCoeff());
    rep.idempotency = std::max(rep.idempotency, (p * p - p).cwiseAbs().maxCoeff() / sc);
    rep.trace_dev = std::max(rep.trace_dev, std::abs(p.trace() - r.d) / sc);
    int rk = numeric_rank(p, 1e-9);
    rep.min_rank = std::min(rep.min_rank, rk);
    rep.max_rank = std::max(rep.max_rank, rk);
    if (s.size()) rep.range = std::max(rep.range, (p * s - s).cwiseAbs().maxCoeff() / sc);
    if (n.size()) rep.kernel = std::max(rep.kernel, (p * n).cwiseAbs().maxCoeff() / sc);
    Eigen::MatrixXd sn(s.rows(), s.cols() + n.cols());
    sn << s, n;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sn);
    const auto& sv = svd.singularValues();
    rep.complement_sigma = std::min(rep.complement_sigma, sv(sv.size() - 1) / sv(0));
    rep.route_dev = std::max(rep.route_dev, (p - projector_via_k(r, t)).cwiseAbs().maxCoeff() / sc);
  }
  if (ts.empty()) rep.min_rank = 0;
  return rep;
}

PureOde pure_ode(const PipelineResult& r, const Context& ctx) {
  need(r, "step1");
  int d = r.d, a = r.spec.a(), m = r.input.m();
  PureOde out;
  out.omega = r.omega;
  if (d == 0) {
    out.u_extractor = MatrixFn(0, m);
    out.q_mapper = MatrixFn(0, m);
    return out;
  }
  // (K0 K1)^-1 = K1^-1 K0^-1 with K1^-1 = [[I, -A], [0, I]].
  MatrixFn k0inv = factor_inverse(r.total("step0").K, ctx);
  MatrixFn top = hstack({MatrixFn::identity(d), -r.A});
  (void)a;
  out.u_extractor = top * k0inv;
  out.q_mapper = r.total("step1").L.block(0, 0, d, m);
  return out;
}

MatrixFn omega_change_of_basis(const MatrixFn& omega, const MatrixFn& k11, const Context& ctx) {
  if (k11.rows() != omega.rows() || k11.cols() != omega.cols()) throw ShapeError("K11 must match Omega");
  MatrixFn kinv;
  try {
    kinv = inverse(k11, ctx);
  } catch (const SingularAtSample& e) {
    throw StructureError("SingularK11", e.what());
  }
  return kinv * omega * k11 + kinv * k11.derivative();
}

Characteristics canonical_characteristics(const PipelineResult& r, const Context& ctx) {
  (void)ctx;
  Characteristics c = characteristics(r.spec, r.d);
  if (r.sscf) {
    const Stage& s4 = need(r, "step4");
    Eigen::MatrixXd n = s4.P.E22().eval(r.input.m() ? ctx.check_pts.front() : 0.0);
    NilpotentStructure ns = characteristics_from_nilpotent(n);
    if (ns.mu != c.mu || ns.theta != c.theta)
      throw StructureError("CharacteristicsMismatch", "declared blocks disagree with the SSCF nilpotent structure");
  }
  return c;
}

}  // namespace daecanon
