#include "daecanon/equivalence.hpp"

#include <algorithm>

#include "daecanon/errors.hpp"

namespace daecanon {

DaePair apply(const Transform& t, const DaePair& p) {
  if (t.L.rows() != p.m() || t.K.rows() != p.m() || t.L.cols() != p.m() || t.K.cols() != p.m())
    throw ShapeError("transform size does not match pair");
  DaePair q = p;
  MatrixFn le = t.L * p.E;
  q.E = le * t.K;
  q.F = t.L * p.F * t.K + le * t.K.derivative();
  return q;
}

Transform compose(const Transform& t1, const Transform& t2) {
  if (t1.L.rows() != t2.L.rows()) throw ShapeError("compose size mismatch");
  return {t2.L * t1.L, t1.K * t2.K};
}

EquivalenceReport verify_equivalent(const DaePair& p, const DaePair& q, const Transform& t,
                                    const std::vector<double>& ts, double tol) {
  EquivalenceReport r;
  r.tol = tol;
  r.samples = ts.size();
  if (p.m() != q.m() || t.L.rows() != p.m()) {
    r.ok = false;
    r.what = "size mismatch";
    return r;
  }
  MatrixFn dk = t.K.derivative();
  double worst = -1;
  for (double s : ts) {
    Eigen::MatrixXd L = t.L.eval(s), K = t.K.eval(s), Kd = dk.eval(s);
    Eigen::MatrixXd Ep = p.E.eval(s), Fp = p.F.eval(s), Eq = q.E.eval(s), Fq = q.F.eval(s);
    Eigen::MatrixXd LE = L * Ep;
    double se = std::max(1.0, Eq.cwiseAbs().maxCoeff());
    double sf = std::max(1.0, Fq.cwiseAbs().maxCoeff());
    double de = (LE * K - Eq).cwiseAbs().maxCoeff() / se;
    double df = (L * Fp * K + LE * Kd - Fq).cwiseAbs().maxCoeff() / sf;
    r.dev_E = std::max(r.dev_E, de);
    r.dev_F = std::max(r.dev_F, df);
    if (std::max(de, df) > worst) {
      worst = std::max(de, df);
      r.worst_t = s;
    }
  }
  r.ok = r.dev_E <= tol && r.dev_F <= tol;
  if (!r.ok) r.what = "deviation above tolerance";
  return r;
}

namespace {

void require_partition(const DaePair& p) {
  if (!p.tagged()) throw StructureError("PartitionMissing", "pair carries no d/a partition");
}

}  // namespace

Elementary elementary_upper(const DaePair& p, const MatrixFn& m12) {
  require_partition(p);
  int d = p.d, a = p.a();
  if (m12.rows() != d || m12.cols() != a) throw ShapeError("M12 must be d x a");
  MatrixFn e22 = p.E22();
  MatrixFn me = m12 * e22;
  Elementary out;
  out.T.L = blocks2(MatrixFn::identity(d), m12, MatrixFn(a, d), MatrixFn::identity(a));
  out.T.K = blocks2(MatrixFn::identity(d), -me, MatrixFn(a, d), MatrixFn::identity(a));
  MatrixFn f11 = p.F11() + m12 * p.F21();
  MatrixFn f12 = p.F12() + m12 * p.F22() - f11 * me - me.derivative();
  MatrixFn f22 = p.F22() - p.F21() * me;
  out.P = p;
  out.P.F = blocks2(f11, f12, p.F21(), f22);
  return out;
}

Elementary elementary_lower(const DaePair& p, const MatrixFn& m21) {
  require_partition(p);
  int d = p.d, a = p.a();
  if (m21.rows() != a || m21.cols() != d) throw ShapeError("M21 must be a x d");
  MatrixFn e22 = p.E22();
  MatrixFn em = e22 * m21;
  Elementary out;
  out.T.L = blocks2(MatrixFn::identity(d), MatrixFn(d, a), em, MatrixFn::identity(a));
  out.T.K = blocks2(MatrixFn::identity(d), MatrixFn(d, a), -m21, MatrixFn::identity(a));
  MatrixFn f11 = p.F11() - p.F12() * m21;
  MatrixFn f21 = p.F21() - p.F22() * m21 + em * f11 - e22 * m21.derivative();
  MatrixFn f22 = p.F22() + em * p.F12();
  out.P = p;
  out.P.F = blocks2(f11, p.F12(), f21, f22);
  return out;
}

bool transform_nonsingular(const Transform& t, const std::vector<double>& ts, double rel_tol) {
  for (double s : ts) {
    for (const MatrixFn* m : {&t.L, &t.K}) {
      Eigen::MatrixXd v = m->eval(s);
      if (numeric_rank(v, rel_tol) < v.rows()) return false;
    }
  }
  return true;
}

}  // namespace daecanon
