#include "daecanon/frontends.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "daecanon/errors.hpp"

namespace daecanon {

std::string to_string(StructureKind k) {
  switch (k) {
    case StructureKind::PreSCF: return "prescf";
    case StructureKind::TCanonical: return "t_canonical";
    case StructureKind::SCanonical: return "s_canonical";
    case StructureKind::Hessenberg2: return "hessenberg2";
    case StructureKind::Hessenberg3: return "hessenberg3";
    case StructureKind::Multibody: return "multibody";
    case StructureKind::CustomTransform: return "custom_transform";
  }
  return "?";
}

StructureKind structure_from_string(const std::string& s) {
  for (auto k : {StructureKind::PreSCF, StructureKind::TCanonical, StructureKind::SCanonical, StructureKind::Hessenberg2,
                 StructureKind::Hessenberg3, StructureKind::Multibody, StructureKind::CustomTransform})
    if (to_string(k) == s) return k;
  throw InputError("unknown structure kind '" + s + "'");
}

MatrixFn settle(const MatrixFn& got, const MatrixFn& want, const Context& ctx, const std::string& what) {
  if (got.rows() != want.rows() || got.cols() != want.cols()) throw ShapeError(what + ": shape mismatch");
  double scale = std::max(1.0, max_abs(want, ctx.check_pts));
  double dev = max_dev(got, want, ctx.check_pts);
  if (!(dev <= ctx.tol.check * scale)) {
    std::ostringstream os;
    os << what << " deviates from its predicted form by " << dev;
    throw StructureError("VerificationFailed", os.str());
  }
  return want;
}

namespace {

MatrixFn scf_e(int d, const BlockSpec& spec) {
  return block_diag(MatrixFn::identity(d), elementary_nilpotent(spec));
}

double sigma_min_ratio(const Eigen::MatrixXd& m, double ref) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1) / std::max(ref, 1e-300);
}

double reference_point(const Context& ctx) {
  double mid = ctx.iv.mid();
  if (ctx.iv.admissible(mid)) return mid;
  return ctx.check_pts[ctx.check_pts.size() / 2];
}

// Expression-level Gram-Schmidt; the first entry that is nonzero at the reference
// point of each column is made positive.
MatrixFn orthonormalize(const std::vector<std::vector<ScalarFn>>& vs, int n, const Context& ctx,
                        const std::string& what) {
  int k = static_cast<int>(vs.size());
  MatrixFn q(n, k);
  double tref = reference_point(ctx);
  for (int c = 0; c < k; ++c) {
    std::vector<ScalarFn> w = vs[c];
    for (int p = 0; p < c; ++p) {
      ScalarFn dot(0.0);
      for (int i = 0; i < n; ++i) dot = dot + w[i] * q(i, p);
      if (dot.is_zero()) continue;
      for (int i = 0; i < n; ++i) w[i] = w[i] - dot * q(i, p);
    }
    ScalarFn nn(0.0);
    for (int i = 0; i < n; ++i) nn = nn + w[i] * w[i];
    for (double t : ctx.check_pts)
      if (!(nn.eval(t) > 1e-20)) throw StructureError("RankDrop", what + ": basis vector degenerates");
    ScalarFn norm = nn.is_one() ? ScalarFn(1.0) : sqrt(nn);
    double sign = 1.0;
    std::vector<double> vals(n);
    double vmax = 0;
    for (int i = 0; i < n; ++i) {
      vals[i] = w[i].eval(tref);
      vmax = std::max(vmax, std::abs(vals[i]));
    }
    for (int i = 0; i < n; ++i)
      if (std::abs(vals[i]) > 1e-8 * vmax) {
        sign = vals[i] < 0 ? -1.0 : 1.0;
        break;
      }
    for (int i = 0; i < n; ++i) {
      ScalarFn e = norm.is_one() ? w[i] : w[i] / norm;
      q.set(i, c, sign < 0 ? -e : e);
    }
  }
  return q;
}

void validate_basis(const MatrixFn& h, const KernelBasis& b, const Context& ctx, const std::string& what) {
  int k = h.rows(), n = h.cols();
  if (b.Bd.rows() != n || b.Bd.cols() != n - k || b.Ba.rows() != n || b.Ba.cols() != k)
    throw ShapeError(what + ": basis shapes do not match");
  MatrixFn q = hstack({b.Bd, b.Ba});
  double hs = std::max(1.0, max_abs(h, ctx.check_pts));
  for (double t : ctx.check_pts) {
    Eigen::MatrixXd qt = q.eval(t);
    double orth = (qt.transpose() * qt - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(orth <= ctx.tol.check)) throw StructureError("BasisUnavailable", what + ": basis is not orthonormal");
    if (n - k > 0) {
      double ker = (h.eval(t) * b.Bd.eval(t)).cwiseAbs().maxCoeff();
      if (!(ker <= ctx.tol.check * hs)) throw StructureError("BasisUnavailable", what + ": Bd does not span ker H");
    }
  }
}

void finalize_prescf(DaePair& q, const Context& ctx, const std::string& what) {
  q.E = settle(q.E, scf_e(q.d, *q.spec), ctx, what + " E0");
  q.F = snap_zeros(q.F, ctx, max_abs(q.F, ctx.zero_pts));
  PrescfDiagnosis diag = prescf_check(q, ctx);
  if (!diag) {
    std::string msg = what + " output is not in PreSCF:";
    for (const auto& s : diag.issues) msg += " " + s;
    throw StructureError("NotPreSCF", msg);
  }
}

void require_identity(const MatrixFn& m, const Context& ctx, const std::string& what) {
  settle(m, MatrixFn::identity(m.rows()), ctx, what);
}

void require_zero(const MatrixFn& m, const Context& ctx, const std::string& what) {
  if (!vanishes(m, ctx, 1.0)) throw StructureError("PatternViolated", what + " must vanish");
}

void require_nonsingular(const MatrixFn& m, const Context& ctx, const std::string& what) {
  for (double t : ctx.check_pts) {
    Eigen::MatrixXd v = m.eval(t);
    if (numeric_rank(v, ctx.tol.rank) < v.rows()) throw SingularAtSample(what + " is singular", t);
  }
}

}  // namespace

PrescfDiagnosis prescf_check(const DaePair& p, const Context& ctx) {
  PrescfDiagnosis out;
  auto fail = [&](const std::string& s, int bi = -1, int bj = -1) {
    out.ok = false;
    out.issues.push_back(s);
    if (out.bi < 0) {
      out.bi = bi;
      out.bj = bj;
    }
  };
  if (!p.tagged() || !p.spec) {
    fail("pair carries no partition");
    return out;
  }
  const BlockSpec& spec = *p.spec;
  if (spec.a() != p.a()) {
    fail("block sizes do not sum to a");
    return out;
  }
  MatrixFn e = scf_e(p.d, spec);
  if (max_dev(p.E, e, ctx.check_pts) > ctx.tol.check) fail("E is not diag(I_d, N^E)");
  MatrixFn f22 = p.F22();
  BlockCheck but = is_but(f22, spec, ctx);
  if (!but) fail("F22 is not block upper triangular", but.bi, but.bj);
  for (int i = 0; i < spec.mu(); ++i) {
    MatrixFn b = spec_block(f22, spec, i, i);
    for (double t : ctx.check_pts) {
      Eigen::MatrixXd bt = b.eval(t);
      if (numeric_rank(bt, ctx.tol.rank) < bt.rows()) {
        fail("diagonal block " + std::to_string(i) + " of F22 is singular at t=" + std::to_string(t), i, i);
        break;
      }
    }
  }
  if (p.d > 0) {
    MatrixFn f21 = p.F21(), f12 = p.F12();
    if (!f21.is_zero() && !f12.is_zero()) {
      double scale = 1.0;
      std::vector<Eigen::MatrixXd> prods;
      for (double t : ctx.zero_pts) {
        prods.push_back(f21.eval(t) * f12.eval(t));
        scale = std::max(scale, prods.back().cwiseAbs().maxCoeff());
      }
      bool ok = true;
      for (int i = 0; i < spec.mu() && ok; ++i)
        for (int j = 0; j < i && ok; ++j)
          for (const auto& m : prods) {
            double v = m.block(spec.offset(i), spec.offset(j), spec.sizes[i], spec.sizes[j]).cwiseAbs().maxCoeff();
            if (v > 1e3 * ctx.tol.zero * scale) {
              fail("F21 F12 is not block upper triangular", i, j);
              ok = false;
              break;
            }
          }
    }
  }
  return out;
}

FrontendResult from_t_canonical(const DaePair& p, const Context& ctx) {
  if (!p.tagged() || !p.spec) throw StructureError("PartitionMissing", "T-canonical input needs d and blocks");
  if (p.spec->ordering != Ordering::Decreasing) throw InputError("T-canonical form needs decreasing block sizes");
  int d = p.d, a = p.a();
  require_identity(p.E.block(0, 0, d, d), ctx, "E11");
  require_zero(p.E.block(0, d, d, a), ctx, "E12");
  require_zero(p.E.block(d, 0, a, d), ctx, "E21");
  MatrixFn n = p.E22();
  MatrixFn r = rc_factor(n, *p.spec, ctx);
  MatrixFn rinv = inverse(r, ctx, p.spec->sizes);
  FrontendResult out;
  out.T = {block_diag(MatrixFn::identity(d), rinv), MatrixFn::identity(p.m())};
  out.P = apply(out.T, p);
  finalize_prescf(out.P, ctx, "T-canonical");
  if (out.P.F12().is_zero()) out.notes.push_back("F12 = 0: Steps 1 and 2 leave Omega and R unchanged");
  return out;
}

FrontendResult from_s_canonical(const DaePair& p, const Context& ctx) {
  if (!p.tagged() || !p.spec) throw StructureError("PartitionMissing", "S-canonical input needs d and blocks");
  if (p.spec->ordering != Ordering::Increasing) throw InputError("S-canonical form needs increasing block sizes");
  int d = p.d, a = p.a();
  require_identity(p.E.block(0, 0, d, d), ctx, "E11");
  require_zero(p.E.block(d, 0, a, d), ctx, "E21");
  MatrixFn n = p.E22(), e12 = p.E.block(0, d, d, a);
  MatrixFn r = rc_factor(n, *p.spec, ctx);
  MatrixFn rinv = inverse(r, ctx, p.spec->sizes);
  FrontendResult out;
  out.T = {MatrixFn::identity(p.m()), blocks2(MatrixFn::identity(d), -(e12 * rinv), MatrixFn(a, d), rinv)};
  out.P = apply(out.T, p);
  finalize_prescf(out.P, ctx, "S-canonical");
  if (out.P.F21().is_zero()) out.notes.push_back("F21 = 0: Steps 1 and 2 leave Omega and R unchanged");
  return out;
}

KernelBasis kernel_basis(const MatrixFn& h, const Context& ctx) {
  int k = h.rows(), n = h.cols();
  if (k > n) throw ShapeError("kernel_basis: H has more rows than columns");
  std::vector<double> hmax;
  for (double t : ctx.check_pts) {
    Eigen::MatrixXd ht = h.eval(t);
    if (numeric_rank(ht, ctx.tol.rank) != k) throw StructureError("RankDrop", "H loses row rank at t=" + std::to_string(t));
    hmax.push_back(ht.norm());
  }
  KernelBasis out;
  std::vector<std::vector<ScalarFn>> rows(k, std::vector<ScalarFn>(n));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = h(i, j);
  out.Ba = orthonormalize(rows, n, ctx, "im H^T");
  if (k == n) {
    out.Bd = MatrixFn(n, 0);
    return out;
  }
  if (k == 0) {
    out.Bd = MatrixFn::identity(n);
    return out;
  }
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + k, true);
  std::vector<int> best;
  double best_score = -1;
  do {
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (mask[j]) cols.push_back(j);
    double score = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < ctx.check_pts.size(); ++q) {
      Eigen::MatrixXd ht = h.eval(ctx.check_pts[q]);
      Eigen::MatrixXd sub(k, k);
      for (int c = 0; c < k; ++c) sub.col(c) = ht.col(cols[c]);
      score = std::min(score, sigma_min_ratio(sub, hmax[q]));
    }
    if (score > best_score) {
      best_score = score;
      best = cols;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  if (best_score <= 1e-8)
    throw StructureError("BasisUnavailable", "no single pivot pattern is nonsingular on the interval; supply bases");
  MatrixFn hs(k, k);
  for (int c = 0; c < k; ++c)
    for (int i = 0; i < k; ++i) hs.set(i, c, h(i, best[c]));
  MatrixFn hsinv = inverse(hs, ctx);
  std::vector<std::vector<ScalarFn>> ker;
  for (int f = 0; f < n; ++f) {
    if (std::find(best.begin(), best.end(), f) != best.end()) continue;
    std::vector<ScalarFn> v(n, ScalarFn(0.0));
    v[f] = ScalarFn(1.0);
    MatrixFn sol = -(hsinv * h.block(0, f, k, 1));
    for (int c = 0; c < k; ++c) v[best[c]] = sol(c, 0);
    ker.push_back(v);
  }
  out.Bd = orthonormalize(ker, n, ctx, "ker H");
  return out;
}

FrontendResult hessenberg2_step0(const DaePair& p, int m1, int m2, const Context& ctx,
                                 const std::optional<KernelBasis>& user, const std::vector<ScalarFn>& scaling) {
  if (m1 + m2 != p.m() || m2 <= 0 || m1 < m2) throw InputError("hessenberg2 sizes must satisfy m1 >= m2 > 0, m1 + m2 = m");
  int m = p.m();
  settle(p.E, block_diag(MatrixFn::identity(m1), MatrixFn(m2, m2)), ctx, "Hessenberg E");
  require_zero(p.F.block(m1, m1, m2, m2), ctx, "H22");
  MatrixFn h12 = p.F.block(0, m1, m1, m2), h21 = p.F.block(m1, 0, m2, m1);
  require_nonsingular(h21 * h12, ctx, "H21 H12");
  KernelBasis b = user ? *user : kernel_basis(h21, ctx);
  validate_basis(h21, b, ctx, "B_d2/B_a2");
  int theta = m2, d = m1 - m2;
  FrontendResult out;
  out.T.L = vstack({hstack({b.Bd.transpose(), MatrixFn(d, theta)}), hstack({b.Ba.transpose(), MatrixFn(theta, theta)}),
                    hstack({MatrixFn(theta, m1), MatrixFn::identity(theta)})});
  out.T.K = vstack({hstack({b.Bd, MatrixFn(m1, theta), b.Ba}), hstack({MatrixFn(theta, d), MatrixFn::identity(theta),
                                                                       MatrixFn(theta, theta)})});
  (void)m;
  if (!scaling.empty()) {
    if (static_cast<int>(scaling.size()) != m1) throw InputError("hessenberg2 scaling needs m1 entries");
    for (int i = 0; i < m1; ++i) {
      int col = i < d ? i : d + theta + (i - d), row = i;
      for (double t : ctx.check_pts)
        if (std::abs(scaling[i].eval(t)) <= ctx.tol.singular) throw SingularAtSample("column scaling vanishes", t);
      ScalarFn inv = ScalarFn(1.0) / scaling[i];
      for (int r = 0; r < m1; ++r) out.T.K.set(r, col, out.T.K(r, col) * scaling[i]);
      for (int c = 0; c < m1; ++c) out.T.L.set(row, c, out.T.L(row, c) * inv);
    }
    out.notes.push_back("column scaling applied");
  }
  out.P = apply(out.T, p);
  out.P.d = d;
  out.P.spec = BlockSpec({theta, theta}, Ordering::Decreasing);
  finalize_prescf(out.P, ctx, "Hessenberg-2");
  if (!out.P.F.block(d + theta, 0, theta, d).is_zero())
    throw StructureError("PatternViolated", "bottom block of F21 does not vanish");
  require_nonsingular(out.P.F.block(d, d, theta, theta), ctx, "B_a2^T H12");
  require_nonsingular(out.P.F.block(d + theta, d + theta, theta, theta), ctx, "H21 B_a2");
  out.notes.push_back(user ? "user-supplied kernel bases" : "pivoted kernel bases");
  return out;
}

FrontendResult hessenberg3_step0(const DaePair& p, int m1, int m2, int m3, const Context& ctx,
                                 const std::optional<KernelBasis>& user) {
  if (m1 + m2 + m3 != p.m() || m3 <= 0 || m1 < m2 || m2 < m3)
    throw InputError("hessenberg3 sizes must satisfy m1 >= m2 >= m3 > 0, sum = m");
  int m = p.m();
  settle(p.E, block_diag(MatrixFn::identity(m1 + m2), MatrixFn(m3, m3)), ctx, "Hessenberg E");
  MatrixFn h13 = p.F.block(0, m1 + m2, m1, m3);
  MatrixFn h21 = p.F.block(m1, 0, m2, m1);
  MatrixFn h32 = p.F.block(m1 + m2, m1, m3, m2);
  require_zero(p.F.block(m1, m1 + m2, m2, m3), ctx, "H23");
  require_zero(p.F.block(m1 + m2, 0, m3, m1), ctx, "H31");
  require_zero(p.F.block(m1 + m2, m1 + m2, m3, m3), ctx, "H33");
  double c = h21.eval(reference_point(ctx))(0, 0);
  if (std::abs(c) < 1e-12) throw StructureError("PatternViolated", "H21 must be [c I 0] with c != 0");
  MatrixFn cI = ScalarFn(c) * MatrixFn::identity(m2);
  settle(h21.block(0, 0, m2, m2), cI, ctx, "H21 leading block");
  if (m1 > m2) require_zero(h21.block(0, m2, m2, m1 - m2), ctx, "H21 trailing block");
  require_nonsingular(h32 * h21 * h13, ctx, "H32 H21 H13");

  KernelBasis b3 = user ? *user : kernel_basis(h32, ctx);
  validate_basis(h32, b3, ctx, "B_d3/B_a3");
  int theta = m3, d2 = m2 - theta, d1 = m1 - theta, d = d1 + d2;
  MatrixFn bd2 = block_diag(b3.Bd, MatrixFn::identity(m1 - m2));
  MatrixFn ba2 = vstack({b3.Ba, MatrixFn(m1 - m2, theta)});
  if (m1 == m2) bd2 = b3.Bd;

  FrontendResult out;
  out.T.L = vstack({hstack({bd2.transpose(), MatrixFn(d1, m2), MatrixFn(d1, m3)}),
                    hstack({MatrixFn(d2, m1), b3.Bd.transpose(), MatrixFn(d2, m3)}),
                    hstack({ba2.transpose(), MatrixFn(theta, m2), MatrixFn(theta, m3)}),
                    hstack({MatrixFn(theta, m1), b3.Ba.transpose(), MatrixFn(theta, m3)}),
                    hstack({MatrixFn(theta, m1), MatrixFn(theta, m2), MatrixFn::identity(theta)})});
  out.T.K = vstack({hstack({bd2, MatrixFn(m1, d2), MatrixFn(m1, theta), ba2, MatrixFn(m1, theta)}),
                    hstack({MatrixFn(m2, d1), b3.Bd, MatrixFn(m2, theta), MatrixFn(m2, theta), b3.Ba}),
                    hstack({MatrixFn(m3, d1), MatrixFn(m3, d2), MatrixFn::identity(theta), MatrixFn(m3, theta),
                            MatrixFn(m3, theta)})});
  (void)m;
  out.P = apply(out.T, p);
  out.P.d = d;
  out.P.spec = BlockSpec({theta, theta, theta}, Ordering::Decreasing);
  out.P.F.set_block(d + theta, d + theta, settle(out.P.F.block(d + theta, d + theta, theta, theta),
                                                 ScalarFn(c) * MatrixFn::identity(theta), ctx, "(F22)_22"));
  finalize_prescf(out.P, ctx, "Hessenberg-3");
  if (!out.P.F.block(d + 2 * theta, 0, theta, d).is_zero())
    throw StructureError("PatternViolated", "bottom block row of F21 does not vanish");
  if (!out.P.F.block(d + theta, 0, theta, d1).is_zero())
    throw StructureError("PatternViolated", "F21 block (2,1) does not vanish");
  out.notes.push_back(user ? "user-supplied kernel bases" : "pivoted kernel bases");
  return out;
}

DaePair multibody_pair(const MultibodyInput& in) {
  int nv = in.M.rows(), np = in.G.cols(), nl = in.G.rows();
  if (in.M.cols() != nv || in.D.rows() != nv || in.D.cols() != nv || in.Kstiff.rows() != nv || in.Kstiff.cols() != np)
    throw ShapeError("multibody: M, D, K shapes do not conform");
  if (np > nv) throw ShapeError("multibody: more positions than velocities");
  MatrixFn z = in.Z ? *in.Z : MatrixFn::identity(np);
  if (z.rows() != np || z.cols() != np) throw ShapeError("multibody: Z must be n_p x n_p");
  MatrixFn zv = hstack({z, MatrixFn(np, nv - np)});
  DaePair p;
  p.E = block_diag(block_diag(MatrixFn::identity(np), in.M), MatrixFn(nl, nl));
  p.F = vstack({hstack({MatrixFn(np, np), -zv, MatrixFn(np, nl)}),
                hstack({in.Kstiff, in.D, zv.transpose() * in.G.transpose()}),
                hstack({in.G, MatrixFn(nl, nv), MatrixFn(nl, nl)})});
  return p;
}

MultibodyResult multibody_frontend(const MultibodyInput& in, const Context& ctx) {
  int nv = in.M.rows(), np = in.G.cols(), nl = in.G.rows();
  MultibodyResult out;
  out.original = multibody_pair(in);
  MatrixFn minv;
  try {
    minv = inverse(in.M, ctx);
  } catch (const SingularAtSample& e) {
    throw StructureError("SingularMass", e.what());
  }
  for (double t : ctx.check_pts)
    if (numeric_rank(in.G.eval(t), ctx.tol.rank) != nl)
      throw StructureError("RankDrop", "G loses row rank at t=" + std::to_string(t));
  Transform th;
  th.L = vstack({hstack({MatrixFn(nv, np), minv, MatrixFn(nv, nl)}),
                 hstack({MatrixFn::identity(np), MatrixFn(np, nv), MatrixFn(np, nl)}),
                 hstack({MatrixFn(nl, np), MatrixFn(nl, nv), MatrixFn::identity(nl)})});
  th.K = vstack({hstack({MatrixFn(np, nv), MatrixFn::identity(np), MatrixFn(np, nl)}),
                 hstack({MatrixFn::identity(nv), MatrixFn(nv, np), MatrixFn(nv, nl)}),
                 hstack({MatrixFn(nl, nv), MatrixFn(nl, np), MatrixFn::identity(nl)})});
  out.T = th;
  if (in.Z) {
    MatrixFn zinv = inverse(*in.Z, ctx);
    Transform tz{block_diag(block_diag(MatrixFn::identity(nv), zinv), MatrixFn::identity(nl)),
                 block_diag(block_diag(MatrixFn::identity(nv), *in.Z), MatrixFn::identity(nl))};
    out.T = compose(th, tz);
  }
  out.hessenberg = apply(out.T, out.original);
  out.hessenberg.F = snap_zeros(out.hessenberg.F, ctx, max_abs(out.hessenberg.F, ctx.zero_pts));
  out.m1 = nv;
  out.m2 = np;
  out.m3 = nl;
  return out;
}

Transform permutation_transform(const std::vector<int>& perm) {
  int m = static_cast<int>(perm.size());
  std::vector<bool> seen(m, false);
  for (int v : perm) {
    if (v < 0 || v >= m || seen[v]) throw InputError("invalid permutation");
    seen[v] = true;
  }
  Eigen::MatrixXd pm = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) pm(i, perm[i]) = 1.0;
  return {MatrixFn::constant(pm), MatrixFn::constant(pm.transpose())};
}

FrontendResult apply_permutation_frontend(const DaePair& p, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != p.m()) throw InputError("permutation size does not match m");
  FrontendResult out;
  out.T = permutation_transform(perm);
  out.P = apply(out.T, p);
  out.P.d = -1;
  out.P.spec.reset();
  return out;
}

FrontendResult custom_transform(const DaePair& p, const Transform& t, int d, const BlockSpec& spec,
                                const Context& ctx) {
  if (!transform_nonsingular(t, ctx.check_pts)) throw StructureError("SingularTransform", "custom L0/K0 is singular");
  FrontendResult out;
  out.T = t;
  out.P = apply(t, p);
  out.P.d = d;
  out.P.spec = spec;
  finalize_prescf(out.P, ctx, "custom transform");
  return out;
}

FrontendResult step0(const DaePair& p, const StructureTag& tag, const Context& ctx) {
  DaePair work = p;
  Transform pre = Transform::identity(p.m());
  std::vector<std::string> notes;
  if (tag.permutation) {
    FrontendResult perm = apply_permutation_frontend(p, *tag.permutation);
    work = perm.P;
    pre = perm.T;
    notes.push_back("permutation applied");
  }
  auto tagged = [&](DaePair q) {
    if (tag.d < 0 || !tag.spec) throw StructureError("PartitionMissing", to_string(tag.kind) + " needs d and blocks");
    q.d = tag.d;
    q.spec = tag.spec;
    if (tag.spec->a() != q.a()) throw InputError("blocks do not sum to m - d");
    return q;
  };
  FrontendResult r;
  switch (tag.kind) {
    case StructureKind::PreSCF: {
      r.P = tagged(work);
      r.T = Transform::identity(p.m());
      finalize_prescf(r.P, ctx, "PreSCF input");
      break;
    }
    case StructureKind::TCanonical: r = from_t_canonical(tagged(work), ctx); break;
    case StructureKind::SCanonical: r = from_s_canonical(tagged(work), ctx); break;
    case StructureKind::Hessenberg2:
      if (tag.hess_sizes.size() != 2) throw InputError("hessenberg2 needs two block sizes");
      r = hessenberg2_step0(work, tag.hess_sizes[0], tag.hess_sizes[1], ctx, tag.basis, tag.scaling);
      break;
    case StructureKind::Hessenberg3:
      if (tag.hess_sizes.size() != 3) throw InputError("hessenberg3 needs three block sizes");
      r = hessenberg3_step0(work, tag.hess_sizes[0], tag.hess_sizes[1], tag.hess_sizes[2], ctx, tag.basis);
      break;
    case StructureKind::Multibody: {
      if (!tag.multibody) throw InputError("multibody structure needs M, D, K, G");
      MultibodyResult mb = multibody_frontend(*tag.multibody, ctx);
      settle(work.E, mb.original.E, ctx, "multibody E");
      settle(work.F, mb.original.F, ctx, "multibody F");
      FrontendResult h = hessenberg3_step0(mb.hessenberg, mb.m1, mb.m2, mb.m3, ctx, tag.basis);
      r.T = compose(mb.T, h.T);
      r.P = h.P;
      r.notes = h.notes;
      break;
    }
    case StructureKind::CustomTransform:
      if (!tag.custom) throw InputError("custom_transform structure needs L0 and K0");
      if (tag.d < 0 || !tag.spec) throw StructureError("PartitionMissing", "custom_transform needs d and blocks");
      r = custom_transform(work, *tag.custom, tag.d, *tag.spec, ctx);
      break;
  }
  r.T = compose(pre, r.T);
  notes.insert(notes.end(), r.notes.begin(), r.notes.end());
  r.notes = notes;
  return r;
}

}  // namespace daecanon
