#include "daecanon/pipeline.hpp"

#include <sstream>

#include "daecanon/errors.hpp"

namespace daecanon {

namespace {

const BlockSpec& require_spec(const DaePair& p) {
  if (!p.tagged() || !p.spec) throw StructureError("PartitionMissing", "pair carries no d/blocks partition");
  return *p.spec;
}

MatrixFn zero_lower_blocks(const MatrixFn& m, const BlockSpec& spec, bool strict) {
  MatrixFn out = m;
  for (int i = 0; i < spec.mu(); ++i)
    for (int j = 0; j <= i; ++j) {
      if (!strict && j == i) continue;
      out.set_block(spec.offset(i), spec.offset(j), MatrixFn(spec.sizes[i], spec.sizes[j]));
    }
  return out;
}

void require_constant_nilpotent(const DaePair& p, const Context& ctx) {
  MatrixFn ne = elementary_nilpotent(*p.spec);
  if (max_dev(p.E22(), ne, ctx.check_pts) > ctx.tol.check)
    throw StructureError("NotPreSCF", "nilpotent part of E is not N^E");
}

}  // namespace

void guard_size(const std::vector<const MatrixFn*>& ms, const Context& ctx, const std::string& where) {
  std::size_t total = 0;
  for (const MatrixFn* m : ms) total += m->dag_size();
  if (total > ctx.tol.node_budget)
    throw ExpressionTooLarge(where + ": " + std::to_string(total) + " expression nodes exceed the budget of " +
                             std::to_string(ctx.tol.node_budget));
}

StepResult step1(const DaePair& p, const Context& ctx) {
  const BlockSpec& spec = require_spec(p);
  require_constant_nilpotent(p, ctx);
  int d = p.d, a = p.a(), mu = spec.mu();
  MatrixFn n = elementary_nilpotent(spec);
  StepResult out;
  out.T = Transform::identity(p.m());
  DaePair cur = p;
  double scale = max_abs(p.F, ctx.zero_pts);
  for (int it = 0;; ++it) {
    MatrixFn f12 = cur.F12();
    if (vanishes(f12, ctx, scale)) {
      cur.F.set_block(0, d, MatrixFn(d, a));
      out.iterations = it;
      break;
    }
    if (it == mu) throw StructureError("NonTerminating", "F12 does not vanish after mu iterations");
    MatrixFn g = f12 * inverse(cur.F22(), ctx, spec.sizes);
    MatrixFn ai = g * n;
    MatrixFn f21 = cur.F21();
    MatrixFn f11 = cur.F11() - g * f21;
    MatrixFn f12n = (f11 * g + g.derivative()) * n;
    MatrixFn inc = f21 * ai;
    BlockCheck sut = is_sut(inc, spec, ctx);
    if (!sut)
      throw StructureError("DiagonalBlockSingular", "F21 F12 F22^-1 N is not strictly block upper triangular (block " +
                                                        std::to_string(sut.bi) + "," + std::to_string(sut.bj) + ")");
    MatrixFn f22 = cur.F22() + zero_lower_blocks(inc, spec, true);
    Transform ti{blocks2(MatrixFn::identity(d), -g, MatrixFn(a, d), MatrixFn::identity(a)),
                 blocks2(MatrixFn::identity(d), ai, MatrixFn(a, d), MatrixFn::identity(a))};
    cur.F = blocks2(f11, f12n, f21, f22);
    out.T = compose(out.T, ti);
    out.terms.push_back(ai);
    out.factors.push_back(ti);
    guard_size({&cur.F, &out.T.L, &out.T.K}, ctx, "step 1");
  }
  out.P = cur;
  return out;
}

StepResult step2(const DaePair& p, const Context& ctx) {
  const BlockSpec& spec = require_spec(p);
  require_constant_nilpotent(p, ctx);
  int d = p.d, a = p.a(), mu = spec.mu();
  if (!p.F12().is_zero()) throw StructureError("StageMissing", "step 2 needs F12 = 0");
  MatrixFn n = elementary_nilpotent(spec);
  StepResult out;
  out.T = Transform::identity(p.m());
  DaePair cur = p;
  double scale = max_abs(p.F, ctx.zero_pts);
  for (int it = 0;; ++it) {
    MatrixFn f21 = cur.F21();
    if (vanishes(f21, ctx, scale)) {
      cur.F.set_block(d, 0, MatrixFn(a, d));
      out.iterations = it;
      break;
    }
    if (it == mu) throw StructureError("NonTerminating", "F21 does not vanish after mu iterations");
    MatrixFn m21 = inverse(cur.F22(), ctx, spec.sizes) * f21;
    MatrixFn nm = n * m21;
    MatrixFn f21n = nm * cur.F11() - n * m21.derivative();
    Transform tj{blocks2(MatrixFn::identity(d), MatrixFn(d, a), nm, MatrixFn::identity(a)),
                 blocks2(MatrixFn::identity(d), MatrixFn(d, a), -m21, MatrixFn::identity(a))};
    cur.F.set_block(d, 0, f21n);
    out.T = compose(out.T, tj);
    out.terms.push_back(-m21);
    out.factors.push_back(tj);
    guard_size({&cur.F, &out.T.L, &out.T.K}, ctx, "step 2");
  }
  out.P = cur;
  return out;
}

StepResult step3(const DaePair& p, const Context& ctx, MatrixFn* rinv_out) {
  const BlockSpec& spec = require_spec(p);
  int d = p.d, a = p.a();
  if (!p.F12().is_zero() || !p.F21().is_zero()) throw StructureError("StageMissing", "step 3 needs a QuasiSCF");
  MatrixFn rinv = inverse(p.F22(), ctx, spec.sizes);
  StepResult out;
  out.T = {block_diag(MatrixFn::identity(d), rinv), MatrixFn::identity(p.m())};
  out.P = apply(out.T, p);
  out.P.F = settle(out.P.F, block_diag(p.F11(), MatrixFn::identity(a)), ctx, "F3");
  out.iterations = 1;
  if (rinv_out) *rinv_out = rinv;
  return out;
}

StepResult step4(const DaePair& p, const Context& ctx, const MatrixFn* frame) {
  const BlockSpec& spec = require_spec(p);
  int d = p.d, a = p.a(), mu = spec.mu();
  MatrixFn n3 = p.E22();
  MatrixFn ne = elementary_nilpotent(spec);
  StepResult out;
  if (max_dev(n3, ne, ctx.check_pts) <= ctx.tol.zero * std::max(1.0, max_abs(n3, ctx.check_pts))) {
    out.T = Transform::identity(p.m());
    out.P = p;
    out.P.E = block_diag(MatrixFn::identity(d), ne);
    return out;
  }
  const auto& l = spec.sizes;
  auto nb = [&](int i, int j) { return spec_block(n3, spec, i, j); };
  auto neb = [&](int i, int j) { return spec_block(ne, spec, i, j); };
  std::vector<std::vector<MatrixFn>> k(mu, std::vector<MatrixFn>(mu));
  for (int i = 0; i < mu; ++i)
    for (int j = 0; j < mu; ++j) k[i][j] = MatrixFn(l[i], l[j]);
  std::vector<MatrixFn> pinv(mu);
  auto smooth = [&](const std::string& what) { throw StructureError("NeedsSmoothFactorization", what); };

  if (spec.ordering == Ordering::Decreasing) {
    k[mu - 1][mu - 1] = MatrixFn::identity(l[mu - 1]);
    for (int i = mu - 2; i >= 0; --i) {
      MatrixFn x = nb(i, i + 1) * k[i + 1][i + 1];
      int extra = l[i] - l[i + 1];
      if (extra > 0) {
        MatrixFn c = frame ? spec_block(*frame, spec, i, i).block(0, l[i + 1], l[i], extra)
                           : vstack({MatrixFn(l[i + 1], extra), MatrixFn::identity(extra)});
        x = hstack({x, c});
      }
      for (double t : ctx.check_pts) {
        Eigen::MatrixXd v = x.eval(t);
        if (numeric_rank(v, ctx.tol.rank) < v.rows())
          smooth("diagonal block " + std::to_string(i) + " of K_s is singular at t=" + std::to_string(t));
      }
      k[i][i] = x;
    }
  } else {
    k[0][0] = MatrixFn::identity(l[0]);
    for (int i = 0; i + 1 < mu; ++i) {
      MatrixFn blk = nb(i, i + 1);
      int extra = l[i + 1] - l[i];
      if (extra > 0 && !vanishes(blk.block(0, l[i], l[i], extra), ctx, max_abs(blk, ctx.zero_pts)))
        smooth("superdiagonal block " + std::to_string(i) + " lacks the [P 0] pattern");
      try {
        pinv[i] = inverse(blk.block(0, 0, l[i], l[i]), ctx);
      } catch (const SingularAtSample& e) {
        smooth(e.what());
      }
      k[i + 1][i + 1] = extra > 0 ? block_diag(pinv[i] * k[i][i], MatrixFn::identity(extra)) : pinv[i] * k[i][i];
    }
  }

  for (int q = 1; q + 2 <= mu; ++q) {
    // G_i = (N3 K - K N^E - N3 K' N^E)_{i,i+q+1} with level q of K still zero.
    std::vector<MatrixFn> g(mu - 1 - q);
    for (int i = 0; i + q + 1 < mu; ++i) {
      int j = i + q + 1;
      MatrixFn acc(l[i], l[j]);
      for (int s = i + 1; s <= j; ++s) {
        MatrixFn nis = nb(i, s);
        if (nis.is_zero()) continue;
        acc = acc + nis * k[s][j];
        MatrixFn kd = k[s][j - 1].derivative();
        if (!kd.is_zero()) acc = acc - nis * kd * neb(j - 1, j);
      }
      acc = acc - k[i][j - 1] * neb(j - 1, j);
      g[i] = acc;
    }
    if (spec.ordering == Ordering::Decreasing) {
      for (int i = mu - 2 - q; i >= 0; --i) {
        MatrixFn rhs = nb(i, i + 1) * k[i + 1][i + 1 + q] + g[i];
        int extra = l[i + q] - l[i + q + 1];
        k[i][i + q] = extra > 0 ? hstack({rhs, MatrixFn(l[i], extra)}) : rhs;
      }
    } else {
      for (int i = 0; i + q + 1 < mu; ++i) {
        int extra = l[i + q + 1] - l[i + q];
        MatrixFn lhs = extra > 0 ? hstack({k[i][i + q], MatrixFn(l[i], extra)}) : k[i][i + q];
        MatrixFn top = pinv[i] * (lhs - g[i]);
        int pad = l[i + 1] - l[i];
        k[i + 1][i + q + 1] = pad > 0 ? vstack({top, MatrixFn(pad, l[i + q + 1])}) : top;
      }
    }
  }

  MatrixFn ks(a, a);
  for (int i = 0; i < mu; ++i)
    for (int j = i; j < mu; ++j) ks.set_block(spec.offset(i), spec.offset(j), k[i][j]);
  MatrixFn ls = inverse(ks + n3 * ks.derivative(), ctx, spec.sizes);
  out.T = {block_diag(MatrixFn::identity(d), ls), block_diag(MatrixFn::identity(d), ks)};
  out.P = apply(out.T, p);
  try {
    out.P.E = settle(out.P.E, block_diag(MatrixFn::identity(d), ne), ctx, "E4");
    out.P.F = settle(out.P.F, p.F, ctx, "F4");
  } catch (const StructureError& e) {
    throw StructureError("RecursionFailed", e.what());
  }
  out.iterations = 1;
  return out;
}

const Stage* PipelineResult::stage(const std::string& label) const {
  for (const auto& s : stages)
    if (s.label == label) return &s;
  return nullptr;
}

Transform PipelineResult::total(const std::string& upto) const {
  Transform t = Transform::identity(input.m());
  for (const auto& s : stages) {
    t = compose(t, s.T);
    if (s.label == upto) return t;
  }
  if (!upto.empty()) throw StructureError("StageMissing", "stage " + upto + " was not reached");
  return t;
}

Transform PipelineResult::total() const { return total(""); }

PipelineResult run_pipeline(const DaePair& p, const StructureTag& tag, const Context& ctx, const PipelineOptions& opt) {
  PipelineResult res;
  res.input = p;
  auto push = [&](const std::string& label, const Transform& t, const DaePair& q, int its,
                  std::vector<Transform> factors = {}) {
    Stage s{label, t, q, its, {}, std::move(factors)};
    const DaePair& prev = res.stages.empty() ? res.input : res.stages.back().P;
    if (opt.verify) {
      s.check = verify_equivalent(prev, q, t, ctx.check_pts, ctx.tol.check);
      if (!s.check.ok) {
        std::ostringstream os;
        os << label << " transform does not map the previous stage (dev_E=" << s.check.dev_E
           << ", dev_F=" << s.check.dev_F << ", t=" << s.check.worst_t << ")";
        throw StructureError("VerificationFailed", os.str());
      }
    }
    res.stages.push_back(std::move(s));
  };

  FrontendResult f0 = step0(p, tag, ctx);
  push("step0", f0.T, f0.P, 0);
  res.notes = f0.notes;
  res.d = f0.P.d;
  res.spec = *f0.P.spec;
  res.chars = characteristics(res.spec, res.d);
  res.A = MatrixFn(res.d, res.spec.a());
  res.B = MatrixFn(res.spec.a(), res.d);
  if (opt.stop_after == "prescf") return res;

  std::string current = "step1";
  try {
    StepResult s1 = step1(f0.P, ctx);
    push("step1", s1.T, s1.P, s1.iterations, s1.factors);
    if (max_dev(s1.P.E, f0.P.E, ctx.check_pts) > 1e-10) throw StructureError("VerificationFailed", "step 1 changed E");
    res.A_terms = s1.terms;
    for (const auto& ai : s1.terms) res.A = res.A + ai;
    res.omega = s1.P.F11();
    res.R = s1.P.F22();
    if (opt.stop_after == "step1") return res;

    current = "step2";
    StepResult s2 = step2(s1.P, ctx);
    push("step2", s2.T, s2.P, s2.iterations, s2.factors);
    if (max_dev(s2.P.E, f0.P.E, ctx.check_pts) > 1e-10) throw StructureError("VerificationFailed", "step 2 changed E");
    res.B_terms = s2.terms;
    for (const auto& bj : s2.terms) res.B = res.B + bj;
    if (opt.stop_after == "step2") return res;

    current = "step3";
    MatrixFn rinv;
    StepResult s3 = step3(s2.P, ctx, &rinv);
    push("step3", s3.T, s3.P, s3.iterations);
    if (opt.stop_after == "scf") return res;

    current = "step4";
    try {
      StepResult s4 = step4(s3.P, ctx, &rinv);
      push("step4", s4.T, s4.P, s4.iterations);
      res.sscf = true;
    } catch (const StructureError& e) {
      if (e.kind() != "NeedsSmoothFactorization" && e.kind() != "RecursionFailed") throw;
      res.step4_diagnostic = e.what();
    } catch (const SingularAtSample& e) {
      res.step4_diagnostic = std::string("RecursionFailed: ") + e.what();
    }
  } catch (const Error& e) {
    res.failed_stage = current;
    res.error = e.what();
  }
  return res;
}

}  // namespace daecanon
