#include "daecanon/blockstruct.hpp"

#include <numeric>

#include "daecanon/errors.hpp"

namespace daecanon {

std::string to_string(Ordering o) { return o == Ordering::Decreasing ? "decreasing" : "increasing"; }

Ordering ordering_from_string(const std::string& s) {
  if (s == "decreasing" || s == "column" || s == "c") return Ordering::Decreasing;
  if (s == "increasing" || s == "row" || s == "r") return Ordering::Increasing;
  throw InputError("unknown block ordering '" + s + "'");
}

BlockSpec::BlockSpec(std::vector<int> s, Ordering o) : sizes(std::move(s)), ordering(o) {
  for (int l : sizes)
    if (l <= 0) throw InputError("block sizes must be positive");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (ordering == Ordering::Decreasing && sizes[i] > sizes[i - 1])
      throw InputError("decreasing block spec has increasing sizes");
    if (ordering == Ordering::Increasing && sizes[i] < sizes[i - 1])
      throw InputError("increasing block spec has decreasing sizes");
  }
}

int BlockSpec::a() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int BlockSpec::kappa0() const {
  if (sizes.empty()) return 0;
  return ordering == Ordering::Decreasing ? sizes.front() : sizes.back();
}

int BlockSpec::offset(int i) const { return std::accumulate(sizes.begin(), sizes.begin() + i, 0); }

bool BlockSpec::equal_sizes() const {
  for (int l : sizes)
    if (l != sizes.front()) return false;
  return true;
}

Characteristics characteristics(const BlockSpec& spec, int d) {
  Characteristics c;
  c.mu = spec.mu();
  c.d = d;
  c.a = spec.a();
  c.m = d + c.a;
  int mu = spec.mu();
  if (mu >= 2) {
    c.theta.assign(mu - 1, 0);
    if (spec.ordering == Ordering::Decreasing) {
      for (int i = 2; i <= mu; ++i) c.theta[i - 2] = spec.sizes[i - 1];
    } else {
      for (int i = 1; i <= mu - 1; ++i) c.theta[mu - i - 1] = spec.sizes[i - 1];
    }
  }
  c.r = d + c.a - spec.kappa0();
  return c;
}

Eigen::MatrixXd elementary_nilpotent_numeric(const BlockSpec& spec) {
  int a = spec.a();
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(a, a);
  for (int i = 0; i + 1 < spec.mu(); ++i) {
    int r0 = spec.offset(i), c0 = spec.offset(i + 1);
    int k = spec.ordering == Ordering::Decreasing ? spec.sizes[i + 1] : spec.sizes[i];
    for (int q = 0; q < k; ++q) n(r0 + q, c0 + q) = 1.0;
  }
  return n;
}

MatrixFn elementary_nilpotent(const BlockSpec& spec) { return MatrixFn::constant(elementary_nilpotent_numeric(spec)); }

MatrixFn spec_block(const MatrixFn& m, const BlockSpec& spec, int i, int j) {
  return m.block(spec.offset(i), spec.offset(j), spec.sizes[i], spec.sizes[j]);
}

namespace {

BlockCheck check_lower(const MatrixFn& m, const BlockSpec& spec, const Context& ctx, bool strict) {
  BlockCheck out;
  if (m.rows() != spec.a() || m.cols() != spec.a()) {
    out.ok = false;
    out.why = "shape does not match block spec";
    return out;
  }
  double scale = max_abs(m, ctx.zero_pts);
  for (int i = 0; i < spec.mu(); ++i)
    for (int j = 0; j <= i; ++j) {
      if (!strict && j == i) continue;
      if (!vanishes(spec_block(m, spec, i, j), ctx, scale)) {
        out.ok = false;
        out.bi = i;
        out.bj = j;
        out.why = "nonzero block below the block pattern";
        return out;
      }
    }
  return out;
}

BlockCheck check_superdiag_rank(const MatrixFn& n, const BlockSpec& spec, const Context& ctx, bool column) {
  BlockCheck out = check_lower(n, spec, ctx, true);
  if (!out) return out;
  for (int i = 0; i + 1 < spec.mu(); ++i) {
    MatrixFn b = spec_block(n, spec, i, i + 1);
    int want = column ? spec.sizes[i + 1] : spec.sizes[i];
    for (double t : ctx.check_pts) {
      if (numeric_rank(b.eval(t), ctx.tol.rank) != want) {
        out.ok = false;
        out.bi = i;
        out.bj = i + 1;
        out.why = "superdiagonal block rank deficient at t=" + std::to_string(t);
        return out;
      }
    }
  }
  return out;
}

}  // namespace

BlockCheck is_but(const MatrixFn& m, const BlockSpec& spec, const Context& ctx) {
  return check_lower(m, spec, ctx, false);
}

BlockCheck is_sut(const MatrixFn& m, const BlockSpec& spec, const Context& ctx) {
  return check_lower(m, spec, ctx, true);
}

BlockCheck is_sut_column(const MatrixFn& n, const BlockSpec& spec, const Context& ctx) {
  return check_superdiag_rank(n, spec, ctx, true);
}

BlockCheck is_sut_row(const MatrixFn& n, const BlockSpec& spec, const Context& ctx) {
  return check_superdiag_rank(n, spec, ctx, false);
}

MatrixFn rc_factor(const MatrixFn& n, const BlockSpec& spec, const Context& ctx) {
  bool column = spec.ordering == Ordering::Decreasing;
  BlockCheck chk = column ? is_sut_column(n, spec, ctx) : is_sut_row(n, spec, ctx);
  if (!chk) throw StructureError(column ? "NotSUTColumn" : "NotSUTRow", chk.why);
  int a = spec.a();
  MatrixFn ne = elementary_nilpotent(spec);
  MatrixFn net = ne.transpose();
  MatrixFn eye = MatrixFn::identity(a);
  MatrixFn r = column ? n * net + (eye - ne * net) : net * n + (eye - net * ne);
  for (int i = 0; i < spec.mu(); ++i) {
    MatrixFn b = spec_block(r, spec, i, i);
    for (double t : ctx.check_pts) {
      Eigen::MatrixXd bt = b.eval(t);
      double scale = std::max(1.0, n.eval(t).cwiseAbs().maxCoeff());
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(bt);
      if (svd.singularValues().minCoeff() <= ctx.tol.rank * scale)
        throw StructureError("NeedsSmoothFactorization",
                             "superdiagonal block " + std::to_string(i) + " lacks the leading nonsingular pattern at t=" +
                                 std::to_string(t));
    }
  }
  return r;
}

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

NilpotentStructure characteristics_from_nilpotent(const Eigen::MatrixXd& n, double rel_tol) {
  NilpotentStructure out;
  int a = static_cast<int>(n.rows());
  double scale = std::max(1.0, n.cwiseAbs().maxCoeff());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a, a);
  out.ranks.push_back(a);
  int k = 0;
  // Ranks are measured against the scale of N so that N^k = 0 is detected absolutely.
  auto rank_abs = [&](const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    int r = 0;
    double cut = rel_tol * std::pow(scale, k);
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > cut) ++r;
    return r;
  };
  while (out.ranks.back() > 0) {
    if (k > a) throw StructureError("NotNilpotent", "matrix is not nilpotent");
    p = p * n;
    ++k;
    out.ranks.push_back(rank_abs(p));
  }
  out.mu = k;
  for (int i = 0; i + 2 <= out.mu; ++i) out.theta.push_back(out.ranks[i + 1] - out.ranks[i + 2]);
  return out;
}

}  // namespace daecanon
