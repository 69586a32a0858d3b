#include "daecanon/matrix_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "daecanon/errors.hpp"

namespace daecanon {

MatrixFn::MatrixFn(int rows, int cols) : r_(rows), c_(cols), e_(static_cast<std::size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw ShapeError("negative dimension");
}

MatrixFn::MatrixFn(int rows, int cols, std::vector<ScalarFn> entries)
    : r_(rows), c_(cols), e_(std::move(entries)) {
  if (static_cast<int>(e_.size()) != rows * cols) throw ShapeError("entry count does not match shape");
}

MatrixFn MatrixFn::identity(int n) {
  MatrixFn m(n, n);
  for (int i = 0; i < n; ++i) m.e_[static_cast<std::size_t>(i) * n + i] = ScalarFn(1.0);
  return m;
}

MatrixFn MatrixFn::constant(const Eigen::MatrixXd& a) {
  MatrixFn m(static_cast<int>(a.rows()), static_cast<int>(a.cols()));
  for (int i = 0; i < m.r_; ++i)
    for (int j = 0; j < m.c_; ++j) m.e_[static_cast<std::size_t>(i) * m.c_ + j] = ScalarFn(a(i, j));
  return m;
}

MatrixFn MatrixFn::from_rows(const std::vector<std::vector<ScalarFn>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  std::vector<ScalarFn> e;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) throw ShapeError("ragged rows");
    e.insert(e.end(), row.begin(), row.end());
  }
  return MatrixFn(r, c, std::move(e));
}

MatrixFn MatrixFn::column(const std::vector<ScalarFn>& v) {
  return MatrixFn(static_cast<int>(v.size()), 1, v);
}

void MatrixFn::set(int i, int j, ScalarFn v) {
  e_.at(static_cast<std::size_t>(i) * c_ + j) = std::move(v);
  tape_.reset();
}

MatrixFn MatrixFn::block(int i, int j, int rows, int cols) const {
  if (i < 0 || j < 0 || i + rows > r_ || j + cols > c_) throw ShapeError("block out of range");
  MatrixFn m(rows, cols);
  for (int a = 0; a < rows; ++a)
    for (int b = 0; b < cols; ++b) m.e_[static_cast<std::size_t>(a) * cols + b] = (*this)(i + a, j + b);
  return m;
}

void MatrixFn::set_block(int i, int j, const MatrixFn& b) {
  if (i < 0 || j < 0 || i + b.r_ > r_ || j + b.c_ > c_) throw ShapeError("set_block out of range");
  for (int a = 0; a < b.r_; ++a)
    for (int c = 0; c < b.c_; ++c) e_[static_cast<std::size_t>(i + a) * c_ + j + c] = b(a, c);
  tape_.reset();
}

MatrixFn MatrixFn::transpose() const {
  MatrixFn m(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m.e_[static_cast<std::size_t>(j) * r_ + i] = (*this)(i, j);
  return m;
}

MatrixFn MatrixFn::derivative(int k) const {
  MatrixFn m(r_, c_);
  for (std::size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i].derivative(k);
  return m;
}

Eigen::MatrixXd MatrixFn::eval(double t) const {
  if (!tape_) tape_ = std::make_shared<const Tape>(e_);
  std::vector<double> v;
  tape_->eval(t, v);
  Eigen::MatrixXd out(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) out(i, j) = v[static_cast<std::size_t>(i) * c_ + j];
  return out;
}

std::vector<Eigen::MatrixXd> MatrixFn::eval_grid(const std::vector<double>& ts) const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(eval(t));
  return out;
}

bool MatrixFn::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const ScalarFn& f) { return f.is_zero(); });
}

bool MatrixFn::is_constant() const {
  return std::all_of(e_.begin(), e_.end(), [](const ScalarFn& f) { return f.is_const(); });
}

std::size_t MatrixFn::dag_size() const { return daecanon::dag_size(e_); }

MatrixFn operator*(const MatrixFn& a, const MatrixFn& b) {
  if (a.cols() != b.rows()) throw ShapeError("product shape mismatch");
  MatrixFn m(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      ScalarFn s;
      for (int k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        s = s + a(i, k) * b(k, j);
      }
      m.set(i, j, s);
    }
  return m;
}

MatrixFn operator+(const MatrixFn& a, const MatrixFn& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("sum shape mismatch");
  MatrixFn m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.set(i, j, a(i, j) + b(i, j));
  return m;
}

MatrixFn operator-(const MatrixFn& a, const MatrixFn& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("difference shape mismatch");
  MatrixFn m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.set(i, j, a(i, j) - b(i, j));
  return m;
}

MatrixFn operator-(const MatrixFn& a) {
  MatrixFn m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.set(i, j, -a(i, j));
  return m;
}

MatrixFn operator*(const ScalarFn& s, const MatrixFn& a) {
  MatrixFn m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m.set(i, j, s * a(i, j));
  return m;
}

MatrixFn hstack(const std::vector<MatrixFn>& parts) {
  int r = -1, c = 0;
  for (const auto& p : parts) {
    if (p.rows() == 0 && p.cols() == 0) continue;
    if (r >= 0 && p.rows() != r) throw ShapeError("hstack row mismatch");
    r = p.rows();
    c += p.cols();
  }
  MatrixFn m(std::max(r, 0), c);
  int off = 0;
  for (const auto& p : parts) {
    if (p.rows() == 0 && p.cols() == 0) continue;
    m.set_block(0, off, p);
    off += p.cols();
  }
  return m;
}

MatrixFn vstack(const std::vector<MatrixFn>& parts) {
  int r = 0, c = -1;
  for (const auto& p : parts) {
    if (p.rows() == 0 && p.cols() == 0) continue;
    if (c >= 0 && p.cols() != c) throw ShapeError("vstack column mismatch");
    c = p.cols();
    r += p.rows();
  }
  MatrixFn m(r, std::max(c, 0));
  int off = 0;
  for (const auto& p : parts) {
    if (p.rows() == 0 && p.cols() == 0) continue;
    m.set_block(off, 0, p);
    off += p.rows();
  }
  return m;
}

MatrixFn block_diag(const MatrixFn& a, const MatrixFn& b) {
  MatrixFn m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

MatrixFn blocks2(const MatrixFn& a11, const MatrixFn& a12, const MatrixFn& a21, const MatrixFn& a22) {
  int d = a11.rows(), a = a22.rows();
  MatrixFn m(d + a, a11.cols() + a22.cols());
  if (a12.rows() != d || a21.rows() != a || a12.cols() != a22.cols() || a21.cols() != a11.cols())
    throw ShapeError("blocks2 shape mismatch");
  m.set_block(0, 0, a11);
  m.set_block(0, a11.cols(), a12);
  m.set_block(d, 0, a21);
  m.set_block(d, a11.cols(), a22);
  return m;
}

double max_abs(const MatrixFn& a, const std::vector<double>& ts) {
  double m = 0;
  if (a.empty()) return 0;
  for (double t : ts) m = std::max(m, a.eval(t).cwiseAbs().maxCoeff());
  return m;
}

double max_dev(const MatrixFn& a, const MatrixFn& b, const std::vector<double>& ts) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("max_dev shape mismatch");
  if (a.empty()) return 0;
  double m = 0;
  for (double t : ts) m = std::max(m, (a.eval(t) - b.eval(t)).cwiseAbs().maxCoeff());
  return m;
}

bool vanishes(const ScalarFn& f, const Context& ctx, double scale) {
  if (f.is_zero()) return true;
  if (f.is_const()) return std::abs(f.const_value()) <= ctx.tol.zero * std::max(1.0, scale);
  Tape tape({f});
  std::vector<double> v;
  for (double t : ctx.zero_pts) {
    tape.eval(t, v);
    if (std::abs(v[0]) > ctx.tol.zero * std::max(1.0, scale)) return false;
  }
  return true;
}

bool vanishes(const MatrixFn& m, const Context& ctx, double scale) {
  if (m.is_zero()) return true;
  for (double t : ctx.zero_pts)
    if (m.eval(t).cwiseAbs().maxCoeff() > ctx.tol.zero * std::max(1.0, scale)) return false;
  return true;
}

MatrixFn snap_zeros(const MatrixFn& m, const Context& ctx, double scale) {
  if (m.empty()) return m;
  std::vector<Eigen::MatrixXd> vals = m.eval_grid(ctx.zero_pts);
  MatrixFn out = m;
  double lim = ctx.tol.zero * std::max(1.0, scale);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j).is_zero()) continue;
      bool z = true;
      for (const auto& v : vals)
        if (std::abs(v(i, j)) > lim) {
          z = false;
          break;
        }
      if (z) out.set(i, j, ScalarFn(0.0));
    }
  return out;
}

namespace {

bool strictly_lower_zero(const MatrixFn& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < i; ++j)
      if (!a(i, j).is_zero()) return false;
  return true;
}

// Gauss-Jordan elimination. Pivots are chosen by the smallest magnitude over the
// check points, tracked numerically alongside the symbolic rows.
MatrixFn gauss_jordan(const MatrixFn& a, const Context& ctx) {
  int n = a.rows();
  const auto& ts = ctx.check_pts;
  std::vector<std::vector<ScalarFn>> s(n, std::vector<ScalarFn>(2 * n));
  std::vector<Eigen::MatrixXd> num;
  for (double t : ts) {
    Eigen::MatrixXd m(n, 2 * n);
    m << a.eval(t), Eigen::MatrixXd::Identity(n, n);
    num.push_back(m);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s[i][j] = a(i, j);
    s[i][n + i] = ScalarFn(1.0);
  }
  for (int k = 0; k < n; ++k) {
    int best = -1;
    double best_score = -1, worst_t = ts.empty() ? 0 : ts[0];
    for (int r = k; r < n; ++r) {
      if (s[r][k].is_zero()) continue;
      double score = std::numeric_limits<double>::infinity(), wt = 0;
      double scale = 0;
      for (std::size_t q = 0; q < ts.size(); ++q) {
        double rs = num[q].row(r).head(n).cwiseAbs().maxCoeff();
        double v = std::abs(num[q](r, k)) / std::max(rs, 1e-300);
        scale = std::max(scale, rs);
        if (v < score) {
          score = v;
          wt = ts[q];
        }
      }
      if (s[r][k].is_const()) score = std::max(score, 1.0);
      if (score > best_score) {
        best_score = score;
        best = r;
        worst_t = wt;
      }
    }
    if (best < 0 || best_score <= ctx.tol.singular) throw SingularAtSample("matrix function is singular", worst_t);
    if (best != k) {
      std::swap(s[best], s[k]);
      for (auto& m : num) m.row(best).swap(m.row(k));
    }
    ScalarFn piv = s[k][k];
    for (int j = 0; j < 2 * n; ++j) s[k][j] = s[k][j] / piv;
    for (auto& m : num) {
      double pk = m(k, k);
      m.row(k) /= pk;
    }
    for (int r = 0; r < n; ++r) {
      if (r == k || s[r][k].is_zero()) continue;
      ScalarFn f = s[r][k];
      for (int j = 0; j < 2 * n; ++j)
        if (!s[k][j].is_zero()) s[r][j] = s[r][j] - f * s[k][j];
      s[r][k] = ScalarFn(0.0);
      for (auto& m : num) {
        double fr = m(r, k);
        m.row(r) -= fr * m.row(k);
      }
    }
  }
  MatrixFn out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.set(i, j, s[i][n + j]);
  return out;
}

MatrixFn small_inverse(const MatrixFn& a, const Context& ctx) {
  if (a.rows() == 1) {
    for (double t : ctx.check_pts) {
      double v = a(0, 0).is_const() ? a(0, 0).const_value() : a.eval(t)(0, 0);
      if (std::abs(v) <= ctx.tol.singular) throw SingularAtSample("scalar function vanishes", t);
      if (a(0, 0).is_const()) break;
    }
    MatrixFn out(1, 1);
    out.set(0, 0, ScalarFn(1.0) / a(0, 0));
    return out;
  }
  return gauss_jordan(a, ctx);
}

MatrixFn block_back_substitution(const MatrixFn& a, const Context& ctx, const std::vector<int>& sizes) {
  int nb = static_cast<int>(sizes.size());
  std::vector<int> off(nb + 1, 0);
  for (int i = 0; i < nb; ++i) off[i + 1] = off[i] + sizes[i];
  auto blk = [&](const MatrixFn& m, int i, int j) { return m.block(off[i], off[j], sizes[i], sizes[j]); };
  std::vector<std::vector<MatrixFn>> x(nb, std::vector<MatrixFn>(nb));
  for (int j = 0; j < nb; ++j) {
    x[j][j] = small_inverse(blk(a, j, j), ctx);
    for (int i = j - 1; i >= 0; --i) {
      MatrixFn acc(sizes[i], sizes[j]);
      for (int k = i + 1; k <= j; ++k) {
        MatrixFn aik = blk(a, i, k);
        if (aik.is_zero() || x[k][j].is_zero()) continue;
        acc = acc + aik * x[k][j];
      }
      x[i][j] = acc.is_zero() ? acc : -(x[i][i] * acc);
    }
  }
  MatrixFn out(a.rows(), a.cols());
  for (int i = 0; i < nb; ++i)
    for (int j = i; j < nb; ++j) out.set_block(off[i], off[j], x[i][j]);
  return out;
}

}  // namespace

MatrixFn inverse(const MatrixFn& a, const Context& ctx, const std::vector<int>& partition) {
  if (a.rows() != a.cols()) throw ShapeError("inverse of non-square matrix");
  int n = a.rows();
  if (n == 0) return a;
  MatrixFn work = a;
  std::vector<int> sizes = partition;
  if (!sizes.empty()) {
    int sum = 0;
    for (int s : sizes) sum += s;
    if (sum != n) throw ShapeError("partition does not match matrix size");
    // Lower blocks must vanish; they are dropped from the symbolic computation.
    int off_i = 0;
    bool ok = true;
    for (std::size_t bi = 0; bi < sizes.size() && ok; ++bi) {
      int off_j = 0;
      for (std::size_t bj = 0; bj < bi; ++bj) {
        MatrixFn lb = a.block(off_i, off_j, sizes[bi], sizes[bj]);
        if (!vanishes(lb, ctx, max_abs(a, ctx.zero_pts))) {
          ok = false;
          break;
        }
        work.set_block(off_i, off_j, MatrixFn(sizes[bi], sizes[bj]));
        off_j += sizes[bj];
      }
      off_i += sizes[bi];
    }
    if (!ok) {
      work = a;
      sizes.clear();
    }
  }
  if (sizes.empty() && n > 1 && strictly_lower_zero(work)) sizes.assign(n, 1);
  MatrixFn inv = sizes.empty() ? small_inverse(work, ctx) : block_back_substitution(work, ctx, sizes);

  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (double t : ctx.check_pts) {
    Eigen::MatrixXd at = a.eval(t), it = inv.eval(t);
    double cond = std::max(1.0, at.cwiseAbs().maxCoeff() * it.cwiseAbs().maxCoeff());
    double dev = (at * it - eye).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-9 * cond)) throw SingularAtSample("inverse certification failed (deviation " + std::to_string(dev) + ")", t);
  }
  return inv;
}

}  // namespace daecanon
