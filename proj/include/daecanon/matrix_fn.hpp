#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <memory>
#include <vector>

#include "daecanon/expr.hpp"
#include "daecanon/sampling.hpp"

namespace daecanon {

class MatrixFn {
 public:
  MatrixFn() = default;
  MatrixFn(int rows, int cols);
  MatrixFn(int rows, int cols, std::vector<ScalarFn> entries);

  static MatrixFn identity(int n);
  static MatrixFn zeros(int rows, int cols) { return MatrixFn(rows, cols); }
  static MatrixFn constant(const Eigen::MatrixXd& m);
  static MatrixFn from_rows(const std::vector<std::vector<ScalarFn>>& rows);
  static MatrixFn column(const std::vector<ScalarFn>& v);

  int rows() const { return r_; }
  int cols() const { return c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }

  const ScalarFn& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * c_ + j]; }
  void set(int i, int j, ScalarFn v);
  const std::vector<ScalarFn>& entries() const { return e_; }

  MatrixFn block(int i, int j, int rows, int cols) const;
  void set_block(int i, int j, const MatrixFn& b);

  MatrixFn transpose() const;
  MatrixFn derivative(int k = 1) const;

  Eigen::MatrixXd eval(double t) const;
  std::vector<Eigen::MatrixXd> eval_grid(const std::vector<double>& ts) const;

  bool is_zero() const;  // every entry is the literal 0
  bool is_constant() const;
  std::size_t dag_size() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<ScalarFn> e_;
  mutable std::shared_ptr<const Tape> tape_;
};

MatrixFn operator*(const MatrixFn& a, const MatrixFn& b);
MatrixFn operator+(const MatrixFn& a, const MatrixFn& b);
MatrixFn operator-(const MatrixFn& a, const MatrixFn& b);
MatrixFn operator-(const MatrixFn& a);
MatrixFn operator*(const ScalarFn& s, const MatrixFn& a);

MatrixFn hstack(const std::vector<MatrixFn>& parts);
MatrixFn vstack(const std::vector<MatrixFn>& parts);
MatrixFn block_diag(const MatrixFn& a, const MatrixFn& b);
// 2x2 block assembly with block sizes taken from the diagonal blocks.
MatrixFn blocks2(const MatrixFn& a11, const MatrixFn& a12, const MatrixFn& a21, const MatrixFn& a22);

// Symbolic inverse. `partition` (block sizes) enables block back-substitution for
// block upper triangular inputs. A*inv(A) = I is certified at ctx.check_pts.
MatrixFn inverse(const MatrixFn& a, const Context& ctx, const std::vector<int>& partition = {});

// Largest absolute entry over the check points.
double max_abs(const MatrixFn& a, const std::vector<double>& ts);
// Largest absolute entrywise deviation between a and b over ts.
double max_dev(const MatrixFn& a, const MatrixFn& b, const std::vector<double>& ts);

// True if the entry vanishes at every zero-detection point (relative to `scale`).
bool vanishes(const ScalarFn& f, const Context& ctx, double scale = 1.0);
bool vanishes(const MatrixFn& m, const Context& ctx, double scale = 1.0);
// Replace entries that vanish at the zero-detection points by the literal 0.
MatrixFn snap_zeros(const MatrixFn& m, const Context& ctx, double scale = 1.0);

}  // namespace daecanon
