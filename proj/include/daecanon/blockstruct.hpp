#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "daecanon/matrix_fn.hpp"

namespace daecanon {

enum class Ordering { Decreasing, Increasing };

std::string to_string(Ordering o);
Ordering ordering_from_string(const std::string& s);

struct BlockSpec {
  std::vector<int> sizes;  // l_1 .. l_mu
  Ordering ordering = Ordering::Decreasing;

  BlockSpec() = default;
  BlockSpec(std::vector<int> s, Ordering o);

  int mu() const { return static_cast<int>(sizes.size()); }
  int a() const;
  int kappa0() const;
  int offset(int i) const;  // first row of block i (0-based)
  bool equal_sizes() const;
};

struct Characteristics {
  int m = 0, d = 0, a = 0, r = 0, mu = 0;
  std::vector<int> theta;  // theta_0 .. theta_{mu-2}
};

Characteristics characteristics(const BlockSpec& spec, int d);

// Constant a x a matrix N^(E_c) (decreasing) or N^(E_r) (increasing).
MatrixFn elementary_nilpotent(const BlockSpec& spec);
Eigen::MatrixXd elementary_nilpotent_numeric(const BlockSpec& spec);

struct BlockCheck {
  bool ok = true;
  int bi = -1, bj = -1;
  std::string why;
  explicit operator bool() const { return ok; }
};

BlockCheck is_but(const MatrixFn& m, const BlockSpec& spec, const Context& ctx);
BlockCheck is_sut(const MatrixFn& m, const BlockSpec& spec, const Context& ctx);
BlockCheck is_sut_column(const MatrixFn& n, const BlockSpec& spec, const Context& ctx);
BlockCheck is_sut_row(const MatrixFn& n, const BlockSpec& spec, const Context& ctx);

// R^c = N N^T_E + (I - N_E N_E^T) (decreasing) or R^r = N_E^T N + (I - N_E^T N_E)
// (increasing). Throws NotSUT, or NeedsSmoothFactorization when a diagonal block of R
// is singular at a sample.
MatrixFn rc_factor(const MatrixFn& n, const BlockSpec& spec, const Context& ctx);

// Block (i,j) view with the spec partition.
MatrixFn spec_block(const MatrixFn& m, const BlockSpec& spec, int i, int j);

int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

struct NilpotentStructure {
  int mu = 0;
  std::vector<int> theta;
  std::vector<int> ranks;  // rank N^0 .. rank N^mu
};

// mu = nilpotency order, theta_i = rank N^{i+1} - rank N^{i+2}. Throws NotNilpotent.
NilpotentStructure characteristics_from_nilpotent(const Eigen::MatrixXd& n, double rel_tol = 1e-9);

}  // namespace daecanon
