#pragma once

#include <vector>

#include "daecanon/pipeline.hpp"

namespace daecanon {

// v = sum_j (-1)^j N^j q2^(j) for constant N; for time-varying nilpotent N the
// fixed point of v = q2 - N v' reached after mu substitutions.
std::vector<ScalarFn> solve_pure_dae(const MatrixFn& n, const std::vector<ScalarFn>& q2, int mu);

struct IvpOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> x, xdot, u;
  Eigen::VectorXd x0;
  double t0 = 0;
  std::string stage;  // SCF stage used for the decoupling
};

// Integrates u' + Omega u = qbar_1 from (t0, u0), evaluates v from the pure DAE and
// returns x = K [u; v] with x' = K' [u; v] + K [u'; v'] on `grid`.
Trajectory solve_ivp(const PipelineResult& r, const std::vector<ScalarFn>& q, double t0, const Eigen::VectorXd& u0,
                     const std::vector<double>& grid, const IvpOptions& opt = {});

// max over the trajectory of |E x' + F x - q|_inf.
double residual(const DaePair& p, const Trajectory& traj, const std::vector<ScalarFn>& q);

// Fundamental matrix of K' = (alpha I - Omega) K, K(t0) = K0init, stored on a grid
// with cubic Hermite interpolation in between.
class FundamentalMatrix {
 public:
  FundamentalMatrix(const MatrixFn& omega, double alpha, double t0, const Eigen::MatrixXd& k0init,
                    const std::vector<double>& grid, const IvpOptions& opt = {});
  Eigen::MatrixXd eval(double t) const;
  Eigen::MatrixXd derivative(double t) const;
  const std::vector<double>& grid() const { return t_; }
  // max over the grid of |K^-1 Omega K + K^-1 K' - alpha I|.
  double max_normalization_error() const;
  double min_abs_det() const;

 private:
  MatrixFn omega_;
  double alpha_;
  std::vector<double> t_;
  std::vector<Eigen::MatrixXd> k_, kd_;
};

FundamentalMatrix normalize_pure_ode(const MatrixFn& omega, double alpha, double t0, const Eigen::MatrixXd& k0init,
                                     const std::vector<double>& grid, const IvpOptions& opt = {});

}  // namespace daecanon
