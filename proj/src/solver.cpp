#include "daecanon/solver.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "daecanon/errors.hpp"

namespace daecanon {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

std::vector<ScalarFn> solve_pure_dae(const MatrixFn& n, const std::vector<ScalarFn>& q2, int mu) {
  int a = static_cast<int>(q2.size());
  if (n.rows() != a || n.cols() != a) throw ShapeError("pure DAE: N does not match q2");
  MatrixFn q = MatrixFn::column(q2);
  MatrixFn v = q;
  for (int j = 1; j < std::max(mu, 1); ++j) v = q - n * v.derivative();
  std::vector<ScalarFn> out(a);
  for (int i = 0; i < a; ++i) out[i] = v(i, 0);
  return out;
}

namespace {

// Integrates y' = f(t, y) from (t0, y0) and stores y at every time in `times`.
template <class Rhs>
std::vector<State> integrate_at(Rhs rhs, const State& y0, double t0, const std::vector<double>& times,
                                const IvpOptions& opt) {
  std::vector<State> out(times.size());
  std::vector<std::size_t> fwd, bwd;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > t0)
      fwd.push_back(i);
    else if (times[i] < t0)
      bwd.push_back(i);
    else
      out[i] = y0;
  }
  auto run = [&](std::vector<std::size_t> idx, bool forward) {
    if (idx.empty() || y0.empty()) {
      for (auto i : idx) out[i] = y0;
      return;
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return forward ? times[a] < times[b] : times[a] > times[b];
    });
    std::vector<double> ts{t0};
    for (auto i : idx) ts.push_back(times[i]);
    State y = y0;
    std::size_t k = 0;
    double span = std::abs(ts.back() - t0);
    double dt = (forward ? 1.0 : -1.0) * std::max(span * 1e-3, 1e-8);
    auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, rhs, y, ts.begin(), ts.end(), dt, [&](const State& s, double) {
      if (k > 0) out[idx[k - 1]] = s;
      ++k;
    });
    if (k != ts.size()) throw Error("IntegrationFailed", "integrator stopped before the end of the grid");
  };
  run(fwd, true);
  run(bwd, false);
  return out;
}

Eigen::VectorXd to_vec(const State& s) { return Eigen::Map<const Eigen::VectorXd>(s.data(), s.size()); }

}  // namespace

Trajectory solve_ivp(const PipelineResult& r, const std::vector<ScalarFn>& q, double t0, const Eigen::VectorXd& u0,
                     const std::vector<double>& grid, const IvpOptions& opt) {
  const Stage* st = r.stage("step4");
  std::string label = "step4";
  if (!st) {
    st = r.stage("step3");
    label = "step3";
  }
  if (!st) throw StructureError("StageMissing", "solve_ivp needs an SCF (step 3)");
  int m = r.input.m(), d = r.d, a = m - d;
  if (static_cast<int>(q.size()) != m) throw ShapeError("q must have m entries");
  if (u0.size() != d) throw ShapeError("u0 must have d entries");
  Transform tt = r.total(label);
  MatrixFn qbar = tt.L * MatrixFn::column(q);
  MatrixFn q1 = qbar.block(0, 0, d, 1);
  std::vector<ScalarFn> q2(a);
  for (int i = 0; i < a; ++i) q2[i] = qbar(d + i, 0);
  MatrixFn v = MatrixFn::column(solve_pure_dae(st->P.E22(), q2, r.spec.mu()));
  MatrixFn vd = v.derivative();
  MatrixFn omega = st->P.F11();
  MatrixFn k = tt.K, kd = tt.K.derivative();

  auto rhs = [&](const State& y, State& dy, double t) {
    Eigen::VectorXd u = to_vec(y);
    Eigen::VectorXd du = q1.eval(t).col(0) - omega.eval(t) * u;
    dy.assign(du.data(), du.data() + du.size());
  };
  State y0(u0.data(), u0.data() + u0.size());
  std::vector<State> us = integrate_at(rhs, y0, t0, grid, opt);

  Trajectory out;
  out.t0 = t0;
  out.stage = label;
  out.t = grid;
  auto assemble = [&](double t, const Eigen::VectorXd& u, Eigen::VectorXd& x, Eigen::VectorXd& xdot) {
    Eigen::VectorXd z(m), zd(m);
    z << u, v.eval(t).col(0);
    Eigen::VectorXd du = d ? Eigen::VectorXd(q1.eval(t).col(0) - omega.eval(t) * u) : Eigen::VectorXd(0);
    zd << du, vd.eval(t).col(0);
    Eigen::MatrixXd kt = k.eval(t);
    x = kt * z;
    xdot = kd.eval(t) * z + kt * zd;
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Eigen::VectorXd u = to_vec(us[i]), x, xd;
    assemble(grid[i], u, x, xd);
    out.u.push_back(u);
    out.x.push_back(x);
    out.xdot.push_back(xd);
  }
  Eigen::VectorXd xd0;
  assemble(t0, u0, out.x0, xd0);
  return out;
}

double residual(const DaePair& p, const Trajectory& traj, const std::vector<ScalarFn>& q) {
  MatrixFn qc = MatrixFn::column(q);
  double worst = 0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    double t = traj.t[i];
    Eigen::VectorXd res = p.E.eval(t) * traj.xdot[i] + p.F.eval(t) * traj.x[i] - qc.eval(t).col(0);
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

FundamentalMatrix::FundamentalMatrix(const MatrixFn& omega, double alpha, double t0, const Eigen::MatrixXd& k0init,
                                     const std::vector<double>& grid, const IvpOptions& opt)
    : omega_(omega), alpha_(alpha) {
  int d = omega.rows();
  if (k0init.rows() != d || k0init.cols() != d) throw ShapeError("K0init must match Omega");
  if (std::abs(k0init.determinant()) < 1e-14) throw StructureError("SingularInitial", "K0init is singular");
  std::vector<double> g = grid;
  g.push_back(t0);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  constexpr int refine = 7;
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    for (int s = 0; s < refine; ++s) t_.push_back(g[i] + (g[i + 1] - g[i]) * s / refine);
  t_.push_back(g.back());
  auto rhs = [&](const State& y, State& dy, double t) {
    Eigen::Map<const Eigen::MatrixXd> kk(y.data(), d, d);
    Eigen::MatrixXd dk = (alpha_ * Eigen::MatrixXd::Identity(d, d) - omega_.eval(t)) * kk;
    dy.assign(dk.data(), dk.data() + dk.size());
  };
  State y0(k0init.data(), k0init.data() + k0init.size());
  std::vector<State> ys = integrate_at(rhs, y0, t0, t_, opt);
  for (std::size_t i = 0; i < t_.size(); ++i) {
    Eigen::MatrixXd kk = Eigen::Map<const Eigen::MatrixXd>(ys[i].data(), d, d);
    k_.push_back(kk);
    kd_.push_back((alpha_ * Eigen::MatrixXd::Identity(d, d) - omega_.eval(t_[i])) * kk);
  }
}

namespace {

std::size_t locate(const std::vector<double>& t, double x) {
  if (x < t.front() - 1e-12 || x > t.back() + 1e-12) throw InputError("time outside the fundamental-matrix grid");
  auto it = std::upper_bound(t.begin(), t.end(), x);
  std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  return std::min(i, t.size() - 2);
}

}  // namespace

Eigen::MatrixXd FundamentalMatrix::eval(double t) const {
  if (t_.size() == 1) return k_[0];
  std::size_t i = locate(t_, t);
  double h = t_[i + 1] - t_[i], s = (t - t_[i]) / h;
  double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
  double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
  return h00 * k_[i] + h10 * h * kd_[i] + h01 * k_[i + 1] + h11 * h * kd_[i + 1];
}

Eigen::MatrixXd FundamentalMatrix::derivative(double t) const {
  if (t_.size() == 1) return kd_[0];
  std::size_t i = locate(t_, t);
  double h = t_[i + 1] - t_[i], s = (t - t_[i]) / h;
  double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
  double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
  return (d00 * k_[i] + d01 * k_[i + 1]) / h + d10 * kd_[i] + d11 * kd_[i + 1];
}

double FundamentalMatrix::max_normalization_error() const {
  double worst = 0;
  int d = omega_.rows();
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    double t = 0.5 * (t_[i] + t_[i + 1]);
    Eigen::MatrixXd kk = eval(t), kinv = kk.inverse();
    Eigen::MatrixXd hat = kinv * omega_.eval(t) * kk + kinv * derivative(t);
    worst = std::max(worst, (hat - alpha_ * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double FundamentalMatrix::min_abs_det() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& kk : k_) m = std::min(m, std::abs(kk.determinant()));
  return m;
}

FundamentalMatrix normalize_pure_ode(const MatrixFn& omega, double alpha, double t0, const Eigen::MatrixXd& k0init,
                                     const std::vector<double>& grid, const IvpOptions& opt) {
  return FundamentalMatrix(omega, alpha, t0, k0init, grid, opt);
}

}  // namespace daecanon
