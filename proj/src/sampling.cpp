#include "daecanon/sampling.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "daecanon/errors.hpp"

namespace daecanon {

bool Interval::admissible(double t) const {
  if (t < t0 || t > t1) return false;
  for (double a : avoid)
    if (std::abs(t - a) < avoid_radius) return false;
  return true;
}

Tolerances Tolerances::from_env() {
  Tolerances tol;
  if (const char* s = std::getenv("DAE_CANON_TOL")) {
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || !(v > 0)) throw InputError(std::string("DAE_CANON_TOL is not a positive number: ") + s);
    tol.check = v;
  }
  return tol;
}

std::vector<double> chebyshev_points(const Interval& iv, int n) {
  std::vector<double> out;
  double c = iv.mid(), h = 0.5 * (iv.t1 - iv.t0);
  for (int k = 1; k <= n; ++k) {
    double t = c - h * std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
    if (iv.admissible(t)) out.push_back(t);
  }
  return out;
}

std::vector<double> random_points(const Interval& iv, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(iv.t0, iv.t1);
  std::vector<double> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < n && guard++ < 100 * n) {
    double t = dist(rng);
    if (t > iv.t0 && t < iv.t1 && iv.admissible(t)) out.push_back(t);
  }
  return out;
}

std::vector<double> uniform_points(const Interval& iv, int n, double margin) {
  std::vector<double> out;
  double a = iv.t0 + margin, b = iv.t1 - margin;
  for (int k = 0; k < n; ++k) {
    double t = n == 1 ? a : a + (b - a) * k / (n - 1);
    if (iv.admissible(t)) out.push_back(t);
  }
  return out;
}

Context::Context(Interval iv_, Tolerances tol_) : iv(std::move(iv_)), tol(tol_) {
  if (!(iv.t1 > iv.t0)) throw InputError("degenerate interval");
  check_pts = chebyshev_points(iv, tol.n_check);
  zero_pts = random_points(iv, tol.n_zero, 0x5eed5eedULL);
  if (check_pts.empty()) throw InputError("no admissible sample points in interval");
}

}  // namespace daecanon
