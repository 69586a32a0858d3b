#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace daecanon {

struct Interval {
  double t0 = 0.0;
  double t1 = 1.0;
  std::vector<double> avoid;
  double avoid_radius = 1e-3;

  double mid() const { return 0.5 * (t0 + t1); }
  bool admissible(double t) const;
};

struct Tolerances {
  double zero = 1e-12;      // zero detection, relative to local scale
  double check = 1e-9;      // verify_equivalent and fixture comparisons
  double rank = 1e-9;       // relative singular value cut-off
  double singular = 1e-10;  // pivot acceptance in inverses
  int n_check = 33;
  int n_zero = 33;
  std::size_t node_budget = 50'000'000;

  // DAE_CANON_TOL overrides `check`.
  static Tolerances from_env();
};

std::vector<double> chebyshev_points(const Interval& iv, int n);
std::vector<double> random_points(const Interval& iv, int n, std::uint64_t seed);
// n points spread over [t0,t1] shrunk by `margin` on each side, skipping avoided points.
std::vector<double> uniform_points(const Interval& iv, int n, double margin = 0.0);

// Validation context shared by one pipeline run.
struct Context {
  Interval iv;
  Tolerances tol;
  std::vector<double> check_pts;
  std::vector<double> zero_pts;

  Context() : Context(Interval{}) {}
  explicit Context(Interval iv_, Tolerances tol_ = Tolerances::from_env());
};

}  // namespace daecanon
