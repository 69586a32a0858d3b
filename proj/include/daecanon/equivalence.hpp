#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daecanon/blockstruct.hpp"
#include "daecanon/matrix_fn.hpp"

namespace daecanon {

struct DaePair {
  MatrixFn E, F;
  int d = -1;  // -1: untagged
  std::optional<BlockSpec> spec;

  int m() const { return E.rows(); }
  int a() const { return m() - d; }
  bool tagged() const { return d >= 0; }

  MatrixFn F11() const { return F.block(0, 0, d, d); }
  MatrixFn F12() const { return F.block(0, d, d, a()); }
  MatrixFn F21() const { return F.block(d, 0, a(), d); }
  MatrixFn F22() const { return F.block(d, d, a(), a()); }
  MatrixFn E22() const { return E.block(d, d, a(), a()); }
};

struct Transform {
  MatrixFn L, K;
  static Transform identity(int m) { return {MatrixFn::identity(m), MatrixFn::identity(m)}; }
};

// {LEK, LFK + LEK'}; the partition tag is carried over.
DaePair apply(const Transform& t, const DaePair& p);

// L = L2 L1, K = K1 K2: apply(compose(t1,t2), p) == apply(t2, apply(t1, p)).
Transform compose(const Transform& t1, const Transform& t2);

struct EquivalenceReport {
  bool ok = true;
  double dev_E = 0, dev_F = 0;
  double worst_t = 0;
  double tol = 0;
  std::size_t samples = 0;
  std::string what;
};

// Max entrywise deviation of LE_PK - E_Q and LF_PK + LE_PK' - F_Q over ts, relative to
// max(1, |Q|).
EquivalenceReport verify_equivalent(const DaePair& p, const DaePair& q, const Transform& t,
                                    const std::vector<double>& ts, double tol);

struct Elementary {
  Transform T;
  DaePair P;
};

// L = [[I, M12],[0, I]], K = [[I, -M12 E22],[0, I]].
Elementary elementary_upper(const DaePair& p, const MatrixFn& m12);
// L = [[I, 0],[E22 M21, I]], K = [[I, 0],[-M21, I]].
Elementary elementary_lower(const DaePair& p, const MatrixFn& m21);

// Pointwise rank check of L and K at the sample points.
bool transform_nonsingular(const Transform& t, const std::vector<double>& ts, double rel_tol = 1e-12);

}  // namespace daecanon
