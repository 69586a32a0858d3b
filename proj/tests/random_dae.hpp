#pragma once

#include <random>

#include "daecanon/frontends.hpp"

namespace daecanon::testing {

class RandomDae {
 public:
  explicit RandomDae(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Bounded smooth function on [0, 1]: polynomial, trigonometric or exponential.
  ScalarFn smooth() {
    ScalarFn t = ScalarFn::time();
    if (constant_) return ScalarFn(uniform(-1, 1));
    switch (integer(0, 3)) {
      case 0: return ScalarFn(uniform(-1, 1)) + ScalarFn(uniform(-1, 1)) * t + ScalarFn(uniform(-1, 1)) * t * t;
      case 1: return ScalarFn(uniform(-1, 1)) + ScalarFn(uniform(-1, 1)) * sin(ScalarFn(uniform(0.5, 2)) * t + ScalarFn(uniform(0, 3)));
      case 2: return ScalarFn(uniform(-1, 1)) * cos(ScalarFn(uniform(0.5, 2)) * t);
      default: return ScalarFn(uniform(-1, 1)) * exp(ScalarFn(uniform(-0.5, 0.5)) * t);
    }
  }

  // Bounded away from zero on [0, 1].
  ScalarFn nonzero() {
    double s = integer(0, 1) ? 1.0 : -1.0;
    if (constant_) return ScalarFn(s * uniform(1, 2));
    ScalarFn t = ScalarFn::time();
    if (integer(0, 1)) return ScalarFn(s * uniform(1.5, 2.5)) + ScalarFn(uniform(-0.5, 0.5)) * sin(ScalarFn(uniform(0.5, 2)) * t);
    return ScalarFn(s) * (ScalarFn(uniform(1, 2)) + ScalarFn(uniform(0, 0.5)) * t * t);
  }

  MatrixFn matrix(int r, int c) {
    MatrixFn m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.set(i, j, smooth());
    return m;
  }

  // Upper triangular with nonzero diagonal.
  MatrixFn triangular(int n, double off = 0.5) {
    MatrixFn m(n, n);
    for (int i = 0; i < n; ++i) {
      m.set(i, i, nonzero());
      for (int j = i + 1; j < n; ++j) m.set(i, j, ScalarFn(off) * smooth());
    }
    return m;
  }

  void set_constant(bool c) { constant_ = c; }

  // E = diag(I_d, N^E); F22 block upper triangular with nonsingular diagonal blocks;
  // F21 nonzero only in block rows <= k and F12 only in block columns >= k.
  DaePair prescf(const BlockSpec& spec, int d) {
    int a = spec.a(), mu = spec.mu();
    DaePair p;
    p.d = d;
    p.spec = spec;
    p.E = block_diag(MatrixFn::identity(d), elementary_nilpotent(spec));
    MatrixFn f22(a, a);
    for (int i = 0; i < mu; ++i)
      for (int j = i; j < mu; ++j)
        f22.set_block(spec.offset(i), spec.offset(j), i == j ? triangular(spec.sizes[i]) : matrix(spec.sizes[i], spec.sizes[j]));
    int k = integer(0, mu - 1);
    MatrixFn f21(a, d), f12(d, a);
    for (int i = 0; i < mu; ++i) {
      if (i <= k) f21.set_block(spec.offset(i), 0, matrix(spec.sizes[i], d));
      if (i >= k) f12.set_block(0, spec.offset(i), matrix(d, spec.sizes[i]));
    }
    p.F = blocks2(matrix(d, d), f12, f21, f22);
    return p;
  }

  // Strictly block upper triangular N with superdiagonal blocks [P; 0] (decreasing)
  // or [P 0] (increasing), P upper triangular and nonsingular.
  MatrixFn patterned_nilpotent(const BlockSpec& spec) {
    int a = spec.a(), mu = spec.mu();
    MatrixFn n(a, a);
    for (int i = 0; i + 1 < mu; ++i) {
      int li = spec.sizes[i], lj = spec.sizes[i + 1];
      int p = std::min(li, lj);
      MatrixFn blk(li, lj);
      blk.set_block(0, 0, triangular(p));
      n.set_block(spec.offset(i), spec.offset(i + 1), blk);
      for (int j = i + 2; j < mu; ++j) n.set_block(spec.offset(i), spec.offset(j), matrix(li, spec.sizes[j]));
    }
    return n;
  }

  // {diag(I, N^c), [[F11, 0], [F21, I]]}
  DaePair t_canonical(const BlockSpec& spec, int d) {
    int a = spec.a();
    DaePair p;
    p.d = d;
    p.spec = spec;
    p.E = block_diag(MatrixFn::identity(d), patterned_nilpotent(spec));
    p.F = blocks2(matrix(d, d), MatrixFn(d, a), matrix(a, d), MatrixFn::identity(a));
    return p;
  }

  // {[[I, E12], [0, N^r]], diag(F11, I)} with the first block of E12 zero.
  DaePair s_canonical(const BlockSpec& spec, int d) {
    int a = spec.a();
    DaePair p;
    p.d = d;
    p.spec = spec;
    MatrixFn e12(d, a);
    if (a > spec.sizes[0]) e12.set_block(0, spec.sizes[0], matrix(d, a - spec.sizes[0]));
    p.E = blocks2(MatrixFn::identity(d), e12, MatrixFn(a, d), patterned_nilpotent(spec));
    p.F = block_diag(matrix(d, d), MatrixFn::identity(a));
    return p;
  }

  // H21 = [T R] with T triangular so the leading columns pivot; H12 = c(t) H21^T.
  DaePair hessenberg2(int m1, int m2) {
    MatrixFn h21 = hstack({triangular(m2), matrix(m2, m1 - m2)});
    MatrixFn h12 = ScalarFn(1.0) * h21.transpose();
    DaePair p;
    p.E = block_diag(MatrixFn::identity(m1), MatrixFn(m2, m2));
    p.F = blocks2(matrix(m1, m1), h12, h21, MatrixFn(m2, m2));
    return p;
  }

  // H21 = [c I 0], H32 = [T R], top of H13 = H32^T.
  DaePair hessenberg3(int m1, int m2, int m3, double c) {
    int m = m1 + m2 + m3;
    MatrixFn h21 = hstack({ScalarFn(c) * MatrixFn::identity(m2), MatrixFn(m2, m1 - m2)});
    MatrixFn h32 = hstack({triangular(m3), matrix(m3, m2 - m3)});
    MatrixFn h13 = vstack({h32.transpose(), matrix(m1 - m2, m3)});
    MatrixFn f(m, m);
    f.set_block(0, 0, matrix(m1, m1));
    f.set_block(0, m1, matrix(m1, m2));
    f.set_block(0, m1 + m2, h13);
    f.set_block(m1, 0, h21);
    f.set_block(m1, m1, matrix(m2, m2));
    f.set_block(m1 + m2, m1, h32);
    DaePair p;
    p.E = block_diag(MatrixFn::identity(m1 + m2), MatrixFn(m3, m3));
    p.F = f;
    return p;
  }

 private:
  std::mt19937_64 rng_;
  bool constant_ = false;
};

// Block sizes used by the property suites.
inline std::vector<BlockSpec> property_specs() {
  using O = Ordering;
  return {BlockSpec({1, 1}, O::Decreasing),    BlockSpec({2, 1}, O::Decreasing),    BlockSpec({2, 2}, O::Decreasing),
          BlockSpec({1, 2}, O::Increasing),    BlockSpec({1, 1, 1}, O::Decreasing), BlockSpec({2, 1, 1}, O::Decreasing),
          BlockSpec({2, 2, 1}, O::Decreasing), BlockSpec({1, 1, 2}, O::Increasing), BlockSpec({3, 2, 1}, O::Decreasing)};
}

}  // namespace daecanon::testing
