#pragma once

#include "daecanon/pipeline.hpp"

namespace daecanon {

struct CanonicalObjects {
  MatrixFn Pi;       // m x m
  MatrixFn inner;    // [[I+AB, -A-ABA], [B, -BA]]
  MatrixFn S_basis;  // m x d, columns span S_can
  MatrixFn N_basis;  // m x a, columns span N_can
  MatrixFn A, B, omega;
};

// Inverse of a transform factor; orthogonal factors are inverted by transposition.
MatrixFn factor_inverse(const MatrixFn& k, const Context& ctx);

// Pi_can = K0 [[I+AB, -A-ABA], [B, -BA]] K0^-1, bases from K = K0 K1 K2.
CanonicalObjects projector_from_prescf(const PipelineResult& r, const Context& ctx);

// K diag(I_d, 0) K^-1 with K = K0 K1 K2 evaluated pointwise.
Eigen::MatrixXd projector_via_k(const PipelineResult& r, double t);

struct ProjectorReport {
  double idempotency = 0;  // max |Pi^2 - Pi|
  double trace_dev = 0;    // max |trace Pi - d|
  int min_rank = 0, max_rank = 0;
  double range = 0;   // max |Pi S - S|
  double kernel = 0;  // max |Pi N|
  double complement_sigma = 0;  // min smallest singular value of [S N], relative
  double route_dev = 0;         // max |Pi - K diag(I,0) K^-1|
  bool ok(double tol) const;
};

ProjectorReport check_projector(const PipelineResult& r, const CanonicalObjects& c, const std::vector<double>& ts);

struct PureOde {
  MatrixFn omega;        // u' + omega u = qbar_1
  MatrixFn u_extractor;  // u = u_extractor x
  MatrixFn q_mapper;     // qbar_1 = q_mapper q
};

PureOde pure_ode(const PipelineResult& r, const Context& ctx);

// Omega_hat = K11^-1 Omega K11 + K11^-1 K11'.
MatrixFn omega_change_of_basis(const MatrixFn& omega, const MatrixFn& k11, const Context& ctx);

// Characteristics from the block spec, cross-checked against the rank structure of the
// constant SSCF nilpotent part when Step 4 succeeded. Throws on disagreement.
Characteristics canonical_characteristics(const PipelineResult& r, const Context& ctx);

}  // namespace daecanon
