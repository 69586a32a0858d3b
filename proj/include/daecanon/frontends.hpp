#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daecanon/equivalence.hpp"

namespace daecanon {

enum class StructureKind { PreSCF, TCanonical, SCanonical, Hessenberg2, Hessenberg3, Multibody, CustomTransform };

std::string to_string(StructureKind k);
StructureKind structure_from_string(const std::string& s);

// Orthonormal bases of ker H (Bd) and im H^T (Ba) for a full row rank H.
struct KernelBasis {
  MatrixFn Bd, Ba;
};

struct MultibodyInput {
  MatrixFn M, D, Kstiff, G;
  std::optional<MatrixFn> Z;
};

struct StructureTag {
  StructureKind kind = StructureKind::PreSCF;
  int d = -1;
  std::optional<BlockSpec> spec;
  std::vector<int> hess_sizes;  // m_1, m_2 (, m_3)
  std::optional<KernelBasis> basis;
  std::optional<std::vector<int>> permutation;
  std::optional<Transform> custom;
  std::optional<MultibodyInput> multibody;
  std::vector<ScalarFn> scaling;  // hessenberg2: per-column scale of [B_d2 B_a2]
};

struct PrescfDiagnosis {
  bool ok = true;
  std::vector<std::string> issues;
  int bi = -1, bj = -1;
  explicit operator bool() const { return ok; }
};

// E = diag(I_d, N^E), F22 in BUT with nonsingular diagonal blocks, F21 F12 in BUT.
PrescfDiagnosis prescf_check(const DaePair& p, const Context& ctx);

struct FrontendResult {
  Transform T;
  DaePair P;
  std::vector<std::string> notes;
};

FrontendResult from_t_canonical(const DaePair& p, const Context& ctx);
FrontendResult from_s_canonical(const DaePair& p, const Context& ctx);

// Pivoted construction: one column subset of H must be nonsingular at every check point.
KernelBasis kernel_basis(const MatrixFn& h, const Context& ctx);

// `scaling` multiplies column i of [B_d2 B_a2] in K0 and divides the matching row of L0.
FrontendResult hessenberg2_step0(const DaePair& p, int m1, int m2, const Context& ctx,
                                 const std::optional<KernelBasis>& user = std::nullopt,
                                 const std::vector<ScalarFn>& scaling = {});
FrontendResult hessenberg3_step0(const DaePair& p, int m1, int m2, int m3, const Context& ctx,
                                 const std::optional<KernelBasis>& user = std::nullopt);

struct MultibodyResult {
  DaePair original;    // unknowns (p, v, lambda)
  DaePair hessenberg;  // unknowns (v, p, lambda)
  Transform T;
  int m1 = 0, m2 = 0, m3 = 0;
};

// Original pair {diag(I, M, 0), [[0, -[Z 0], 0], [K, D, [Z 0]^T G^T], [G, 0, 0]]}.
DaePair multibody_pair(const MultibodyInput& in);
MultibodyResult multibody_frontend(const MultibodyInput& in, const Context& ctx);

// Row/column i of the result is row/column perm[i] of the input: L = P, K = P^T.
Transform permutation_transform(const std::vector<int>& perm);
FrontendResult apply_permutation_frontend(const DaePair& p, const std::vector<int>& perm);

FrontendResult custom_transform(const DaePair& p, const Transform& t, int d, const BlockSpec& spec,
                                const Context& ctx);

// Step 0 dispatch on the structure tag; the result passes prescf_check.
FrontendResult step0(const DaePair& p, const StructureTag& tag, const Context& ctx);

// Numerically confirm `got` equals `want` at the check points, then return `want`.
MatrixFn settle(const MatrixFn& got, const MatrixFn& want, const Context& ctx, const std::string& what);

}  // namespace daecanon
