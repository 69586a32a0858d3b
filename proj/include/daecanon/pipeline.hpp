#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daecanon/frontends.hpp"

namespace daecanon {

struct StepResult {
  Transform T;
  DaePair P;
  int iterations = 0;
  std::vector<MatrixFn> terms;  // A_i (step 1) or B_j (step 2)
  std::vector<Transform> factors;
};

// Iteration eliminating F12, accumulating A = sum A_i.
StepResult step1(const DaePair& p, const Context& ctx);
// Iteration eliminating F21, accumulating B = sum B_j.
StepResult step2(const DaePair& p, const Context& ctx);
// L3 = diag(I, R^-1), K3 = I. The second return is R^-1.
StepResult step3(const DaePair& p, const Context& ctx, MatrixFn* rinv = nullptr);
// Block recursion for L_s N3 K_s = N^E, L_s (K_s + N3 K_s') = I. `frame` is R^-1 from
// step 3; it supplies the complement columns of the diagonal blocks of K_s.
StepResult step4(const DaePair& p, const Context& ctx, const MatrixFn* frame = nullptr);

struct Stage {
  std::string label;
  Transform T;  // from the previous stage
  DaePair P;
  int iterations = 0;
  EquivalenceReport check;
  std::vector<Transform> factors;  // individual iteration transforms of steps 1 and 2
};

struct PipelineOptions {
  std::string stop_after = "sscf";  // prescf | step1 | step2 | scf | sscf
  bool verify = true;
};

struct PipelineResult {
  DaePair input;
  std::vector<Stage> stages;
  MatrixFn omega, R, A, B;
  std::vector<MatrixFn> A_terms, B_terms;
  Characteristics chars;
  int d = 0;
  BlockSpec spec;
  bool sscf = false;
  std::string step4_diagnostic;
  std::vector<std::string> notes;
  std::string failed_stage;
  std::string error;

  const Stage* stage(const std::string& label) const;
  // Composite transform from the input to the named stage (inclusive).
  Transform total(const std::string& upto) const;
  Transform total() const;
};

// Runs Step 0 by tag and Steps 1-4. Stage errors after Step 0 are recorded in
// `failed_stage`/`error` with earlier stages retained; Step 0 errors propagate.
PipelineResult run_pipeline(const DaePair& p, const StructureTag& tag, const Context& ctx,
                            const PipelineOptions& opt = {});

// Throws ExpressionTooLarge when the matrices exceed the node budget.
void guard_size(const std::vector<const MatrixFn*>& ms, const Context& ctx, const std::string& where);

}  // namespace daecanon
