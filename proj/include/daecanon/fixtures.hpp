#pragma once

#include <string>
#include <vector>

#include "daecanon/canonical.hpp"
#include "daecanon/problem.hpp"

namespace daecanon {

// Built-in worked examples: "berger-ilchmann", "hmm98", "campbell-moore".
std::vector<std::string> fixture_names();
ParamMap fixture_defaults(const std::string& name);
// Problem document with `params` merged over the defaults.
std::string fixture_json(const std::string& name, const ParamMap& params = {});
Problem fixture_problem(const std::string& name, const ParamMap& params = {});

enum class SignMode { Exact, Columns, Rows };

// Max over ts of the entrywise deviation relative to max(1, |want|). Columns/Rows allow a
// per-sample sign flip of each column/row of `got`.
double display_deviation(const MatrixFn& got, const MatrixFn& want, const std::vector<double>& ts,
                         SignMode mode = SignMode::Exact);

struct DisplayCheck {
  std::string label;
  double deviation = 0;
  bool pass = false;
  std::string note;
};

struct ReproduceReport {
  std::string name;
  ParamMap params;
  PipelineResult result;
  std::vector<DisplayCheck> checks;
  bool all_pass() const;
  const DisplayCheck* find(const std::string& label) const;
};

// Runs the pipeline on the fixture and compares every displayed matrix at `samples`
// uniform points of the interval.
ReproduceReport reproduce(const std::string& name, const ParamMap& params = {}, int samples = 20);

}  // namespace daecanon
