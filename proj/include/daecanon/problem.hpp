#pragma once

#include <optional>
#include <string>
#include <vector>

#include "daecanon/pipeline.hpp"

namespace daecanon {

struct Problem {
  std::string name;
  Interval iv;
  ParamMap params;
  DaePair pair;
  StructureTag tag;
  std::vector<ScalarFn> q;  // empty: homogeneous
  std::optional<double> t0;
  Eigen::VectorXd u0;
};

// JSON problem document; see README for the format. Throws InputError/ParseError.
Problem parse_problem(const std::string& json_text);
Problem load_problem(const std::string& path);

// Matrix of expression strings (or numbers) given as a JSON array of rows.
MatrixFn parse_matrix(const std::string& json_rows, const ParamMap& params);

// Expression string for every entry, row-major.
std::vector<std::vector<std::string>> matrix_strings(const MatrixFn& m);

}  // namespace daecanon
