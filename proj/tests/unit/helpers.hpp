#pragma once

#include <string>
#include <vector>

#include "daecanon/matrix_fn.hpp"

namespace daecanon::testing {

inline MatrixFn rows(const std::vector<std::vector<std::string>>& src, const ParamMap& params = {}) {
  std::vector<std::vector<ScalarFn>> out;
  for (const auto& r : src) {
    std::vector<ScalarFn> row;
    for (const auto& e : r) row.push_back(parse(e, params));
    out.push_back(row);
  }
  return MatrixFn::from_rows(out);
}

inline Eigen::MatrixXd numeric(int r, int c, std::initializer_list<double> v) {
  Eigen::MatrixXd m(r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace daecanon::testing
