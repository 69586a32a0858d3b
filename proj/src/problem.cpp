#include "daecanon/problem.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "daecanon/errors.hpp"

namespace daecanon {

using nlohmann::json;

namespace {

ScalarFn parse_entry(const json& v, const ParamMap& params) {
  if (v.is_number()) return ScalarFn(v.get<double>());
  if (v.is_string()) return parse(v.get<std::string>(), params);
  throw InputError("matrix entries must be numbers or expression strings");
}

MatrixFn matrix_from_json(const json& rows, const ParamMap& params, const std::string& what) {
  if (!rows.is_array()) throw InputError(what + " must be an array of rows");
  if (rows.empty()) return MatrixFn();
  std::vector<std::vector<ScalarFn>> out;
  std::size_t cols = 0;
  for (const auto& r : rows) {
    if (!r.is_array()) throw InputError(what + " rows must be arrays");
    if (out.empty()) cols = r.size();
    if (r.size() != cols) throw InputError(what + " rows have unequal length");
    std::vector<ScalarFn> row;
    for (const auto& e : r) row.push_back(parse_entry(e, params));
    out.push_back(std::move(row));
  }
  return MatrixFn::from_rows(out);
}

std::vector<ScalarFn> vector_from_json(const json& v, const ParamMap& params, const std::string& what) {
  if (!v.is_array()) throw InputError(what + " must be an array");
  std::vector<ScalarFn> out;
  for (const auto& e : v) out.push_back(parse_entry(e, params));
  return out;
}

}  // namespace

MatrixFn parse_matrix(const std::string& json_rows, const ParamMap& params) {
  json j;
  try {
    j = json::parse(json_rows);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed matrix: ") + e.what());
  }
  return matrix_from_json(j, params, "matrix");
}

std::vector<std::vector<std::string>> matrix_strings(const MatrixFn& m) {
  std::vector<std::vector<std::string>> out(m.rows(), std::vector<std::string>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out[i][j] = m(i, j).str();
  return out;
}

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed problem file: ") + e.what());
  }
  try {
    Problem p;
    p.name = j.value("name", "problem");
    if (j.contains("parameters"))
      for (auto& [k, v] : j["parameters"].items()) p.params[k] = v.get<double>();
    if (!j.contains("interval") || j["interval"].size() != 2) throw InputError("interval [t0, t1] is required");
    p.iv.t0 = j["interval"][0].get<double>();
    p.iv.t1 = j["interval"][1].get<double>();
    if (!(p.iv.t1 > p.iv.t0)) throw InputError("interval is degenerate");
    if (j.contains("avoid")) p.iv.avoid = j["avoid"].get<std::vector<double>>();
    if (j.contains("avoid_radius")) p.iv.avoid_radius = j["avoid_radius"].get<double>();

    const json st = j.value("structure", json::object());
    p.tag.kind = structure_from_string(st.value("kind", std::string("prescf")));
    if (st.contains("d")) p.tag.d = st["d"].get<int>();
    if (st.contains("blocks"))
      p.tag.spec = BlockSpec(st["blocks"].get<std::vector<int>>(),
                             ordering_from_string(st.value("ordering", std::string("decreasing"))));
    if (st.contains("sizes")) p.tag.hess_sizes = st["sizes"].get<std::vector<int>>();
    if (st.contains("permutation")) p.tag.permutation = st["permutation"].get<std::vector<int>>();
    if (st.contains("basis")) {
      KernelBasis b;
      b.Bd = matrix_from_json(st["basis"].at("Bd"), p.params, "basis.Bd");
      b.Ba = matrix_from_json(st["basis"].at("Ba"), p.params, "basis.Ba");
      if (b.Bd.rows() == 0) b.Bd = MatrixFn(b.Ba.rows(), 0);
      p.tag.basis = b;
    }
    if (st.contains("scaling")) p.tag.scaling = vector_from_json(st["scaling"], p.params, "structure.scaling");
    if (st.contains("L0") || st.contains("K0"))
      p.tag.custom = Transform{matrix_from_json(st.at("L0"), p.params, "L0"), matrix_from_json(st.at("K0"), p.params, "K0")};

    if (p.tag.kind == StructureKind::Multibody) {
      const json& mb = j.at("multibody");
      MultibodyInput in;
      in.M = matrix_from_json(mb.at("M"), p.params, "M");
      in.G = matrix_from_json(mb.at("G"), p.params, "G");
      int nv = in.M.rows(), np = in.G.cols();
      in.D = mb.contains("D") ? matrix_from_json(mb["D"], p.params, "D") : MatrixFn(nv, nv);
      in.Kstiff = mb.contains("K") ? matrix_from_json(mb["K"], p.params, "K") : MatrixFn(nv, np);
      if (mb.contains("Z")) in.Z = matrix_from_json(mb["Z"], p.params, "Z");
      p.tag.multibody = in;
      p.pair = multibody_pair(in);
    } else {
      p.pair.E = matrix_from_json(j.at("E"), p.params, "E");
      p.pair.F = matrix_from_json(j.at("F"), p.params, "F");
    }
    int m = p.pair.E.rows();
    if (m == 0 || p.pair.E.cols() != m || p.pair.F.rows() != m || p.pair.F.cols() != m)
      throw InputError("E and F must be square of equal size");
    if (j.contains("m") && j["m"].get<int>() != m) throw InputError("declared m does not match E");
    if (p.tag.spec && p.tag.d >= 0 && p.tag.spec->a() != m - p.tag.d)
      throw InputError("declared blocks do not sum to a = m - d");
    if (j.contains("q")) {
      p.q = vector_from_json(j["q"], p.params, "q");
      if (static_cast<int>(p.q.size()) != m) throw InputError("q must have m entries");
    }
    if (j.contains("t0")) p.t0 = j["t0"].get<double>();
    if (j.contains("u0")) {
      auto u = j["u0"].get<std::vector<double>>();
      p.u0 = Eigen::Map<Eigen::VectorXd>(u.data(), u.size());
    }
    return p;
  } catch (const json::exception& e) {
    throw InputError(std::string("problem file: ") + e.what());
  }
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace daecanon
