#include "daecanon/fixtures.hpp"

#include <cmath>
#include <functional>
#include <json.hpp>

#include "daecanon/errors.hpp"

namespace daecanon {

using nlohmann::json;

namespace {

using Rows = std::vector<std::vector<std::string>>;

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

// Shorthands for omega and gamma in the pendulum example.
std::string expand(const std::string& s) {
  std::string out = replace_all(s, "omega", "(lambda+(-eta^2*t+eta)/gamma^2)");
  return replace_all(out, "gamma", "(sqrt((-eta*t+1)^2+1))");
}

json rows_json(const Rows& r) {
  json out = json::array();
  for (const auto& row : r) {
    json jr = json::array();
    for (const auto& e : row) jr.push_back(expand(e));
    out.push_back(jr);
  }
  return out;
}

// Worked 3x3 example, mu = 2.
const Rows kBiE = {{"sin(t)", "cos(t)", "0"}, {"0", "0", "0"}, {"-sin(2*t)/2", "sin(t)^2", "0"}};
const Rows kBiF = {{"-sin(t)+cos(t)", "-sin(t)-cos(t)", "0"},
                   {"cos(t)", "-sin(t)", "0"},
                   {"sin(t)^2", "sin(2*t)/2", "-t^2-1"}};
const Rows kBiL0 = {{"1", "-1-cos(t)/sin(t)", "0"}, {"cos(t)", "0", "1"}, {"0", "1", "0"}};
const Rows kBiK0 = {{"1/sin(t)", "0", "-cos(t)/sin(t)"}, {"0", "0", "1"}, {"0", "1", "0"}};

// Linear pendulum in Hessenberg-2 form, 3x3.
const Rows kHmmE = {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "0"}};
const Rows kHmmF = {{"lambda", "-1", "-1"}, {"eta*(-eta*t^2+t-1)", "lambda", "-eta*t"}, {"-eta*t+1", "1", "0"}};

// Linearized pendulum, 7x7 Hessenberg-3 after permutation.
const Rows kCmE = {{"1", "0", "0", "0", "0", "0", "0"}, {"0", "1", "0", "0", "0", "0", "0"},
                   {"0", "0", "1", "0", "0", "0", "0"}, {"0", "0", "0", "1", "0", "0", "0"},
                   {"0", "0", "0", "0", "1", "0", "0"}, {"0", "0", "0", "0", "0", "1", "0"},
                   {"0", "0", "0", "0", "0", "0", "0"}};
const Rows kCmF = {{"0", "0", "0", "-1", "0", "0", "0"},
                   {"0", "0", "0", "0", "-1", "0", "0"},
                   {"0", "0", "0", "0", "0", "-1", "0"},
                   {"0", "0", "sin(t)", "0", "1", "-cos(t)", "-alpha*cos(t)^2"},
                   {"0", "0", "-cos(t)", "-1", "0", "-sin(t)", "-alpha*sin(t)*cos(t)"},
                   {"0", "0", "1", "0", "0", "0", "alpha*sin(t)"},
                   {"alpha*cos(t)^2", "alpha*sin(t)*cos(t)", "-alpha*sin(t)", "0", "0", "0", "0"}};
const Rows kCmBd = {{"sin(t)*cos(t)", "sin(t)"}, {"sin(t)^2", "-cos(t)"}, {"cos(t)", "0"}};
const Rows kCmBa = {{"cos(t)^2"}, {"sin(t)*cos(t)"}, {"-sin(t)"}};

json fixture_doc(const std::string& name) {
  json j;
  j["name"] = name;
  if (name == "berger-ilchmann") {
    j["interval"] = {0.1, 3.0};
    j["E"] = rows_json(kBiE);
    j["F"] = rows_json(kBiF);
    j["structure"] = {{"kind", "custom_transform"}, {"d", 1}, {"blocks", {1, 1}}, {"ordering", "decreasing"},
                      {"L0", rows_json(kBiL0)}, {"K0", rows_json(kBiK0)}};
    j["t0"] = std::numbers::pi / 2;
    j["u0"] = {1.0};
  } else if (name == "hmm98") {
    j["parameters"] = {{"eta", 1.0}, {"lambda", 2.0}};
    j["interval"] = {0.0, 2.0};
    j["E"] = rows_json(kHmmE);
    j["F"] = rows_json(kHmmF);
    j["structure"] = {{"kind", "hessenberg2"}, {"sizes", {2, 1}}};
    j["t0"] = 0.0;
    j["u0"] = {std::sqrt(2.0)};
  } else if (name == "campbell-moore") {
    j["parameters"] = {{"alpha", 1.0}};
    j["interval"] = {0.1, 1.4};
    j["E"] = rows_json(kCmE);
    j["F"] = rows_json(kCmF);
    j["structure"] = {{"kind", "hessenberg3"},
                      {"sizes", {3, 3, 1}},
                      {"permutation", {3, 4, 5, 0, 1, 2, 6}},
                      {"basis", {{"Bd", rows_json(kCmBd)}, {"Ba", rows_json(kCmBa)}}}};
    j["t0"] = 0.5;
    j["u0"] = {1.0, 0.0, 0.0, 0.0};
  } else {
    throw InputError("unknown fixture '" + name + "'");
  }
  return j;
}

}  // namespace

std::vector<std::string> fixture_names() { return {"berger-ilchmann", "hmm98", "campbell-moore"}; }

ParamMap fixture_defaults(const std::string& name) {
  json j = fixture_doc(name);
  ParamMap out;
  if (j.contains("parameters"))
    for (auto& [k, v] : j["parameters"].items()) out[k] = v.get<double>();
  return out;
}

std::string fixture_json(const std::string& name, const ParamMap& params) {
  json j = fixture_doc(name);
  for (const auto& [k, v] : params) {
    if (!j.contains("parameters") || !j["parameters"].contains(k))
      throw InputError("fixture '" + name + "' has no parameter '" + k + "'");
    j["parameters"][k] = v;
  }
  return j.dump(2);
}

Problem fixture_problem(const std::string& name, const ParamMap& params) {
  return parse_problem(fixture_json(name, params));
}

double display_deviation(const MatrixFn& got, const MatrixFn& want, const std::vector<double>& ts, SignMode mode) {
  if (got.rows() != want.rows() || got.cols() != want.cols())
    throw ShapeError("display comparison of " + std::to_string(got.rows()) + "x" + std::to_string(got.cols()) +
                     " with " + std::to_string(want.rows()) + "x" + std::to_string(want.cols()));
  double worst = 0;
  for (double t : ts) {
    Eigen::MatrixXd g = got.eval(t), w = want.eval(t);
    double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if (mode == SignMode::Columns) {
      for (int j = 0; j < g.cols(); ++j)
        if ((g.col(j) + w.col(j)).cwiseAbs().maxCoeff() < (g.col(j) - w.col(j)).cwiseAbs().maxCoeff()) g.col(j) *= -1;
    } else if (mode == SignMode::Rows) {
      for (int i = 0; i < g.rows(); ++i)
        if ((g.row(i) + w.row(i)).cwiseAbs().maxCoeff() < (g.row(i) - w.row(i)).cwiseAbs().maxCoeff()) g.row(i) *= -1;
    }
    double dev = (g - w).cwiseAbs().maxCoeff() / scale;
    if (!std::isfinite(dev)) return INFINITY;
    worst = std::max(worst, dev);
  }
  return worst;
}

bool ReproduceReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

const DisplayCheck* ReproduceReport::find(const std::string& label) const {
  for (const auto& c : checks)
    if (c.label == label) return &c;
  return nullptr;
}

ReproduceReport reproduce(const std::string& name, const ParamMap& params, int samples) {
  Problem prob = fixture_problem(name, params);
  Context ctx(prob.iv);
  ReproduceReport rep;
  rep.name = name;
  rep.params = prob.params;
  rep.result = run_pipeline(prob.pair, prob.tag, ctx);
  const PipelineResult& r = rep.result;
  std::vector<double> ts = uniform_points(prob.iv, samples);
  double tol = ctx.tol.check;

  auto M = [&](const Rows& rows) {
    std::vector<std::vector<ScalarFn>> out;
    for (const auto& row : rows) {
      std::vector<ScalarFn> v;
      for (const auto& e : row) v.push_back(parse(expand(e), prob.params));
      out.push_back(v);
    }
    return MatrixFn::from_rows(out);
  };
  auto add = [&](const std::string& label, const std::function<MatrixFn()>& got, const MatrixFn& want,
                 SignMode mode = SignMode::Exact, const std::string& note = "") {
    DisplayCheck c{label, 0, false, note};
    try {
      c.deviation = display_deviation(got(), want, ts, mode);
      c.pass = c.deviation <= tol;
    } catch (const Error& e) {
      c.deviation = INFINITY;
      c.note = e.what();
    }
    rep.checks.push_back(c);
  };
  auto st = [&](const std::string& label) -> const Stage& {
    const Stage* s = r.stage(label);
    if (!s) throw StructureError("StageMissing", "stage " + label + " was not reached" +
                                                     (r.error.empty() ? "" : ": " + r.error));
    return *s;
  };
  auto factor = [&](const std::string& label, std::size_t i) -> const Transform& {
    const Stage& s = st(label);
    if (s.factors.size() <= i) throw StructureError("StageMissing", label + " has fewer iterations than displayed");
    return s.factors[i];
  };
  auto I = [](int n) { return MatrixFn::identity(n); };

  if (name == "berger-ilchmann") {
    add("L0", [&] { return st("step0").T.L; }, M(kBiL0));
    add("K0", [&] { return st("step0").T.K; }, M(kBiK0));
    add("E0", [&] { return st("step0").P.E; }, M({{"1", "0", "0"}, {"0", "0", "1"}, {"0", "0", "0"}}));
    add("F0", [&] { return st("step0").P.F; },
        M({{"(sin(2*t)+2)/(cos(2*t)-1)", "0", "sqrt(2)*sin(t+pi/4)/sin(t)^2"},
           {"-cos(t)+1/sin(t)", "-t^2-1", "-cos(t)/sin(t)"},
           {"cos(t)/sin(t)", "0", "-1/sin(t)"}}));
    add("L1", [&] { return st("step1").T.L; }, M({{"1", "0", "1+cos(t)/sin(t)"}, {"0", "1", "0"}, {"0", "0", "1"}}));
    add("K1", [&] { return st("step1").T.K; }, I(3));
    add("F1", [&] { return st("step1").P.F; },
        M({{"-1", "0", "0"}, {"-cos(t)+1/sin(t)", "-t^2-1", "-cos(t)/sin(t)"}, {"cos(t)/sin(t)", "0", "-1/sin(t)"}}));
    MatrixFn l21 = M({{"1", "0", "0"}, {"-cos(t)", "1", "0"}, {"0", "0", "1"}});
    MatrixFn k21 = M({{"1", "0", "0"}, {"-sqrt(2)*cos(t+pi/4)/(t^2+1)", "1", "0"}, {"cos(t)", "0", "1"}});
    MatrixFn k22 = M({{"1", "0", "0"}, {"sqrt(2)*cos(t+pi/4)/(t^2+1)", "1", "0"}, {"0", "0", "1"}});
    add("L2(1)", [&] { return factor("step2", 0).L; }, l21);
    add("K2(1)", [&] { return factor("step2", 0).K; }, k21);
    add("F2(1)", [&] { return apply(factor("step2", 0), st("step1").P).F; },
        M({{"-1", "0", "0"}, {"sqrt(2)*cos(t+pi/4)", "-t^2-1", "-cos(t)/sin(t)"}, {"0", "0", "-1/sin(t)"}}));
    add("L2(2)", [&] { return factor("step2", 1).L; }, I(3));
    add("K2(2)", [&] { return factor("step2", 1).K; }, k22);
    add("L2", [&] { return st("step2").T.L; }, l21);
    add("K2", [&] { return st("step2").T.K; }, k21 * k22);
    add("F2", [&] { return st("step2").P.F; },
        M({{"-1", "0", "0"}, {"0", "-t^2-1", "-cos(t)/sin(t)"}, {"0", "0", "-1/sin(t)"}}));
    add("L3", [&] { return st("step3").T.L; },
        M({{"1", "0", "0"}, {"0", "-1/(t^2+1)", "cos(t)/(t^2+1)"}, {"0", "0", "-sin(t)"}}));
    add("K3", [&] { return st("step3").T.K; }, I(3));
    add("E3", [&] { return st("step3").P.E; }, M({{"1", "0", "0"}, {"0", "0", "-sin(t)"}, {"0", "0", "0"}}),
        SignMode::Exact, "displayed entry -sin(t); L3 E2 K3 gives -1/(t^2+1)");
    add("F3", [&] { return st("step3").P.F; }, M({{"-1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}));
    add("L4", [&] { return st("step4").T.L; }, M({{"1", "0", "0"}, {"0", "-1/sin(t)", "0"}, {"0", "0", "1"}}),
        SignMode::Exact, "follows from the displayed E3");
    add("K4", [&] { return st("step4").T.K; }, M({{"1", "0", "0"}, {"0", "-sin(t)", "0"}, {"0", "0", "1"}}),
        SignMode::Exact, "follows from the displayed E3");
    add("E4", [&] { return st("step4").P.E; }, M({{"1", "0", "0"}, {"0", "0", "1"}, {"0", "0", "0"}}));
    add("F4", [&] { return st("step4").P.F; }, M({{"-1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}));
  } else if (name == "hmm98") {
    add("L0", [&] { return st("step0").T.L; },
        M({{"1/gamma", "(eta*t-1)/gamma", "0"}, {"(-eta*t+1)/gamma", "1/gamma", "0"}, {"0", "0", "1"}}), SignMode::Rows);
    add("K0", [&] { return st("step0").T.K; },
        M({{"1/gamma", "0", "(-eta*t+1)/gamma"}, {"(eta*t-1)/gamma", "0", "1/gamma"}, {"0", "1", "0"}}),
        SignMode::Columns);
    add("E0", [&] { return st("step0").P.E; }, M({{"1", "0", "0"}, {"0", "0", "1"}, {"0", "0", "0"}}));
    add("F0", [&] { return st("step0").P.F; },
        M({{"(-eta*(eta*t-1)*(t*(eta*t-1)+1)+lambda+(eta*t-1)*(lambda*(eta*t-1)-1))/gamma^2",
            "(-eta*t*(eta*t-1)-1)/gamma",
            "(eta^4*t^4-3*eta^3*t^3+eta^3*t^2+3*eta^2*t^2-2*eta^2*t-eta*t-1)/gamma^2"},
           {"(-eta*t+1)/gamma^2", "-1/gamma",
            "(eta*t+lambda+(eta*t-1)*(eta*t*(eta*t-1)+eta+lambda*(eta*t-1))-1)/gamma^2"},
           {"0", "0", "gamma"}}));
    add("L1", [&] { return st("step1").T.L; },
        M({{"1", "-eta^2*t^2+eta*t-1", "eta*t*gamma"}, {"0", "1", "0"}, {"0", "0", "1"}}));
    add("K1", [&] { return st("step1").T.K; }, M({{"1", "0", "eta^2*t^2-eta*t+1"}, {"0", "1", "0"}, {"0", "0", "1"}}));
    const std::string f22_12 = "(eta^2*lambda*t^2+eta^2*t-2*eta*lambda*t-eta+2*lambda)/gamma^2";
    add("F1", [&] { return st("step1").P.F; },
        M({{"omega", "0", "0"}, {"(-eta*t+1)/gamma^2", "-1/gamma", f22_12}, {"0", "0", "gamma"}}));
    add("omega", [&] { return r.omega; },
        M({{"(eta^2*lambda*t^2-eta^2*t-2*eta*lambda*t+eta+2*lambda)/gamma^2"}}));
    add("L2", [&] { return st("step2").T.L; }, I(3));
    add("K2", [&] { return st("step2").T.K; }, M({{"1", "0", "0"}, {"(-eta*t+1)/gamma", "1", "0"}, {"0", "0", "1"}}));
    add("F2", [&] { return st("step2").P.F; },
        M({{"omega", "0", "0"}, {"0", "-1/gamma", f22_12}, {"0", "0", "gamma"}}));
    add("E_SCF", [&] { return st("step3").P.E; }, M({{"1", "0", "0"}, {"0", "0", "-gamma"}, {"0", "0", "0"}}));
    add("F_SCF", [&] { return st("step3").P.F; }, M({{"omega", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}));
    add("L4", [&] { return st("step4").T.L; }, M({{"1", "0", "0"}, {"0", "1/(-gamma)", "0"}, {"0", "0", "1"}}));
    add("K4", [&] { return st("step4").T.K; }, M({{"1", "0", "0"}, {"0", "-gamma", "0"}, {"0", "0", "1"}}));
    add("E_SSCF", [&] { return st("step4").P.E; }, M({{"1", "0", "0"}, {"0", "0", "1"}, {"0", "0", "0"}}));
    add("F_SSCF", [&] { return st("step4").P.F; }, M({{"omega", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}));
    add("L", [&] { return r.total("step2").L; },
        M({{"eta*t*gamma", "(-eta^2*t^2+2*eta*t-2)/gamma", "eta*t*gamma"},
           {"(-eta*t+1)/gamma", "1/gamma", "0"},
           {"0", "0", "1"}}));
    MatrixFn k = M({{"1/gamma", "0", "gamma"}, {"(eta*t-1)/gamma", "0", "eta*t*gamma"}, {"(-eta*t+1)/gamma", "1", "0"}});
    add("K", [&] { return r.total("step2").K; }, k);
    add("K^-1", [&] { return inverse(r.total("step2").K, ctx); },
        M({{"eta*t*gamma", "-gamma", "0"}, {"eta*t*(eta*t-1)", "-eta*t+1", "1"}, {"(-eta*t+1)/gamma", "1/gamma", "0"}}));
    add("Pi_can", [&] { return projector_from_prescf(r, ctx).Pi; },
        M({{"eta*t", "-1", "0"}, {"eta*t*(eta*t-1)", "-eta*t+1", "0"}, {"eta*t*(-eta*t+1)", "eta*t-1", "0"}}));
    add("A", [&] { return r.A; }, M({{"0", "eta^2*t^2-eta*t+1"}}));
    add("B", [&] { return r.B; }, M({{"(-eta*t+1)/gamma"}, {"0"}}));
    add("Pi_inner", [&] { return projector_from_prescf(r, ctx).inner; },
        M({{"1", "0", "-eta^2*t^2+eta*t-1"},
           {"(-eta*t+1)/gamma", "0", "(-eta*t+1)*(eta^2*t^2-eta*t+1)/gamma"},
           {"0", "0", "0"}}),
        SignMode::Exact, "displayed (2,3) entry has the sign of +BA; -BA reproduces the displayed Pi_can");
    add("omega (scaled K0)", [&] {
      StructureTag tag = prob.tag;
      ScalarFn g = parse(expand("gamma"), prob.params);
      tag.scaling = {g, g};
      return run_pipeline(prob.pair, tag, ctx, {"step1", true}).omega;
    }, M({{"lambda"}}));
  } else if (name == "campbell-moore") {
    add("H_F", [&] { return apply_permutation_frontend(prob.pair, *prob.tag.permutation).P.F; },
        M({{"0", "1", "-cos(t)", "0", "0", "sin(t)", "-alpha*cos(t)^2"},
           {"-1", "0", "-sin(t)", "0", "0", "-cos(t)", "-alpha*sin(t)*cos(t)"},
           {"0", "0", "0", "0", "0", "1", "alpha*sin(t)"},
           {"-1", "0", "0", "0", "0", "0", "0"},
           {"0", "-1", "0", "0", "0", "0", "0"},
           {"0", "0", "-1", "0", "0", "0", "0"},
           {"0", "0", "0", "alpha*cos(t)^2", "alpha*sin(t)*cos(t)", "-alpha*sin(t)", "0"}}));
    MatrixFn e0 = M({{"1", "0", "0", "0", "0", "0", "0"}, {"0", "1", "0", "0", "0", "0", "0"},
                     {"0", "0", "1", "0", "0", "0", "0"}, {"0", "0", "0", "1", "0", "0", "0"},
                     {"0", "0", "0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "0", "0", "1"},
                     {"0", "0", "0", "0", "0", "0", "0"}});
    add("E0", [&] { return st("step0").P.E; }, e0);
    add("F0", [&] { return st("step0").P.F; },
        M({{"-sin(2*t)/2", "0", "cos(t)^2", "0", "0", "-cos(t)^2", "-sin(2*t)/2"},
           {"0", "0", "cos(t)", "0", "0", "0", "-sin(t)"},
           {"-1", "0", "0", "sin(t)", "0", "0", "-1"},
           {"0", "-1", "-sin(t)", "0", "0", "0", "-cos(t)"},
           {"sin(t)^2", "0", "-sin(2*t)/2", "0", "-alpha", "sin(2*t)/2", "sin(t)^2"},
           {"0", "0", "1", "cos(t)", "0", "-1", "0"},
           {"0", "0", "0", "0", "0", "0", "alpha"}}));
    add("L1", [&] { return st("step1").T.L; },
        M({{"1", "0", "0", "0", "0", "-cos(t)^2", "(cos(t)^2+3)*sin(2*t)/(2*alpha)"},
           {"0", "1", "0", "0", "0", "0", "sin(t)/alpha"},
           {"0", "0", "1", "0", "0", "0", "(cos(t)^2+1)/alpha"},
           {"0", "0", "0", "1", "0", "0", "cos(t)/alpha"},
           {"0", "0", "0", "0", "1", "0", "0"},
           {"0", "0", "0", "0", "0", "1", "0"},
           {"0", "0", "0", "0", "0", "0", "1"}}));
    MatrixFn k1 = I(7);
    k1.set(0, 6, parse("cos(t)^2", prob.params));
    add("K1", [&] { return st("step1").T.K; }, k1);
    Rows f1 = {{"-sin(2*t)/2", "0", "0", "-cos(t)^3", "0", "0", "0"},
               {"0", "0", "cos(t)", "0", "0", "0", "0"},
               {"-1", "0", "0", "sin(t)", "0", "0", "0"},
               {"0", "-1", "-sin(t)", "0", "0", "0", "0"},
               {"sin(t)^2", "0", "-sin(2*t)/2", "0", "-alpha", "sin(2*t)/2", "(cos(t)^2+1)*sin(t)^2"},
               {"0", "0", "1", "cos(t)", "0", "-1", "0"},
               {"0", "0", "0", "0", "0", "0", "alpha"}};
    add("F1", [&] { return st("step1").P.F; }, M(f1));
    MatrixFn l2 = I(7);
    l2.set(4, 2, ScalarFn(-1.0));
    l2.set(4, 3, parse("-cos(t)", prob.params));
    add("L2", [&] { return st("step2").T.L; }, l2);
    Rows k2 = {{"1", "0", "0", "0", "0", "0", "0"},
               {"0", "1", "0", "0", "0", "0", "0"},
               {"0", "0", "1", "0", "0", "0", "0"},
               {"0", "0", "0", "1", "0", "0", "0"},
               {"(sin(t)^2+1)/alpha", "cos(t)/alpha", "sin(2*t)/(2*alpha)", "-(sin(t)^3+sin(t))/alpha", "1", "0", "0"},
               {"0", "0", "1", "cos(t)", "0", "1", "0"},
               {"0", "0", "0", "0", "0", "0", "1"}};
    add("K2", [&] { return st("step2").T.K; }, M(k2));
    Rows f2 = f1;
    f2[4] = {"0", "0", "0", "0", "-alpha", "sin(2*t)/2", "(cos(t)^2+1)*sin(t)^2"};
    f2[5] = {"0", "0", "0", "0", "0", "-1", "0"};
    add("F2", [&] { return st("step2").P.F; }, M(f2));
    add("A", [&] { return r.A; }, M({{"0", "0", "cos(t)^2"}, {"0", "0", "0"}, {"0", "0", "0"}, {"0", "0", "0"}}));
    add("B", [&] { return r.B; },
        M({{"(sin(t)^2+1)/alpha", "cos(t)/alpha", "sin(2*t)/(2*alpha)", "-(sin(t)^3+sin(t))/alpha"},
           {"0", "0", "1", "cos(t)"},
           {"0", "0", "0", "0"}}));
    add("Pi_inner", [&] { return projector_from_prescf(r, ctx).inner; },
        M({{"1", "0", "0", "0", "0", "0", "-cos(t)^2"},
           {"0", "1", "0", "0", "0", "0", "0"},
           {"0", "0", "1", "0", "0", "0", "0"},
           {"0", "0", "0", "1", "0", "0", "0"},
           {"(sin(t)^2+1)/alpha", "cos(t)/alpha", "sin(2*t)/(2*alpha)", "-(sin(t)^3+sin(t))/alpha", "0", "0",
            "(cos(t)^2-2)*cos(t)^2/alpha"},
           {"0", "0", "1", "cos(t)", "0", "0", "0"},
           {"0", "0", "0", "0", "0", "0", "0"}}));
  }
  return rep;
}

}  // namespace daecanon
