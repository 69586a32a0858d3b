#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "daecanon/errors.hpp"
#include "daecanon/fixtures.hpp"
#include "daecanon/solver.hpp"

using namespace daecanon;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kFailed = 1, kInput = 2;

ParamMap parse_params(const std::vector<std::string>& kv) {
  ParamMap out;
  for (const auto& s : kv) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw InputError("--param expects name=value, got '" + s + "'");
    try {
      out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw InputError("--param value is not a number: '" + s + "'");
    }
  }
  return out;
}

// A path to a problem file, or fixture:<name>.
Problem load_input(const std::string& input, const ParamMap& params) {
  if (input.rfind("fixture:", 0) == 0) return fixture_problem(input.substr(8), params);
  Problem p = load_problem(input);
  if (!params.empty()) {
    std::ifstream in(input);
    json j = json::parse(in);
    for (const auto& [k, v] : params) j["parameters"][k] = v;
    p = parse_problem(j.dump());
  }
  return p;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

json matrix_json(const MatrixFn& m) { return matrix_strings(m); }

void print_chars(const Characteristics& c) {
  std::cout << "m=" << c.m << " d=" << c.d << " a=" << c.a << " r=" << c.r << " mu=" << c.mu << " theta=[";
  for (std::size_t i = 0; i < c.theta.size(); ++i) std::cout << (i ? "," : "") << c.theta[i];
  std::cout << "]\n";
}

int cmd_analyze(const Problem& prob) {
  Context ctx(prob.iv);
  PipelineResult r = run_pipeline(prob.pair, prob.tag, ctx);
  std::cout << "problem " << prob.name << " on [" << prob.iv.t0 << ", " << prob.iv.t1 << "]\n";
  for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
  for (const auto& s : r.stages)
    std::cout << std::left << std::setw(6) << s.label << " iterations=" << s.iterations << " dev_E=" << s.check.dev_E
              << " dev_F=" << s.check.dev_F << "\n";
  print_chars(r.chars);
  if (!r.step4_diagnostic.empty()) std::cout << "step4: " << r.step4_diagnostic << "\n";
  if (!r.failed_stage.empty()) {
    std::cout << "failed at " << r.failed_stage << ": " << r.error << "\n";
    return kFailed;
  }
  try {
    Characteristics c = canonical_characteristics(r, ctx);
    (void)c;
    std::cout << "characteristics cross-check: ok\n";
  } catch (const Error& e) {
    std::cout << "characteristics cross-check: " << e.what() << "\n";
    return kFailed;
  }
  std::cout << "form: " << (r.sscf ? "SSCF" : "SCF") << "\n";
  return kOk;
}

int cmd_canon(const Problem& prob, const std::string& stage, const std::string& out_dir, int samples) {
  Context ctx(prob.iv);
  PipelineOptions opt;
  opt.stop_after = stage;
  PipelineResult r = run_pipeline(prob.pair, prob.tag, ctx, opt);
  if (!r.failed_stage.empty()) {
    std::cerr << "failed at " << r.failed_stage << ": " << r.error << "\n";
    return kFailed;
  }
  const Stage& last = r.stages.back();
  Transform tot = r.total();
  json j;
  j["name"] = prob.name;
  j["stage"] = last.label;
  j["d"] = r.d;
  j["blocks"] = r.spec.sizes;
  j["ordering"] = to_string(r.spec.ordering);
  j["E"] = matrix_json(last.P.E);
  j["F"] = matrix_json(last.P.F);
  j["L"] = matrix_json(tot.L);
  j["K"] = matrix_json(tot.K);
  j["A"] = matrix_json(r.A);
  j["B"] = matrix_json(r.B);
  if (!r.omega.empty()) j["omega"] = matrix_json(r.omega);
  if (!r.step4_diagnostic.empty()) j["step4_diagnostic"] = r.step4_diagnostic;
  if (out_dir.empty()) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream(out_dir + "/canon.json") << j.dump(2) << "\n";
  std::vector<double> ts = uniform_points(prob.iv, samples);
  for (const auto& [name, m] : std::vector<std::pair<std::string, MatrixFn>>{
           {"E", last.P.E}, {"F", last.P.F}, {"L", tot.L}, {"K", tot.K}}) {
    std::ofstream csv(out_dir + "/" + name + ".csv");
    csv << "t";
    for (int i = 0; i < m.rows(); ++i)
      for (int k = 0; k < m.cols(); ++k) csv << "," << name << "_" << i << "_" << k;
    csv << "\n" << std::setprecision(17);
    for (double t : ts) {
      Eigen::MatrixXd v = m.eval(t);
      csv << t;
      for (int i = 0; i < v.rows(); ++i)
        for (int k = 0; k < v.cols(); ++k) csv << "," << v(i, k);
      csv << "\n";
    }
  }
  std::cout << "wrote " << out_dir << "/canon.json and E,F,L,K csv files\n";
  return kOk;
}

int cmd_projector(const Problem& prob, std::optional<double> at, int samples) {
  Context ctx(prob.iv);
  PipelineResult r = run_pipeline(prob.pair, prob.tag, ctx);
  if (!r.failed_stage.empty()) {
    std::cerr << "failed at " << r.failed_stage << ": " << r.error << "\n";
    return kFailed;
  }
  CanonicalObjects c = projector_from_prescf(r, ctx);
  std::vector<double> ts = at ? std::vector<double>{*at} : uniform_points(prob.iv, samples);
  std::cout << std::setprecision(12);
  if (at) std::cout << "Pi(" << *at << ") =\n" << c.Pi.eval(*at) << "\n";
  ProjectorReport rep = check_projector(r, c, ts);
  std::cout << "idempotency " << rep.idempotency << "\ntrace_dev " << rep.trace_dev << "\nrank " << rep.min_rank
            << ".." << rep.max_rank << "\nrange " << rep.range << "\nkernel " << rep.kernel << "\ncomplement_sigma "
            << rep.complement_sigma << "\nroute_dev " << rep.route_dev << "\n";
  bool ok = rep.ok(ctx.tol.check);
  std::cout << (ok ? "projector: ok" : "projector: FAILED") << "\n";
  return ok ? kOk : kFailed;
}

int cmd_solve(const Problem& prob, std::optional<double> t0, const std::string& u0s, const std::string& grid_spec,
              double rtol) {
  Context ctx(prob.iv);
  PipelineResult r = run_pipeline(prob.pair, prob.tag, ctx);
  if (!r.failed_stage.empty() && r.stage("step3") == nullptr) {
    std::cerr << "failed at " << r.failed_stage << ": " << r.error << "\n";
    return kFailed;
  }
  double start = t0 ? *t0 : prob.t0.value_or(prob.iv.mid());
  Eigen::VectorXd u0 = prob.u0;
  if (!u0s.empty()) {
    auto v = parse_list(u0s);
    u0 = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
  }
  if (u0.size() != r.d) throw InputError("u0 needs " + std::to_string(r.d) + " entries");
  std::vector<double> grid;
  if (grid_spec.empty()) {
    grid = uniform_points(prob.iv, 101);
  } else {
    auto g = parse_list(grid_spec);
    if (g.size() == 1) g = {prob.iv.t0, prob.iv.t1, g[0]};
    if (g.size() != 3 || g[2] < 2) throw InputError("--grid expects n or t0,t1,n");
    for (int i = 0; i < static_cast<int>(g[2]); ++i) grid.push_back(g[0] + (g[1] - g[0]) * i / (g[2] - 1));
  }
  std::vector<ScalarFn> q = prob.q.empty() ? std::vector<ScalarFn>(prob.pair.m(), ScalarFn(0.0)) : prob.q;
  IvpOptions opt;
  opt.rtol = rtol;
  Trajectory traj = solve_ivp(r, q, start, u0, grid, opt);
  std::cout << "t";
  for (int i = 0; i < prob.pair.m(); ++i) std::cout << ",x" << i + 1;
  std::cout << ",residual\n" << std::setprecision(15);
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    double t = traj.t[k];
    Eigen::VectorXd qt(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) qt(i) = q[i].eval(t);
    double res = (prob.pair.E.eval(t) * traj.xdot[k] + prob.pair.F.eval(t) * traj.x[k] - qt).cwiseAbs().maxCoeff();
    std::cout << t;
    for (int i = 0; i < traj.x[k].size(); ++i) std::cout << "," << traj.x[k](i);
    std::cout << "," << res << "\n";
  }
  std::cerr << "residual " << residual(prob.pair, traj, q) << " (" << traj.stage << ")\n";
  return kOk;
}

int cmd_reproduce(const std::string& name, const ParamMap& params, const std::string& json_path) {
  std::vector<std::string> names = name == "all" ? fixture_names() : std::vector<std::string>{name};
  bool ok = true;
  json report = json::array();
  for (const auto& n : names) {
    ReproduceReport rep = reproduce(n, params);
    json jr = {{"name", n}, {"params", rep.params}, {"pass", rep.all_pass()}, {"checks", json::array()}};
    for (const auto& c : rep.checks)
      jr["checks"].push_back({{"label", c.label},
                              {"deviation", std::isfinite(c.deviation) ? json(c.deviation) : json(nullptr)},
                              {"pass", c.pass},
                              {"note", c.note}});
    report.push_back(jr);
    std::cout << "== " << n;
    for (const auto& [k, v] : rep.params) std::cout << " " << k << "=" << v;
    std::cout << "\n";
    for (const auto& c : rep.checks) {
      std::cout << (c.pass ? "  PASS " : "  FAIL ") << std::left << std::setw(18) << c.label << std::scientific
                << std::setprecision(2) << c.deviation << std::defaultfloat;
      if (!c.note.empty()) std::cout << "  " << c.note;
      std::cout << "\n";
    }
    ok = ok && rep.all_pass();
  }
  if (!json_path.empty()) std::ofstream(json_path) << report.dump(2) << "\n";
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standard canonical forms of linear time-varying DAEs"};
  app.require_subcommand(1);
  std::string input, stage = "sscf", out_dir, u0s, grid, fixture = "all";
  std::vector<std::string> params;
  std::optional<double> at, t0;
  int samples = 20;
  double rtol = 1e-10;

  auto add_input = [&](CLI::App* c) {
    c->add_option("input", input, "problem JSON file or fixture:<name>")->required();
    c->add_option("-p,--param", params, "parameter override name=value");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "run the pipeline and report characteristics");
  add_input(analyze);
  CLI::App* canon = app.add_subcommand("canon", "transform to a canonical stage and dump matrices");
  add_input(canon);
  canon->add_option("--stage", stage, "prescf|step1|step2|scf|sscf")
      ->check(CLI::IsMember({"prescf", "step1", "step2", "scf", "sscf"}));
  canon->add_option("--out", out_dir, "directory for canon.json and CSV samples");
  canon->add_option("--samples", samples, "CSV sample count");
  CLI::App* proj = app.add_subcommand("projector", "canonical projector and its checks");
  add_input(proj);
  proj->add_option("--at", at, "print Pi at this time");
  proj->add_option("--samples", samples, "number of check samples");
  CLI::App* solve = app.add_subcommand("solve", "solve the initial value problem through the canonical form");
  add_input(solve);
  solve->add_option("--t0", t0, "initial time");
  solve->add_option("--u0", u0s, "comma separated u(t0)");
  solve->add_option("--grid", grid, "n or t0,t1,n output grid");
  solve->add_option("--rtol", rtol, "relative tolerance");
  CLI::App* repro = app.add_subcommand("reproduce", "compare the built-in examples with their displayed matrices");
  repro->add_option("name", fixture, "berger-ilchmann|hmm98|campbell-moore|all");
  repro->add_option("-p,--param", params, "parameter override name=value");
  std::string json_path;
  repro->add_option("--json", json_path, "write the per-check report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    ParamMap pm = parse_params(params);
    if (*repro) return cmd_reproduce(fixture, pm, json_path);
    Problem prob = load_input(input, pm);
    if (*analyze) return cmd_analyze(prob);
    if (*canon) return cmd_canon(prob, stage, out_dir, samples);
    if (*proj) return cmd_projector(prob, at, samples);
    if (*solve) return cmd_solve(prob, t0, u0s, grid, rtol);
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kOk;
}
