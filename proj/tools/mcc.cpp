// mcc: command-line harness for competing-cascade simulation and seed selection.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mcc/experiment.hpp"
#include "mcc/hardness.hpp"
#include "mcc/verification.hpp"

namespace {

using namespace mcc;

std::vector<NodeId> to_internal(const DirectedGraph& g, const std::vector<std::int64_t>& ids) {
  std::vector<NodeId> out;
  for (auto id : ids) out.push_back(internal_id(g, id));
  return out;
}

EvaluatorChoice parse_evaluator(const std::string& name) {
  if (name == "auto") return EvaluatorChoice::automatic;
  if (name == "step") return EvaluatorChoice::step_simulation;
  return EvaluatorChoice::fast_bfs;
}

std::string state_name(const CascadeSystem& sys, CascadeId c) {
  if (c == kNoCascade) return "none";
  if (c == kUnresolved) return "?";
  std::string name = c == sys.star() ? "P*" : std::string(to_string(sys.group(c))) + std::to_string(c);
  return name;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

struct InstanceOptions {
  std::string config;
  std::vector<std::int64_t> seeds;  // P* seeds, original ids
};

void add_instance_options(CLI::App* cmd, InstanceOptions& opt) {
  cmd->add_option("-c,--config", opt.config, "Experiment config (JSON) describing the instance")
      ->required();
  cmd->add_option("-s,--seeds", opt.seeds, "P* seed nodes (original ids)")->delimiter(',');
}

int run_simulate(const InstanceOptions& opt, std::uint64_t live_seed, bool all_edges, bool json) {
  const auto cfg = load_config(opt.config);
  const auto inst = build_instance(cfg);
  const auto star = to_internal(inst.graph, opt.seeds);
  const auto outcome = all_edges ? simulate(inst.graph, inst.system, inst.profile, star,
                                            LiveEdgeGraph::all(inst.graph))
                                 : simulate(inst.graph, inst.system, inst.profile, star, live_seed);
  if (json) {
    Json nodes = Json::array();
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
      const auto c = outcome.state[static_cast<std::size_t>(v)];
      if (c == kNoCascade) continue;
      nodes.push_back({{"node", inst.graph.original_id(v)},
                       {"cascade", state_name(inst.system, c)},
                       {"step", outcome.activation_time[static_cast<std::size_t>(v)]}});
    }
    Json out = {{"m_active", outcome.m_active_count},
                {"not_m_active", outcome.not_m_active_count},
                {"activated", nodes}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "node,cascade,step\n";
    for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
      const auto c = outcome.state[static_cast<std::size_t>(v)];
      if (c == kNoCascade) continue;
      std::cout << inst.graph.original_id(v) << ',' << state_name(inst.system, c) << ','
                << outcome.activation_time[static_cast<std::size_t>(v)] << '\n';
    }
    std::cerr << "M-active " << outcome.m_active_count << ", not M-active " << outcome.not_m_active_count << '\n';
  }
  return 0;
}

int run_estimate(const InstanceOptions& opt, std::optional<std::int64_t> replications,
                 std::optional<std::uint64_t> base_seed, const std::string& evaluator, bool no_crn, bool exact) {
  const auto cfg = load_config(opt.config);
  const auto inst = build_instance(cfg);
  const auto star = to_internal(inst.graph, opt.seeds);
  Json out;
  if (exact) {
    const auto v = exact_f(inst.graph, inst.system, inst.profile, star, parse_evaluator(evaluator));
    out = {{"f_m", v.f_m}, {"f_notm", v.f_not_m}, {"method", "exact"}};
  } else {
    EstimatorConfig ec;
    ec.replications = replications.value_or(cfg.r_eval);
    ec.base_seed = base_seed.value_or(stream_seed(cfg.base_seed, Stream::evaluate));
    ec.common_random_numbers = !no_crn;
    ec.evaluator = parse_evaluator(evaluator);
    const auto est = estimate(inst.graph, inst.system, inst.profile, star, ec);
    out = {{"f_m_mean", est.mean_m_active},
           {"f_notm_mean", est.mean_not_m_active},
           {"stderr", est.std_error},
           {"replications", est.replications},
           {"base_seed", ec.base_seed}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_solve(const std::string& config, const std::string& method, int budget) {
  auto cfg = load_config(config);
  cfg.methods = {method};
  cfg.budgets = {budget};
  validate(cfg);
  const auto report = run_experiment(cfg);
  Json out = report_to_json(report).at("rows").at(0);
  out["node_count"] = report.metadata.at("node_count");
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_experiment_cmd(const std::string& config, const std::string& csv, const std::string& json) {
  auto cfg = load_config(config);
  if (!csv.empty()) cfg.csv_path = csv;
  if (!json.empty()) cfg.json_path = json;
  const auto report = run_experiment(cfg);
  if (cfg.csv_path.empty() || cfg.csv_path == "-") {
    write_csv(report, std::cout);
  } else {
    emit_report(report, ReportFormat::csv, cfg.csv_path);
  }
  if (!cfg.json_path.empty()) emit_report(report, ReportFormat::json, cfg.json_path);
  return 0;
}

std::string reduced_edge_list(const ReducedInstance& r) {
  std::ostringstream os;
  os << "# source target (all probabilities 1)\n";
  for (const auto& e : r.graph.edges()) os << e.source << ' ' << e.target << '\n';
  return os.str();
}

int run_reduce(const std::string& input, std::vector<int> selection, bool all, const std::string& graph_out) {
  std::ifstream in(input);
  if (!in) throw IoError("cannot open '" + input + "'");
  const auto inst = parse_pspc(in);
  const auto reduced = build_reduction(inst);
  if (!graph_out.empty()) write_text(graph_out, reduced_edge_list(reduced));

  Json out;
  out["nodes"] = reduced.graph.node_count();
  out["edges"] = reduced.graph.edge_count();
  out["budget"] = reduced.budget;
  Json roles = Json::array();
  for (NodeId v = 0; v < reduced.graph.node_count(); ++v) {
    const auto& role = reduced.roles[static_cast<std::size_t>(v)];
    roles.push_back({{"node", v}, {"role", to_string(role.role)}, {"index", role.index}});
  }
  out["roles"] = roles;

  std::vector<std::vector<int>> selections;
  const int m = static_cast<int>(inst.phi.size());
  if (all) {
    if (m > 20) throw CapacityError("--all supports at most 20 sets");
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
      std::vector<int> s;
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1U) s.push_back(i);
      }
      selections.push_back(std::move(s));
    }
  } else {
    for (int& s : selection) --s;  // 1-based on the command line
    selections.push_back(selection);
  }
  bool ok = true;
  Json checks = Json::array();
  for (const auto& s : selections) {
    const auto id = verify_reduction_identity(inst, s);
    std::vector<int> shown;
    for (int i : s) shown.push_back(i + 1);
    checks.push_back({{"selection", shown}, {"f_m", id.lhs}, {"three_plus_cost", id.rhs}, {"ok", id.ok}});
    ok = ok && id.ok;
  }
  out["checks"] = checks;
  std::cout << out.dump(2) << '\n';
  return ok ? 0 : 1;
}

int run_verify(const std::string& suite, bool quick, std::uint64_t seed) {
  using namespace mcc::verify;
  const int scale = quick ? 10 : 1;
  std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites{
      {"trace", [] { return example_trace(); }},
      {"oracle", [&] { return oracle_equivalence(200 / scale, seed); }},
      {"submodular", [&] { return monotone_submodular(200 / scale, seed + 1); }},
      {"bounds", [&] { return sandwich_bounds(200 / scale, seed + 2); }},
      {"witness", [] { return non_submodular_witness(); }},
      {"reduction", [&] { return quick ? reduction_identity(2, 1, 2) : reduction_identity(); }},
      {"greedy", [&] { return greedy_guarantee(100 / scale, seed + 3); }},
      {"convergence", [&] { return estimator_convergence(100 / scale, 10000 / scale, seed + 4); }},
  };
  bool all_ok = true;
  bool matched = false;
  for (const auto& [name, run] : suites) {
    if (suite != "all" && suite != name) continue;
    matched = true;
    const auto r = run();
    all_ok = all_ok && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << name << ": " << r.checks << " checks, " << r.violations
              << " violations, " << r.seconds << " s";
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << '\n';
  }
  if (!matched) throw ValidationError("unknown suite '" + suite + "'");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Competing-cascade simulation, estimation and seed selection"};
  app.require_subcommand(1);

  InstanceOptions sim_opt;
  std::uint64_t live_seed = 1;
  bool all_edges = false;
  bool sim_json = false;
  auto* sim = app.add_subcommand("simulate", "Run one diffusion on a sampled live-edge graph and print the trace");
  add_instance_options(sim, sim_opt);
  sim->add_option("--live-seed", live_seed, "Seed of the sampled live-edge graph");
  sim->add_flag("--all-edges", all_edges, "Keep every edge instead of sampling");
  sim->add_flag("--json", sim_json, "Print JSON instead of CSV");

  InstanceOptions est_opt;
  std::optional<std::int64_t> replications;
  std::optional<std::uint64_t> base_seed;
  std::string evaluator = "auto";
  bool no_crn = false;
  bool exact = false;
  auto* est = app.add_subcommand("estimate", "Estimate f_M and f_notM for a P* seed set");
  add_instance_options(est, est_opt);
  est->add_option("-r,--replications", replications, "Monte Carlo replications (default: config r_eval)");
  est->add_option("--base-seed", base_seed, "Base seed of the replication stream");
  est->add_option("--evaluator", evaluator, "auto, step or fast")
      ->check(CLI::IsMember({"auto", "step", "fast"}));
  est->add_flag("--no-crn", no_crn, "Mix the seed set into each replication key");
  est->add_flag("--exact", exact, "Enumerate live-edge graphs instead of sampling");

  std::string solve_config;
  std::string method = "sandwich";
  int budget = 1;
  auto* solve = app.add_subcommand("solve", "Select P* seeds with one method at one budget");
  solve->add_option("-c,--config", solve_config, "Experiment config (JSON)")->required();
  solve->add_option("-m,--method", method, "Selection method")->check(CLI::IsMember(known_methods()));
  solve->add_option("-k,--budget", budget, "Seed budget")->check(CLI::PositiveNumber);

  std::string exp_config, csv_out, json_out;
  auto* exp = app.add_subcommand("experiment", "Run the full method x budget sweep");
  exp->add_option("-c,--config", exp_config, "Experiment config (JSON)")->required();
  exp->add_option("--csv", csv_out, "CSV output path (overrides config; '-' for stdout)");
  exp->add_option("--json", json_out, "JSON output path (overrides config)");

  std::string pspc_input, graph_out;
  std::vector<int> selection;
  bool all_selections = false;
  auto* reduce = app.add_subcommand("reduce", "Build the Min-M instance of a set-cover instance and check the identity");
  reduce->add_option("input", pspc_input, "Set-cover instance file")->required();
  reduce->add_option("--select", selection, "Chosen sets, 1-based")->delimiter(',');
  reduce->add_flag("--all", all_selections, "Check every selection");
  reduce->add_option("--graph-out", graph_out, "Write the reduced graph as an edge list");

  std::string suite = "all";
  bool quick = false;
  std::uint64_t verify_seed = 20240601;
  auto* ver = app.add_subcommand("verify", "Run the property suites");
  ver->add_option("--suite", suite, "all, trace, oracle, submodular, bounds, witness, reduction, greedy, convergence");
  ver->add_flag("--quick", quick, "Smaller instance counts");
  ver->add_option("--seed", verify_seed, "Seed of the random instance pools");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) return run_simulate(sim_opt, live_seed, all_edges, sim_json);
    if (*est) return run_estimate(est_opt, replications, base_seed, evaluator, no_crn, exact);
    if (*solve) return run_solve(solve_config, method, budget);
    if (*exp) return run_experiment_cmd(exp_config, csv_out, json_out);
    if (*reduce) return run_reduce(pspc_input, selection, all_selections, graph_out);
    if (*ver) return run_verify(suite, quick, verify_seed);
  } catch (const mcc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
