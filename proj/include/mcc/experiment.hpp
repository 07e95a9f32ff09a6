#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcc/cascade.hpp"
#include "mcc/diffusion.hpp"
#include "mcc/error.hpp"
#include "mcc/estimation.hpp"
#include "mcc/graph.hpp"
#include "mcc/objective.hpp"
#include "mcc/rng.hpp"
#include "mcc/solvers.hpp"

namespace mcc {

using Json = nlohmann::json;

inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"sandwich",    "greedy_f",  "greedy_upper", "greedy_lower",
                                                "high_weight", "proximity", "random"};
  return methods;
}

struct GraphSource {
  std::string path;  // edge list; empty when a generator is used
  bool directed = true;
  std::string generator;  // erdos_renyi | preferential_attachment
  NodeId nodes = 0;
  std::int64_t edges = 0;   // erdos_renyi
  int out_degree = 3;       // preferential_attachment
  double reciprocal = 0.0;  // preferential_attachment
  std::uint64_t seed = 1;
};

struct CascadeLayout {
  int misinformation = 1;
  int positive = 1;
  int seed_size = 20;
  std::string seeding = "influence";  // influence | random
  std::int64_t influence_replications = 1000;
  // When non-empty, these seed sets (original ids) replace the seeding rule.
  std::vector<Cascade> explicit_sets;
};

struct PrioritySpec {
  std::string mode = "random";  // random | homogeneous | m_dominant | p_dominant
  std::uint64_t seed = 1;
  std::vector<Rank> ranks;  // global ranks for the non-random modes; default 1..C
};

enum class CandidateRule { all, exclude_seeds, explicit_list };

struct ExperimentConfig {
  GraphSource graph;
  ProbabilityMode probability = probability::WeightedCascade{};
  CascadeLayout cascades;
  PrioritySpec priority;
  std::vector<int> budgets{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CandidateRule candidate_rule = CandidateRule::exclude_seeds;
  std::vector<std::int64_t> candidates;  // original node ids, for explicit_list
  std::int64_t r_opt = 1000;
  std::int64_t r_eval = 10000;
  std::uint64_t base_seed = 1;
  int random_trials = 1000;
  std::optional<std::int64_t> random_replications;  // default r_eval / 10
  std::vector<std::string> methods = known_methods();
  std::string csv_path;
  std::string json_path;

  std::int64_t random_eval_replications() const {
    return random_replications.value_or(std::max<std::int64_t>(1, r_eval / 10));
  }
};

// ---------------------------------------------------------------------------
// Config (JSON)

namespace detail {

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline const char* rule_name(CandidateRule r) {
  switch (r) {
    case CandidateRule::all: return "all";
    case CandidateRule::exclude_seeds: return "exclude_seeds";
    case CandidateRule::explicit_list: return "explicit";
  }
  return "?";
}

}  // namespace detail

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.graph.path.empty() && cfg.graph.generator.empty()) {
    throw ValidationError("config: graph needs a path or a generator");
  }
  if (!cfg.graph.generator.empty() && cfg.graph.generator != "erdos_renyi" &&
      cfg.graph.generator != "preferential_attachment") {
    throw ValidationError("config: unknown generator '" + cfg.graph.generator + "'");
  }
  if (cfg.budgets.empty()) throw ValidationError("config: budgets must not be empty");
  for (std::size_t i = 0; i < cfg.budgets.size(); ++i) {
    if (cfg.budgets[i] < 1 || (i > 0 && cfg.budgets[i] <= cfg.budgets[i - 1])) {
      throw ValidationError("config: budgets must be positive and strictly increasing");
    }
  }
  if (cfg.cascades.seed_size < 1) throw ValidationError("config: seed_size must be >= 1");
  if (cfg.cascades.misinformation < 0 || cfg.cascades.positive < 0) {
    throw ValidationError("config: cascade counts must be >= 0");
  }
  if (cfg.cascades.seeding != "influence" && cfg.cascades.seeding != "random") {
    throw ValidationError("config: seeding must be 'influence' or 'random'");
  }
  if (cfg.cascades.influence_replications < 1) {
    throw ValidationError("config: influence_replications must be >= 1");
  }
  const std::vector<std::string> modes{"random", "homogeneous", "m_dominant", "p_dominant"};
  if (std::find(modes.begin(), modes.end(), cfg.priority.mode) == modes.end()) {
    throw ValidationError("config: unknown priority mode '" + cfg.priority.mode + "'");
  }
  if (cfg.r_opt < 1 || cfg.r_eval < 1 || cfg.random_eval_replications() < 1) {
    throw ValidationError("config: replication counts must be >= 1");
  }
  if (cfg.random_trials < 1) throw ValidationError("config: random trials must be >= 1");
  if (cfg.methods.empty()) throw ValidationError("config: no methods selected");
  for (const auto& m : cfg.methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end()) {
      throw ValidationError("config: unknown method '" + m + "'");
    }
  }
}

inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  try {
    const auto& g = j.at("graph");
    cfg.graph.path = detail::get_or<std::string>(g, "path", "");
    cfg.graph.directed = detail::get_or<bool>(g, "directed", true);
    cfg.graph.generator = detail::get_or<std::string>(g, "generator", "");
    cfg.graph.nodes = detail::get_or<NodeId>(g, "nodes", 0);
    cfg.graph.edges = detail::get_or<std::int64_t>(g, "edges", 0);
    cfg.graph.out_degree = detail::get_or<int>(g, "out_degree", 3);
    cfg.graph.reciprocal = detail::get_or<double>(g, "reciprocal", 0.0);
    cfg.graph.seed = detail::get_or<std::uint64_t>(g, "seed", 1);

    if (j.contains("probability")) {
      const auto& p = j.at("probability");
      const auto mode = p.at("mode").get<std::string>();
      if (mode == "uniform") {
        cfg.probability = probability::Uniform{detail::get_or<double>(p, "p", 0.1)};
      } else if (mode == "weighted_cascade") {
        cfg.probability = probability::WeightedCascade{};
      } else if (mode == "activity") {
        cfg.probability = probability::ActivityBased{detail::get_or<double>(p, "p_max", 0.2),
                                                     detail::get_or<double>(p, "p_base", 0.4)};
      } else if (mode == "file") {
        cfg.probability = probability::FromFile{};
      } else {
        throw ValidationError("config: unknown probability mode '" + mode + "'");
      }
    }

    if (j.contains("cascades")) {
      const auto& c = j.at("cascades");
      cfg.cascades.misinformation = detail::get_or<int>(c, "misinformation", 1);
      cfg.cascades.positive = detail::get_or<int>(c, "positive", 1);
      cfg.cascades.seed_size = detail::get_or<int>(c, "seed_size", 20);
      cfg.cascades.seeding = detail::get_or<std::string>(c, "seeding", "influence");
      cfg.cascades.influence_replications = detail::get_or<std::int64_t>(c, "influence_replications", 1000);
      if (c.contains("explicit")) {
        for (const auto& e : c.at("explicit")) {
          const auto group = e.at("group").get<std::string>();
          if (group != "M" && group != "P") throw ValidationError("config: cascade group must be 'M' or 'P'");
          Cascade cascade{group == "M" ? Group::misinformation : Group::positive, {}};
          for (auto id : e.at("seeds").get<std::vector<std::int64_t>>()) {
            if (id < 0 || id > std::numeric_limits<NodeId>::max()) {
              throw ValidationError("config: seed id " + std::to_string(id) + " out of range");
            }
            cascade.seeds.push_back(static_cast<NodeId>(id));
          }
          cfg.cascades.explicit_sets.push_back(std::move(cascade));
        }
      }
    }
    if (j.contains("priority")) {
      const auto& p = j.at("priority");
      cfg.priority.mode = detail::get_or<std::string>(p, "mode", "random");
      cfg.priority.seed = detail::get_or<std::uint64_t>(p, "seed", 1);
      cfg.priority.ranks = detail::get_or<std::vector<Rank>>(p, "ranks", {});
    }
    if (j.contains("budgets")) cfg.budgets = j.at("budgets").get<std::vector<int>>();
    if (j.contains("candidates")) {
      const auto& c = j.at("candidates");
      const auto rule = detail::get_or<std::string>(c, "rule", "exclude_seeds");
      if (rule == "all") {
        cfg.candidate_rule = CandidateRule::all;
      } else if (rule == "exclude_seeds") {
        cfg.candidate_rule = CandidateRule::exclude_seeds;
      } else if (rule == "explicit") {
        cfg.candidate_rule = CandidateRule::explicit_list;
        cfg.candidates = c.at("nodes").get<std::vector<std::int64_t>>();
      } else {
        throw ValidationError("config: unknown candidate rule '" + rule + "'");
      }
    }
    if (j.contains("estimator")) {
      const auto& e = j.at("estimator");
      cfg.r_opt = detail::get_or<std::int64_t>(e, "r_opt", cfg.r_opt);
      cfg.r_eval = detail::get_or<std::int64_t>(e, "r_eval", cfg.r_eval);
      cfg.base_seed = detail::get_or<std::uint64_t>(e, "base_seed", cfg.base_seed);
    }
    if (j.contains("random_baseline")) {
      const auto& r = j.at("random_baseline");
      cfg.random_trials = detail::get_or<int>(r, "trials", cfg.random_trials);
      if (r.contains("replications") && !r.at("replications").is_null()) {
        cfg.random_replications = r.at("replications").get<std::int64_t>();
      }
    }
    if (j.contains("methods")) cfg.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("output")) {
      cfg.csv_path = detail::get_or<std::string>(j.at("output"), "csv", "");
      cfg.json_path = detail::get_or<std::string>(j.at("output"), "json", "");
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  Json j;
  j["graph"] = {{"path", cfg.graph.path},           {"directed", cfg.graph.directed},
                {"generator", cfg.graph.generator}, {"nodes", cfg.graph.nodes},
                {"edges", cfg.graph.edges},         {"out_degree", cfg.graph.out_degree},
                {"reciprocal", cfg.graph.reciprocal}, {"seed", cfg.graph.seed}};
  Json p;
  std::visit(
      [&](const auto& mode) {
        using M = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<M, probability::Uniform>) {
          p = {{"mode", "uniform"}, {"p", mode.p}};
        } else if constexpr (std::is_same_v<M, probability::WeightedCascade>) {
          p = {{"mode", "weighted_cascade"}};
        } else if constexpr (std::is_same_v<M, probability::ActivityBased>) {
          p = {{"mode", "activity"}, {"p_max", mode.p_max}, {"p_base", mode.p_base}};
        } else {
          p = {{"mode", "file"}};
        }
      },
      cfg.probability);
  j["probability"] = p;
  j["cascades"] = {{"misinformation", cfg.cascades.misinformation},
                   {"positive", cfg.cascades.positive},
                   {"seed_size", cfg.cascades.seed_size},
                   {"seeding", cfg.cascades.seeding},
                   {"influence_replications", cfg.cascades.influence_replications}};
  if (!cfg.cascades.explicit_sets.empty()) {
    Json sets = Json::array();
    for (const auto& c : cfg.cascades.explicit_sets) {
      sets.push_back({{"group", to_string(c.group)}, {"seeds", c.seeds}});
    }
    j["cascades"]["explicit"] = sets;
  }
  j["priority"] = {{"mode", cfg.priority.mode}, {"seed", cfg.priority.seed}, {"ranks", cfg.priority.ranks}};
  j["budgets"] = cfg.budgets;
  j["candidates"] = {{"rule", detail::rule_name(cfg.candidate_rule)}, {"nodes", cfg.candidates}};
  j["estimator"] = {{"r_opt", cfg.r_opt}, {"r_eval", cfg.r_eval}, {"base_seed", cfg.base_seed}};
  j["random_baseline"] = {{"trials", cfg.random_trials}, {"replications", cfg.random_eval_replications()}};
  j["methods"] = cfg.methods;
  j["output"] = {{"csv", cfg.csv_path}, {"json", cfg.json_path}};
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  auto cfg = config_from_json(j);
  // Relative graph paths are relative to the config file.
  if (!cfg.graph.path.empty()) {
    const std::filesystem::path graph_path(cfg.graph.path);
    if (graph_path.is_relative()) {
      cfg.graph.path = (std::filesystem::path(path).parent_path() / graph_path).lexically_normal().string();
    }
  }
  return cfg;
}

// FNV-1a over the canonical config text.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Instance assembly

// Seeds derived from the base seed, one per purpose.
enum class Stream : std::uint64_t { optimize = 1, evaluate = 2, random_baseline = 3, influence = 4 };

inline std::uint64_t stream_seed(std::uint64_t base_seed, Stream s) {
  return hash_combine(base_seed, static_cast<std::uint64_t>(s));
}

inline DirectedGraph build_graph(const ExperimentConfig& cfg) {
  DirectedGraph g;
  if (!cfg.graph.path.empty()) {
    const auto third = std::holds_alternative<probability::FromFile>(cfg.probability) ? ThirdColumn::probability
                                                                                      : ThirdColumn::activity;
    g = load_edge_list(cfg.graph.path, cfg.graph.directed, third);
  } else if (cfg.graph.generator == "erdos_renyi") {
    g = erdos_renyi(cfg.graph.nodes, cfg.graph.edges, cfg.graph.seed);
  } else {
    g = preferential_attachment(cfg.graph.nodes, cfg.graph.out_degree, cfg.graph.reciprocal, cfg.graph.seed);
  }
  return assign_probabilities(g, cfg.probability);
}

// Mean number of nodes reached from each single node, one cascade alone.
inline std::vector<double> single_node_influence(const DirectedGraph& g, std::int64_t replications,
                                                 std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(g.node_count());
  std::vector<std::int64_t> reach(n, 0);
  std::vector<std::uint32_t> mark(n, 0);
  std::uint32_t epoch = 0;
  std::vector<NodeId> queue;
  for (std::int64_t r = 0; r < replications; ++r) {
    const SampledEdges live(g, substream_key(seed, static_cast<std::uint64_t>(r)));
    for (NodeId s = 0; s < g.node_count(); ++s) {
      ++epoch;
      queue.assign(1, s);
      mark[static_cast<std::size_t>(s)] = epoch;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        auto [first, last] = g.out_range(queue[head]);
        for (EdgeId e = first; e < last; ++e) {
          const NodeId t = g.target(e);
          if (mark[static_cast<std::size_t>(t)] == epoch || !live.kept(e)) continue;
          mark[static_cast<std::size_t>(t)] = epoch;
          queue.push_back(t);
        }
      }
      reach[static_cast<std::size_t>(s)] += static_cast<std::int64_t>(queue.size());
    }
  }
  std::vector<double> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = static_cast<double>(reach[v]) / static_cast<double>(replications);
  return out;
}

// Builds the existing cascades (misinformation first, then positive) plus an
// unseeded P* as the last cascade. Seed sets are disjoint.
inline CascadeSystem seed_existing_cascades(const DirectedGraph& g, const CascadeLayout& layout,
                                            std::uint64_t seed) {
  const int existing = layout.misinformation + layout.positive;
  const std::int64_t needed = static_cast<std::int64_t>(existing) * layout.seed_size;
  if (layout.seed_size < 1) throw ValidationError("seed size must be >= 1");
  if (needed > g.node_count()) {
    throw ValidationError("not enough nodes for disjoint seed sets: need " + std::to_string(needed) + ", have " +
                          std::to_string(g.node_count()));
  }
  std::vector<NodeId> order(static_cast<std::size_t>(g.node_count()));
  std::iota(order.begin(), order.end(), 0);
  if (layout.seeding == "influence") {
    const auto influence = single_node_influence(g, layout.influence_replications, seed);
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return influence[static_cast<std::size_t>(a)] > influence[static_cast<std::size_t>(b)];
    });
  } else {
    SplitMix64 rng(seed);
    shuffle(std::span<NodeId>(order), rng);
  }
  std::vector<Cascade> cascades;
  std::size_t next = 0;
  for (int i = 0; i < existing; ++i) {
    Cascade c{i < layout.misinformation ? Group::misinformation : Group::positive, {}};
    for (int j = 0; j < layout.seed_size; ++j) c.seeds.push_back(order[next++]);
    cascades.push_back(std::move(c));
  }
  cascades.push_back(Cascade{Group::positive, {}});
  return CascadeSystem(std::move(cascades), static_cast<CascadeId>(existing), g.node_count());
}

inline PriorityProfile build_priority(const PrioritySpec& spec, const CascadeSystem& system, NodeId n) {
  std::vector<Rank> ranks = spec.ranks;
  if (ranks.empty()) {
    ranks.resize(static_cast<std::size_t>(system.size()));
    std::iota(ranks.begin(), ranks.end(), 1);
  }
  if (spec.mode == "random") return make_priority_profile(priority::Random{spec.seed}, system, n);
  if (spec.mode == "homogeneous") return make_priority_profile(priority::Homogeneous{ranks}, system, n);
  if (spec.mode == "m_dominant") return make_priority_profile(priority::MDominant{ranks}, system, n);
  if (spec.mode == "p_dominant") return make_priority_profile(priority::PDominant{ranks}, system, n);
  throw ValidationError("unknown priority mode '" + spec.mode + "'");
}

// Maps original node ids to internal ids.
inline NodeId internal_id(const DirectedGraph& g, std::int64_t original) {
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.original_id(v) == original) return v;
  }
  throw ValidationError("node " + std::to_string(original) + " not in graph");
}

// Existing cascades given by original ids, plus an unseeded P* last.
inline CascadeSystem explicit_cascades(const DirectedGraph& g, const std::vector<Cascade>& sets) {
  std::vector<Cascade> cascades;
  for (const auto& c : sets) {
    Cascade mapped{c.group, {}};
    for (NodeId id : c.seeds) mapped.seeds.push_back(internal_id(g, id));
    cascades.push_back(std::move(mapped));
  }
  cascades.push_back(Cascade{Group::positive, {}});
  const auto star = static_cast<CascadeId>(cascades.size() - 1);
  return CascadeSystem(std::move(cascades), star, g.node_count());
}

inline std::vector<NodeId> build_candidates(const ExperimentConfig& cfg, const DirectedGraph& g,
                                            const CascadeSystem& system) {
  std::vector<NodeId> out;
  switch (cfg.candidate_rule) {
    case CandidateRule::all:
      for (NodeId v = 0; v < g.node_count(); ++v) out.push_back(v);
      break;
    case CandidateRule::exclude_seeds: {
      const auto taken = system.existing_seeds();
      for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!std::binary_search(taken.begin(), taken.end(), v)) out.push_back(v);
      }
      break;
    }
    case CandidateRule::explicit_list: {
      std::map<std::int64_t, NodeId> index;
      for (NodeId v = 0; v < g.node_count(); ++v) index.emplace(g.original_id(v), v);
      for (auto id : cfg.candidates) {
        auto it = index.find(id);
        if (it == index.end()) throw ValidationError("candidate node " + std::to_string(id) + " not in graph");
        out.push_back(it->second);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Report

struct ReportRow {
  std::string method;
  int budget = 0;
  double f_m_mean = 0.0;
  double f_m_stderr = 0.0;
  double f_notm_mean = 0.0;
  double f_notm_stderr = 0.0;
  std::optional<double> bound_ratio;
  double wall_ms = 0.0;
  std::uint64_t rng_seed = 0;
  std::vector<std::int64_t> seeds;  // original ids

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  Json metadata = Json::object();

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"method",        "budget",        "f_m_mean",
                                             "f_m_stderr",    "f_notm_mean",   "f_notm_stderr",
                                             "bound_ratio",   "wall_ms",       "rng_seed"};
  return cols;
}

namespace detail {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline void write_csv(const ExperimentReport& report, std::ostream& out) {
  for (std::size_t i = 0; i < csv_columns().size(); ++i) out << (i ? "," : "") << csv_columns()[i];
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.method << ',' << r.budget << ',' << detail::format_double(r.f_m_mean) << ','
        << detail::format_double(r.f_m_stderr) << ',' << detail::format_double(r.f_notm_mean) << ','
        << detail::format_double(r.f_notm_stderr) << ','
        << (r.bound_ratio ? detail::format_double(*r.bound_ratio) : std::string()) << ','
        << detail::format_double(r.wall_ms) << ',' << r.rng_seed << '\n';
  }
}

inline Json report_to_json(const ExperimentReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"method", r.method},
                    {"budget", r.budget},
                    {"f_m_mean", r.f_m_mean},
                    {"f_m_stderr", r.f_m_stderr},
                    {"f_notm_mean", r.f_notm_mean},
                    {"f_notm_stderr", r.f_notm_stderr},
                    {"bound_ratio", r.bound_ratio ? Json(*r.bound_ratio) : Json(nullptr)},
                    {"wall_ms", r.wall_ms},
                    {"rng_seed", r.rng_seed},
                    {"seeds", r.seeds}});
  }
  return {{"metadata", report.metadata}, {"rows", rows}};
}

inline ExperimentReport report_from_json(const Json& j) {
  ExperimentReport report;
  try {
    report.metadata = j.at("metadata");
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.method = r.at("method").get<std::string>();
      row.budget = r.at("budget").get<int>();
      row.f_m_mean = r.at("f_m_mean").get<double>();
      row.f_m_stderr = r.at("f_m_stderr").get<double>();
      row.f_notm_mean = r.at("f_notm_mean").get<double>();
      row.f_notm_stderr = r.at("f_notm_stderr").get<double>();
      if (!r.at("bound_ratio").is_null()) row.bound_ratio = r.at("bound_ratio").get<double>();
      row.wall_ms = r.at("wall_ms").get<double>();
      row.rng_seed = r.at("rng_seed").get<std::uint64_t>();
      row.seeds = detail::get_or<std::vector<std::int64_t>>(r, "seeds", {});
      report.rows.push_back(std::move(row));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return report;
}

enum class ReportFormat { csv, json };

inline void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report '" + path + "'");
  if (format == ReportFormat::csv) {
    write_csv(report, out);
  } else {
    out << report_to_json(report).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing report '" + path + "'");
}

// ---------------------------------------------------------------------------
// Experiment

namespace detail {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::vector<std::int64_t> original_ids(const DirectedGraph& g, std::span<const NodeId> nodes) {
  std::vector<std::int64_t> out;
  for (NodeId v : nodes) out.push_back(g.original_id(v));
  return out;
}

}  // namespace detail

struct ExperimentInstance {
  DirectedGraph graph;
  CascadeSystem system;
  PriorityProfile profile;
  std::vector<NodeId> candidates;
};

inline ExperimentInstance build_instance(const ExperimentConfig& cfg) {
  ExperimentInstance inst;
  inst.graph = build_graph(cfg);
  if (cfg.cascades.explicit_sets.empty()) {
    inst.system = seed_existing_cascades(inst.graph, cfg.cascades, stream_seed(cfg.base_seed, Stream::influence));
  } else {
    inst.system = explicit_cascades(inst.graph, cfg.cascades.explicit_sets);
  }
  inst.profile = build_priority(cfg.priority, inst.system, inst.graph.node_count());
  inst.candidates = build_candidates(cfg, inst.graph, inst.system);
  return inst;
}

// Runs every selected method at every budget. Greedy-based methods run once
// at the largest budget and are cut back per budget; wall_ms of such rows
// includes the whole shared run plus that row's evaluation.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto inst = build_instance(cfg);
  const auto& g = inst.graph;
  const auto& sys = inst.system;
  const auto upper_profile = induce_upper_priority(inst.profile, sys);
  const auto lower_profile = induce_lower_priority(inst.profile, sys);
  const auto opt_seed = stream_seed(cfg.base_seed, Stream::optimize);
  const auto eval_seed = stream_seed(cfg.base_seed, Stream::evaluate);
  const auto random_seed = stream_seed(cfg.base_seed, Stream::random_baseline);
  const int k_max = cfg.budgets.back();

  auto wants = [&](const std::string& m) {
    return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
  };

  MonteCarloObjective f_opt(g, sys, inst.profile, cfg.r_opt, opt_seed);
  MonteCarloObjective eval(g, sys, inst.profile, cfg.r_eval, eval_seed);

  struct Shared {
    std::optional<SolveResult> run;
    double ms = 0.0;
  };
  Shared plain, upper, lower;
  std::optional<MonteCarloObjective> f_upper, f_lower;
  if (wants("sandwich") || wants("greedy_f")) {
    detail::Stopwatch sw;
    plain.run = greedy(f_opt, inst.candidates, k_max);
    plain.ms = sw.ms();
  }
  if (wants("sandwich") || wants("greedy_upper")) {
    detail::Stopwatch sw;
    f_upper.emplace(g, sys, upper_profile, cfg.r_opt, opt_seed);
    upper.run = greedy(*f_upper, inst.candidates, k_max);
    upper.ms = sw.ms();
  }
  if (wants("sandwich") || wants("greedy_lower")) {
    detail::Stopwatch sw;
    f_lower.emplace(g, sys, lower_profile, cfg.r_opt, opt_seed);
    lower.run = greedy(*f_lower, inst.candidates, k_max);
    lower.ms = sw.ms();
  }

  ExperimentReport report;
  Json sandwich_meta = Json::array();
  auto add_row = [&](const std::string& method, int k, std::span<const NodeId> seeds, double select_ms,
                     std::optional<double> ratio) {
    detail::Stopwatch sw;
    const auto est = eval.estimate(seeds);
    ReportRow row;
    row.method = method;
    row.budget = k;
    row.f_m_mean = est.mean_m_active;
    row.f_m_stderr = est.std_error;
    row.f_notm_mean = est.mean_not_m_active;
    row.f_notm_stderr = est.std_error;
    row.bound_ratio = ratio;
    row.rng_seed = eval_seed;
    row.seeds = detail::original_ids(g, seeds);
    row.wall_ms = select_ms + sw.ms();
    report.rows.push_back(std::move(row));
  };

  for (const auto& method : known_methods()) {
    if (!wants(method)) continue;
    for (int k : cfg.budgets) {
      if (method == "sandwich") {
        detail::Stopwatch sw;
        const SandwichRuns runs{best_prefix(*upper.run, k), best_prefix(*lower.run, k), best_prefix(*plain.run, k)};
        const auto choice = sandwich_select(f_opt, runs);
        const double ms = plain.ms + upper.ms + lower.ms + sw.ms();
        add_row(method, k, choice.result.seeds, ms, choice.result.bound_ratio);
        sandwich_meta.push_back({{"budget", k},
                                 {"pick", to_string(choice.pick)},
                                 {"f_opt", choice.result.objective_value.value_or(0.0)},
                                 {"f_of_upper", choice.f_of_upper},
                                 {"f_upper_of_upper", runs.upper.objective_value.value_or(0.0)},
                                 {"f_of_lower", choice.f_of_lower}});
      } else if (method == "greedy_f") {
        add_row(method, k, best_prefix(*plain.run, k).seeds, plain.ms, std::nullopt);
      } else if (method == "greedy_upper") {
        add_row(method, k, best_prefix(*upper.run, k).seeds, upper.ms, std::nullopt);
      } else if (method == "greedy_lower") {
        add_row(method, k, best_prefix(*lower.run, k).seeds, lower.ms, std::nullopt);
      } else if (method == "high_weight") {
        detail::Stopwatch sw;
        const auto r = baseline_high_weight(g, inst.candidates, k);
        add_row(method, k, r.seeds, sw.ms(), std::nullopt);
      } else if (method == "proximity") {
        detail::Stopwatch sw;
        const auto r = baseline_proximity(g, sys, inst.candidates, k);
        add_row(method, k, r.seeds, sw.ms(), std::nullopt);
      } else if (method == "random") {
        detail::Stopwatch sw;
        const auto seed = hash_combine(random_seed, static_cast<std::uint64_t>(k));
        MonteCarloObjective short_eval(g, sys, inst.profile, cfg.random_eval_replications(), eval_seed);
        long double sum = 0, sum_sq = 0;
        for (int t = 0; t < cfg.random_trials; ++t) {
          const auto draw = baseline_random(inst.candidates, k, hash_combine(seed, static_cast<std::uint64_t>(t)));
          const double m = short_eval.estimate(draw.seeds).mean_m_active;
          sum += m;
          sum_sq += static_cast<long double>(m) * m;
        }
        const long double trials = cfg.random_trials;
        const long double mean = sum / trials;
        long double var = trials > 1 ? (sum_sq - sum * mean) / (trials - 1) : 0.0L;
        if (var < 0) var = 0;
        ReportRow row;
        row.method = method;
        row.budget = k;
        row.f_m_mean = static_cast<double>(mean);
        row.f_m_stderr = static_cast<double>(std::sqrt(var / trials));
        row.f_notm_mean = static_cast<double>(static_cast<long double>(g.node_count()) - mean);
        row.f_notm_stderr = row.f_m_stderr;
        row.rng_seed = seed;
        row.wall_ms = sw.ms();
        report.rows.push_back(std::move(row));
      }
    }
  }

  Json cascades = Json::array();
  for (CascadeId c = 0; c < sys.size(); ++c) {
    cascades.push_back({{"group", to_string(sys.group(c))},
                        {"star", c == sys.star()},
                        {"seeds", detail::original_ids(g, sys[c].seeds)}});
  }
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  report.metadata = {{"config_hash", hash},
                     {"config", config_to_json(cfg)},
                     {"node_count", g.node_count()},
                     {"edge_count", g.edge_count()},
                     {"candidate_count", inst.candidates.size()},
                     {"cascades", cascades},
                     {"seeds",
                      {{"base", cfg.base_seed},
                       {"optimize", opt_seed},
                       {"evaluate", eval_seed},
                       {"random_baseline", random_seed},
                       {"influence", stream_seed(cfg.base_seed, Stream::influence)}}},
                     {"replications",
                      {{"optimize", cfg.r_opt},
                       {"evaluate", cfg.r_eval},
                       {"random_baseline_per_draw", cfg.random_eval_replications()},
                       {"random_baseline_draws", cfg.random_trials},
                       {"influence", cfg.cascades.influence_replications}}},
                     {"random_baseline_policy",
                      "each draw is evaluated on the first random_baseline_per_draw replications of the "
                      "evaluation stream; rows report the mean and standard error over draws"},
                     {"sandwich", sandwich_meta}};
  return report;
}

}  // namespace mcc
