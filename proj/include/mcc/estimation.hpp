#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/diffusion.hpp"
#include "mcc/error.hpp"
#include "mcc/graph.hpp"
#include "mcc/rng.hpp"

namespace mcc {

enum class EvaluatorChoice { automatic, step_simulation, fast_bfs };

struct EstimatorConfig {
  std::int64_t replications = 5000;
  std::uint64_t base_seed = 1;
  bool common_random_numbers = true;
  EvaluatorChoice evaluator = EvaluatorChoice::automatic;
};

struct Estimate {
  double mean_not_m_active = 0.0;
  double mean_m_active = 0.0;
  double std_error = 0.0;  // of either mean; both share the per-run variance
  std::int64_t replications = 0;
};

// Order-independent accumulator of per-replication M-active counts.
class CountAccumulator {
 public:
  void add(std::int64_t m_count) {
    ++n_;
    sum_ += m_count;
    sum_sq_ += static_cast<long double>(m_count) * static_cast<long double>(m_count);
  }

  Estimate finish(NodeId node_count) const {
    Estimate est;
    est.replications = n_;
    if (n_ == 0) return est;
    const long double mean = static_cast<long double>(sum_) / static_cast<long double>(n_);
    est.mean_m_active = static_cast<double>(mean);
    est.mean_not_m_active = static_cast<double>(static_cast<long double>(node_count) - mean);
    if (n_ > 1) {
      long double var = (sum_sq_ - static_cast<long double>(sum_) * mean) /
                        static_cast<long double>(n_ - 1);
      if (var < 0) var = 0;
      est.std_error = static_cast<double>(std::sqrt(var / static_cast<long double>(n_)));
    }
    return est;
  }

 private:
  std::int64_t n_ = 0;
  std::int64_t sum_ = 0;
  long double sum_sq_ = 0;
};

// Key of the live-edge graph used by replication r.
inline std::uint64_t replication_key(const EstimatorConfig& cfg, std::int64_t r,
                                     std::span<const NodeId> star_seeds) {
  std::uint64_t key = substream_key(cfg.base_seed, static_cast<std::uint64_t>(r));
  if (!cfg.common_random_numbers) {
    std::vector<NodeId> sorted(star_seeds.begin(), star_seeds.end());
    std::sort(sorted.begin(), sorted.end());
    std::uint64_t h = 0x5eed5eed5eed5eedULL;
    for (NodeId v : sorted) h = hash_combine(h, static_cast<std::uint64_t>(v));
    key = hash_combine(key, h);
  }
  return key;
}

// Evaluates M-active counts on arbitrary live graphs with whichever evaluator
// the configuration (and the profile's class) allows.
class CountEvaluator {
 public:
  CountEvaluator(const DirectedGraph& g, const CascadeSystem& system, const PriorityProfile& profile,
                 EvaluatorChoice choice = EvaluatorChoice::automatic)
      : sim_(g, system, profile) {
    if (choice == EvaluatorChoice::step_simulation) return;
    const auto cls = classify(profile, system);
    if (!cls) {
      if (choice == EvaluatorChoice::fast_bfs) {
        throw ValidationError("fast evaluator requested but the priority profile is not "
                              "homogeneous, M-dominant or P-dominant");
      }
      return;
    }
    fast_.emplace(g, system, profile, *cls);
  }

  template <LiveEdges L>
  std::int64_t m_count(std::span<const NodeId> star_seeds, const L& live) {
    return fast_ ? fast_->run(star_seeds, live) : sim_.run(star_seeds, live);
  }

  bool uses_fast_path() const noexcept { return fast_.has_value(); }

 private:
  Simulator sim_;
  std::optional<FastEvaluator> fast_;
};

inline Estimate estimate(const DirectedGraph& g, const CascadeSystem& system,
                         const PriorityProfile& profile, std::span<const NodeId> star_seeds,
                         const EstimatorConfig& cfg) {
  if (cfg.replications < 1) throw ValidationError("replications must be >= 1");
  check_star_seeds(star_seeds, g.node_count());
  CountEvaluator eval(g, system, profile, cfg.evaluator);
  CountAccumulator acc;
  for (std::int64_t r = 0; r < cfg.replications; ++r) {
    acc.add(eval.m_count(star_seeds, SampledEdges(g, replication_key(cfg, r, star_seeds))));
  }
  return acc.finish(g.node_count());
}

inline constexpr int kMaxUncertainEdges = 20;

inline std::vector<EdgeId> uncertain_edges(const DirectedGraph& g) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (g.prob(e) > 0.0 && g.prob(e) < 1.0) out.push_back(e);
  }
  return out;
}

// Calls fn(probability, live_graph) for every live-edge graph that differs on
// uncertain edges. Probabilities sum to 1.
template <typename Fn>
void for_each_live_graph(const DirectedGraph& g, Fn&& fn) {
  const auto uncertain = uncertain_edges(g);
  if (uncertain.size() > static_cast<std::size_t>(kMaxUncertainEdges)) {
    throw CapacityError("exact enumeration supports at most " + std::to_string(kMaxUncertainEdges) +
                        " edges with 0 < p < 1; graph has " + std::to_string(uncertain.size()));
  }
  const std::uint64_t outcomes = std::uint64_t{1} << uncertain.size();
  for (std::uint64_t mask = 0; mask < outcomes; ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < uncertain.size(); ++i) {
      const double p = g.prob(uncertain[i]);
      weight *= ((mask >> i) & 1U) ? p : 1.0 - p;
    }
    fn(weight, LiveEdgeGraph::from_mask(g, uncertain, mask));
  }
}

struct ExactValue {
  double f_m = 0.0;
  double f_not_m = 0.0;
  double total_probability = 0.0;
};

// Exact expectation by enumerating live-edge graphs. Uses step simulation by
// default so it can serve as the reference for the other evaluators.
inline ExactValue exact_f(const DirectedGraph& g, const CascadeSystem& system,
                          const PriorityProfile& profile, std::span<const NodeId> star_seeds,
                          EvaluatorChoice evaluator = EvaluatorChoice::step_simulation) {
  check_star_seeds(star_seeds, g.node_count());
  CountEvaluator eval(g, system, profile, evaluator);
  ExactValue out;
  for_each_live_graph(g, [&](double weight, const LiveEdgeGraph& live) {
    out.f_m += weight * static_cast<double>(eval.m_count(star_seeds, live));
    out.total_probability += weight;
  });
  out.f_not_m = static_cast<double>(g.node_count()) - out.f_m;
  return out;
}

}  // namespace mcc
