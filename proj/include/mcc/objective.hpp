#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/diffusion.hpp"
#include "mcc/estimation.hpp"
#include "mcc/graph.hpp"

namespace mcc {

// A set function over node sets. Implementations may keep scratch state, so
// a single instance must not be shared across threads.
class SetFunction {
 public:
  virtual ~SetFunction() = default;

  virtual double value(std::span<const NodeId> seeds) = 0;

  // out[i] = value(base + candidates[i]) - value(base). The default does it
  // the slow way.
  virtual void marginal_gains(std::span<const NodeId> base, std::span<const NodeId> candidates,
                              std::span<double> out) {
    const double base_value = value(base);
    std::vector<NodeId> trial(base.begin(), base.end());
    trial.push_back(0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      trial.back() = candidates[i];
      out[i] = value(trial) - base_value;
    }
  }
};

class LambdaSetFunction final : public SetFunction {
 public:
  explicit LambdaSetFunction(std::function<double(std::span<const NodeId>)> fn) : fn_(std::move(fn)) {}
  double value(std::span<const NodeId> seeds) override { return fn_(seeds); }

 private:
  std::function<double(std::span<const NodeId>)> fn_;
};

// Expected number of not-M-active nodes, computed exactly by enumeration.
// Values are memoized per seed set.
class ExactObjective final : public SetFunction {
 public:
  ExactObjective(const DirectedGraph& g, const CascadeSystem& system, const PriorityProfile& profile,
                 EvaluatorChoice evaluator = EvaluatorChoice::step_simulation)
      : graph_(&g), system_(&system), profile_(profile), evaluator_(evaluator) {}

  double value(std::span<const NodeId> seeds) override {
    std::vector<NodeId> key(seeds.begin(), seeds.end());
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const double v = exact_f(*graph_, *system_, profile_, key, evaluator_).f_not_m;
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  const DirectedGraph* graph_;
  const CascadeSystem* system_;
  PriorityProfile profile_;
  EvaluatorChoice evaluator_;
  std::map<std::vector<NodeId>, double> cache_;
};

// Sample-mean estimate of the not-M-active count over a fixed set of R
// live-edge graphs (common random numbers: every seed set is scored on the
// same R graphs).
//
// Marginal gains are computed incrementally. With base outcome (T, S) on a
// live graph, adding seed x can only change nodes u with d_x(u) <= T(u),
// where d_x is the live-graph hop distance from x. That region is found by a
// BFS from x pruned at T, and its new states are recomputed level by level
// from in-neighbours active one step earlier.
class MonteCarloObjective final : public SetFunction {
 public:
  MonteCarloObjective(const DirectedGraph& g, const CascadeSystem& system,
                      const PriorityProfile& profile, std::int64_t replications,
                      std::uint64_t base_seed)
      : graph_(&g), system_(&system), profile_(profile), replications_(replications),
        base_seed_(base_seed), eval_(g, system, profile_), sim_(g, system, profile_) {
    if (replications < 1) throw ValidationError("replications must be >= 1");
    const auto n = static_cast<std::size_t>(g.node_count());
    owner_.assign(n, kNoCascade);
    for (CascadeId c = 0; c < system.size(); ++c) {
      for (NodeId v : system[c].seeds) {
        owner_[static_cast<std::size_t>(v)] = profile.prefer(v, owner_[static_cast<std::size_t>(v)], c);
      }
    }
    stamp_.assign(n, 0);
    new_time_.assign(n, kNever);
    new_state_.assign(n, kNoCascade);
    in_base_.assign(n, 0);
  }
  MonteCarloObjective(const MonteCarloObjective&) = delete;
  MonteCarloObjective& operator=(const MonteCarloObjective&) = delete;

  std::int64_t replications() const noexcept { return replications_; }
  std::uint64_t base_seed() const noexcept { return base_seed_; }

  SampledEdges live_graph(std::int64_t r) const {
    return SampledEdges(*graph_, substream_key(base_seed_, static_cast<std::uint64_t>(r)));
  }

  // Sum over replications of the not-M-active count.
  std::int64_t total_not_m(std::span<const NodeId> seeds) {
    check_star_seeds(seeds, graph_->node_count());
    std::int64_t total = 0;
    for (std::int64_t r = 0; r < replications_; ++r) {
      total += graph_->node_count() - eval_.m_count(seeds, live_graph(r));
    }
    return total;
  }

  Estimate estimate(std::span<const NodeId> seeds) {
    check_star_seeds(seeds, graph_->node_count());
    CountAccumulator acc;
    for (std::int64_t r = 0; r < replications_; ++r) acc.add(eval_.m_count(seeds, live_graph(r)));
    return acc.finish(graph_->node_count());
  }

  double value(std::span<const NodeId> seeds) override {
    return static_cast<double>(total_not_m(seeds)) / static_cast<double>(replications_);
  }

  // Summed over replications: total_not_m(base + x) - total_not_m(base).
  std::vector<std::int64_t> gain_totals(std::span<const NodeId> base,
                                        std::span<const NodeId> candidates) {
    check_star_seeds(base, graph_->node_count());
    check_star_seeds(candidates, graph_->node_count());
    std::vector<std::int64_t> totals(candidates.size(), 0);
    for (NodeId v : base) in_base_[static_cast<std::size_t>(v)] = 1;
    for (std::int64_t r = 0; r < replications_; ++r) {
      const auto live = live_graph(r);
      sim_.run(base, live);
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (in_base_[static_cast<std::size_t>(candidates[i])]) continue;
        totals[i] += region_delta(candidates[i], live);
      }
    }
    for (NodeId v : base) in_base_[static_cast<std::size_t>(v)] = 0;
    return totals;
  }

  void marginal_gains(std::span<const NodeId> base, std::span<const NodeId> candidates,
                      std::span<double> out) override {
    const auto totals = gain_totals(base, candidates);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out[i] = static_cast<double>(totals[i]) / static_cast<double>(replications_);
    }
  }

 private:
  bool not_m(CascadeId c) const { return c == kNoCascade || !system_->is_misinformation(c); }

  // Change in the not-M-active count on one live graph when x joins the P*
  // seeds; sim_ holds the base outcome.
  template <LiveEdges L>
  std::int64_t region_delta(NodeId x, const L& live) {
    ++epoch_;
    const PriorityProfile& pri = profile_;
    std::int64_t delta = 0;
    auto in_region = [&](NodeId v) { return stamp_[static_cast<std::size_t>(v)] == epoch_; };
    auto time_of = [&](NodeId v) {
      return in_region(v) ? new_time_[static_cast<std::size_t>(v)] : sim_.time(v);
    };
    auto state_of = [&](NodeId v) {
      return in_region(v) ? new_state_[static_cast<std::size_t>(v)] : sim_.state(v);
    };
    auto enter = [&](NodeId v, Step t) {
      stamp_[static_cast<std::size_t>(v)] = epoch_;
      new_time_[static_cast<std::size_t>(v)] = t;
      level_next_.push_back(v);
    };

    level_.clear();
    level_next_.clear();
    enter(x, 0);
    new_state_[static_cast<std::size_t>(x)] =
        pri.prefer(x, owner_[static_cast<std::size_t>(x)], system_->star());
    delta += static_cast<std::int64_t>(not_m(new_state_[static_cast<std::size_t>(x)])) -
             static_cast<std::int64_t>(not_m(sim_.state(x)));

    for (Step t = 0; !level_next_.empty(); ++t) {
      std::swap(level_, level_next_);
      level_next_.clear();
      if (t > 0) {
        for (NodeId u : level_) {
          CascadeId best = kNoCascade;
          for (EdgeId e : graph_->in_edges(u)) {
            const NodeId w = graph_->source(e);
            if (time_of(w) != t - 1 || !live.kept(e)) continue;
            best = pri.prefer(u, best, state_of(w));
          }
          new_state_[static_cast<std::size_t>(u)] = best;
          delta += static_cast<std::int64_t>(not_m(best)) -
                   static_cast<std::int64_t>(not_m(sim_.state(u)));
        }
      }
      for (NodeId u : level_) {
        auto [first, last] = graph_->out_range(u);
        for (EdgeId e = first; e < last; ++e) {
          const NodeId v = graph_->target(e);
          if (in_region(v) || sim_.time(v) < t + 1 || !live.kept(e)) continue;
          enter(v, t + 1);
        }
      }
    }
    return delta;
  }

  const DirectedGraph* graph_;
  const CascadeSystem* system_;
  PriorityProfile profile_;  // owned: eval_ and sim_ point into it
  std::int64_t replications_;
  std::uint64_t base_seed_;
  CountEvaluator eval_;
  Simulator sim_;
  std::vector<CascadeId> owner_;  // best existing cascade seeding each node
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<Step> new_time_;
  std::vector<CascadeId> new_state_;
  std::vector<std::uint8_t> in_base_;
  std::vector<NodeId> level_;
  std::vector<NodeId> level_next_;
};

}  // namespace mcc
