#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/error.hpp"
#include "mcc/graph.hpp"
#include "mcc/rng.hpp"

namespace mcc {

using Step = std::int32_t;
inline constexpr Step kNever = std::numeric_limits<Step>::max();
// Activated node whose exact cascade was not resolved (distance-only evaluators).
inline constexpr CascadeId kUnresolved = -2;

// A realization of edge randomness: which arcs "fire".
template <typename L>
concept LiveEdges = requires(const L& live, EdgeId e) {
  { live.kept(e) } -> std::convertible_to<bool>;
};

// Materialized live-edge graph: one keep flag per arc of the parent graph.
class LiveEdgeGraph {
 public:
  LiveEdgeGraph() = default;
  explicit LiveEdgeGraph(std::vector<std::uint8_t> kept) : kept_(std::move(kept)) {}

  static LiveEdgeGraph all(const DirectedGraph& g) {
    return LiveEdgeGraph(std::vector<std::uint8_t>(static_cast<std::size_t>(g.edge_count()), 1));
  }

  // Bit i of `mask` decides edge uncertain[i]; certain edges (p = 1) are
  // always kept and p = 0 edges never.
  static LiveEdgeGraph from_mask(const DirectedGraph& g, std::span<const EdgeId> uncertain,
                                 std::uint64_t mask) {
    std::vector<std::uint8_t> kept(static_cast<std::size_t>(g.edge_count()));
    for (EdgeId e = 0; e < g.edge_count(); ++e) kept[static_cast<std::size_t>(e)] = g.prob(e) >= 1.0;
    for (std::size_t i = 0; i < uncertain.size(); ++i) {
      kept[static_cast<std::size_t>(uncertain[i])] = (mask >> i) & 1U;
    }
    return LiveEdgeGraph(std::move(kept));
  }

  bool kept(EdgeId e) const { return kept_[static_cast<std::size_t>(e)] != 0; }
  EdgeId edge_count() const { return static_cast<EdgeId>(kept_.size()); }
  EdgeId kept_count() const {
    return static_cast<EdgeId>(std::count(kept_.begin(), kept_.end(), std::uint8_t{1}));
  }

  friend bool operator==(const LiveEdgeGraph&, const LiveEdgeGraph&) = default;

 private:
  std::vector<std::uint8_t> kept_;
};

// Implicit live-edge graph: edge e is kept iff hash(key, e) < p_e. The coin
// of an edge depends only on (key, e), so a live graph is fully determined by
// its key and can be explored lazily.
class SampledEdges {
 public:
  SampledEdges(const DirectedGraph& g, std::uint64_t key) : graph_(&g), key_(key) {}

  bool kept(EdgeId e) const {
    const double p = graph_->prob(e);
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return to_unit(hash_combine(key_, static_cast<std::uint64_t>(e))) < p;
  }
  std::uint64_t key() const noexcept { return key_; }

 private:
  const DirectedGraph* graph_;
  std::uint64_t key_;
};

inline LiveEdgeGraph materialize(const DirectedGraph& g, const LiveEdges auto& live) {
  std::vector<std::uint8_t> kept(static_cast<std::size_t>(g.edge_count()));
  for (EdgeId e = 0; e < g.edge_count(); ++e) kept[static_cast<std::size_t>(e)] = live.kept(e);
  return LiveEdgeGraph(std::move(kept));
}

inline LiveEdgeGraph sample_live_edge_graph(const DirectedGraph& g, std::uint64_t seed) {
  return materialize(g, SampledEdges(g, seed));
}

struct DiffusionOutcome {
  std::vector<CascadeId> state;      // kNoCascade when never activated
  std::vector<Step> activation_time; // kNever when never activated
  std::vector<std::uint8_t> m_active;
  std::int64_t m_active_count = 0;
  std::int64_t not_m_active_count = 0;
};

inline void check_star_seeds(std::span<const NodeId> star_seeds, NodeId node_count) {
  for (NodeId v : star_seeds) {
    if (v < 0 || v >= node_count) {
      throw ValidationError("seed node " + std::to_string(v) + " is not in the graph");
    }
  }
}

// Step-by-step diffusion with a reusable sparse workspace: cost per run is
// proportional to the activated region, not the graph size.
class Simulator {
 public:
  Simulator(const DirectedGraph& g, const CascadeSystem& system, const PriorityProfile& profile)
      : graph_(&g), system_(&system), profile_(&profile),
        state_(static_cast<std::size_t>(g.node_count()), kNoCascade),
        time_(static_cast<std::size_t>(g.node_count()), kNever) {
    if (profile.node_count() != g.node_count() || profile.cascade_count() != system.size()) {
      throw ValidationError("priority profile does not match graph/cascade system");
    }
  }

  // Runs the diffusion to termination and returns the number of M-active
  // nodes. Results stay readable via state()/time()/activated() until the
  // next call.
  template <LiveEdges L>
  std::int64_t run(std::span<const NodeId> star_seeds, const L& live) {
    reset();
    const PriorityProfile& pri = *profile_;
    auto seed = [&](NodeId v, CascadeId c) {
      auto& s = state_[static_cast<std::size_t>(v)];
      if (time_[static_cast<std::size_t>(v)] == kNever) {
        time_[static_cast<std::size_t>(v)] = 0;
        s = c;
        activated_.push_back(v);
      } else {
        s = pri.prefer(v, s, c);
      }
    };
    for (CascadeId c = 0; c < system_->size(); ++c) {
      for (NodeId v : (*system_)[c].seeds) seed(v, c);
    }
    for (NodeId v : star_seeds) seed(v, system_->star());

    std::size_t level_begin = 0;
    for (Step t = 1; level_begin < activated_.size(); ++t) {
      const std::size_t level_end = activated_.size();
      for (std::size_t i = level_begin; i < level_end; ++i) {
        const NodeId u = activated_[i];
        const CascadeId cu = state_[static_cast<std::size_t>(u)];
        auto [first, last] = graph_->out_range(u);
        for (EdgeId e = first; e < last; ++e) {
          const NodeId v = graph_->target(e);
          const Step tv = time_[static_cast<std::size_t>(v)];
          if (tv < t || !live.kept(e)) continue;
          if (tv == kNever) {
            time_[static_cast<std::size_t>(v)] = t;
            state_[static_cast<std::size_t>(v)] = cu;
            activated_.push_back(v);
          } else {
            state_[static_cast<std::size_t>(v)] = pri.prefer(v, state_[static_cast<std::size_t>(v)], cu);
          }
        }
      }
      level_begin = level_end;
    }
    std::int64_t m = 0;
    for (NodeId v : activated_) m += system_->is_misinformation(state_[static_cast<std::size_t>(v)]);
    return m;
  }

  CascadeId state(NodeId v) const { return state_[static_cast<std::size_t>(v)]; }
  Step time(NodeId v) const { return time_[static_cast<std::size_t>(v)]; }
  // Activated nodes in activation order (nondecreasing time).
  std::span<const NodeId> activated() const { return activated_; }

  DiffusionOutcome outcome() const {
    const NodeId n = graph_->node_count();
    DiffusionOutcome out;
    out.state = state_;
    out.activation_time = time_;
    out.m_active.assign(static_cast<std::size_t>(n), 0);
    for (NodeId v : activated_) {
      if (system_->is_misinformation(state_[static_cast<std::size_t>(v)])) {
        out.m_active[static_cast<std::size_t>(v)] = 1;
        ++out.m_active_count;
      }
    }
    out.not_m_active_count = n - out.m_active_count;
    return out;
  }

 private:
  void reset() {
    for (NodeId v : activated_) {
      state_[static_cast<std::size_t>(v)] = kNoCascade;
      time_[static_cast<std::size_t>(v)] = kNever;
    }
    activated_.clear();
  }

  const DirectedGraph* graph_;
  const CascadeSystem* system_;
  const PriorityProfile* profile_;
  std::vector<CascadeId> state_;
  std::vector<Step> time_;
  std::vector<NodeId> activated_;
};

template <LiveEdges L>
DiffusionOutcome simulate(const DirectedGraph& g, const CascadeSystem& system,
                          const PriorityProfile& profile, std::span<const NodeId> star_seeds,
                          const L& live) {
  check_star_seeds(star_seeds, g.node_count());
  Simulator sim(g, system, profile);
  sim.run(star_seeds, live);
  return sim.outcome();
}

// Randomness given as a seed: samples the live-edge graph for `seed` (lazily)
// and runs deterministically on it, i.e. identical to
// simulate(..., sample_live_edge_graph(g, seed)).
inline DiffusionOutcome simulate(const DirectedGraph& g, const CascadeSystem& system,
                                 const PriorityProfile& profile, std::span<const NodeId> star_seeds,
                                 std::uint64_t seed) {
  return simulate(g, system, profile, star_seeds, SampledEdges(g, seed));
}

// Distance-based evaluation for the three special priority classes.
//   m_dominant : u is not M-active iff d(positive seeds, u) <  d(M seeds, u)
//   p_dominant : u is not M-active iff d(positive seeds, u) <= d(M seeds, u)
//   homogeneous: u takes the top-ranked cascade among those owning a seed at
//                distance exactly d(all seeds, u)
// where positive seeds include P*'s. Unreached nodes are not M-active.
class FastEvaluator {
 public:
  FastEvaluator(const DirectedGraph& g, const CascadeSystem& system, const PriorityProfile& profile,
                PriorityClass cls)
      : graph_(&g), system_(&system), profile_(&profile), class_(cls),
        dist_m_(static_cast<std::size_t>(g.node_count()), kNever),
        dist_p_(static_cast<std::size_t>(g.node_count()), kNever),
        label_(static_cast<std::size_t>(g.node_count()), kNoCascade) {
    if (profile.node_count() != g.node_count() || profile.cascade_count() != system.size()) {
      throw ValidationError("priority profile does not match graph/cascade system");
    }
    if (!belongs_to(profile, system, cls)) {
      throw ValidationError(std::string("priority profile is not ") + to_string(cls));
    }
  }

  PriorityClass priority_class() const noexcept { return class_; }

  template <LiveEdges L>
  std::int64_t run(std::span<const NodeId> star_seeds, const L& live) {
    reset();
    if (class_ == PriorityClass::homogeneous) return run_homogeneous(star_seeds, live);

    frontier_.clear();
    for (CascadeId c = 0; c < system_->size(); ++c) {
      if (!system_->is_misinformation(c)) continue;
      for (NodeId v : (*system_)[c].seeds) push_source(dist_m_, v);
    }
    bfs(dist_m_, live);
    frontier_.clear();
    for (CascadeId c = 0; c < system_->size(); ++c) {
      if (system_->is_misinformation(c)) continue;
      for (NodeId v : (*system_)[c].seeds) push_source(dist_p_, v);
    }
    for (NodeId v : star_seeds) push_source(dist_p_, v);
    bfs(dist_p_, live);

    std::int64_t m = 0;
    for (NodeId v : touched_) m += m_active(v);
    return m;
  }

  bool m_active(NodeId v) const {
    const Step dm = dist_m_[static_cast<std::size_t>(v)];
    const Step dp = dist_p_[static_cast<std::size_t>(v)];
    switch (class_) {
      case PriorityClass::m_dominant: return dm != kNever && dm <= dp;
      case PriorityClass::p_dominant: return dm < dp;
      case PriorityClass::homogeneous: {
        const CascadeId c = label_[static_cast<std::size_t>(v)];
        return c != kNoCascade && system_->is_misinformation(c);
      }
    }
    return false;
  }

  DiffusionOutcome outcome() const {
    const NodeId n = graph_->node_count();
    DiffusionOutcome out;
    out.state.assign(static_cast<std::size_t>(n), kNoCascade);
    out.activation_time.assign(static_cast<std::size_t>(n), kNever);
    out.m_active.assign(static_cast<std::size_t>(n), 0);
    for (NodeId v : touched_) {
      const auto i = static_cast<std::size_t>(v);
      const Step t = std::min(dist_m_[i], dist_p_[i]);
      if (t == kNever) continue;
      out.activation_time[i] = t;
      out.state[i] = class_ == PriorityClass::homogeneous ? label_[i] : kUnresolved;
      out.m_active[i] = m_active(v);
      out.m_active_count += out.m_active[i];
    }
    out.not_m_active_count = n - out.m_active_count;
    return out;
  }

 private:
  void reset() {
    for (NodeId v : touched_) {
      dist_m_[static_cast<std::size_t>(v)] = kNever;
      dist_p_[static_cast<std::size_t>(v)] = kNever;
      label_[static_cast<std::size_t>(v)] = kNoCascade;
    }
    touched_.clear();
  }

  void touch(NodeId v) {
    const auto i = static_cast<std::size_t>(v);
    if (dist_m_[i] == kNever && dist_p_[i] == kNever && label_[i] == kNoCascade) {
      touched_.push_back(v);
    }
  }

  void push_source(std::vector<Step>& dist, NodeId v) {
    if (dist[static_cast<std::size_t>(v)] == 0) return;
    touch(v);
    dist[static_cast<std::size_t>(v)] = 0;
    frontier_.push_back(v);
  }

  template <LiveEdges L>
  void bfs(std::vector<Step>& dist, const L& live) {
    for (std::size_t head = 0; head < frontier_.size(); ++head) {
      const NodeId u = frontier_[head];
      const Step next = dist[static_cast<std::size_t>(u)] + 1;
      auto [first, last] = graph_->out_range(u);
      for (EdgeId e = first; e < last; ++e) {
        const NodeId v = graph_->target(e);
        if (dist[static_cast<std::size_t>(v)] != kNever || !live.kept(e)) continue;
        touch(v);
        dist[static_cast<std::size_t>(v)] = next;
        frontier_.push_back(v);
      }
    }
  }

  // Multi-source BFS carrying the best label reachable at minimum distance.
  // dist_p_ holds the all-seeds distance here.
  template <LiveEdges L>
  std::int64_t run_homogeneous(std::span<const NodeId> star_seeds, const L& live) {
    const PriorityProfile& pri = *profile_;
    frontier_.clear();
    auto seed = [&](NodeId v, CascadeId c) {
      const auto i = static_cast<std::size_t>(v);
      if (dist_p_[i] == kNever) {
        touch(v);
        dist_p_[i] = 0;
        frontier_.push_back(v);
      }
      label_[i] = pri.prefer(v, label_[i], c);
    };
    for (CascadeId c = 0; c < system_->size(); ++c) {
      for (NodeId v : (*system_)[c].seeds) seed(v, c);
    }
    for (NodeId v : star_seeds) seed(v, system_->star());
    for (std::size_t head = 0; head < frontier_.size(); ++head) {
      const NodeId u = frontier_[head];
      const auto iu = static_cast<std::size_t>(u);
      const Step next = dist_p_[iu] + 1;
      auto [first, last] = graph_->out_range(u);
      for (EdgeId e = first; e < last; ++e) {
        const NodeId v = graph_->target(e);
        const auto iv = static_cast<std::size_t>(v);
        if (dist_p_[iv] < next || !live.kept(e)) continue;
        if (dist_p_[iv] == kNever) {
          touch(v);
          dist_p_[iv] = next;
          frontier_.push_back(v);
        }
        label_[iv] = pri.prefer(v, label_[iv], label_[iu]);
      }
    }
    std::int64_t m = 0;
    for (NodeId v : touched_) m += m_active(v);
    return m;
  }

  const DirectedGraph* graph_;
  const CascadeSystem* system_;
  const PriorityProfile* profile_;
  PriorityClass class_;
  std::vector<Step> dist_m_;
  std::vector<Step> dist_p_;
  std::vector<CascadeId> label_;
  std::vector<NodeId> touched_;
  std::vector<NodeId> frontier_;
};

template <LiveEdges L>
DiffusionOutcome evaluate_on_live_graph_fast(const DirectedGraph& g, const CascadeSystem& system,
                                             PriorityClass cls, const PriorityProfile& profile,
                                             std::span<const NodeId> star_seeds, const L& live) {
  check_star_seeds(star_seeds, g.node_count());
  FastEvaluator eval(g, system, profile, cls);
  eval.run(star_seeds, live);
  return eval.outcome();
}

}  // namespace mcc
