#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "mcc/error.hpp"
#include "mcc/rng.hpp"

namespace mcc {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  double prob = 0.0;
  std::optional<std::int64_t> activity;
};

// Directed graph with one propagation probability per arc, stored as
// out-CSR (edge ids follow (source, target) order) plus an in-CSR index.
// Immutable once built.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // Validates: ids in range, no self-loops, no duplicate arcs, prob in [0,1],
  // activity >= 0.
  static DirectedGraph from_edges(NodeId node_count, std::vector<Edge> edges) {
    if (node_count < 0) throw ValidationError("negative node count");
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.source, a.target) < std::pair(b.source, b.target);
    });
    DirectedGraph g;
    g.node_count_ = node_count;
    g.out_offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    g.in_offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      if (e.source < 0 || e.source >= node_count || e.target < 0 || e.target >= node_count) {
        throw ValidationError("edge (" + std::to_string(e.source) + ", " +
                              std::to_string(e.target) + ") references an unknown node");
      }
      if (e.source == e.target) {
        throw ValidationError("self-loop on node " + std::to_string(e.source));
      }
      if (i > 0 && edges[i - 1].source == e.source && edges[i - 1].target == e.target) {
        throw ValidationError("duplicate edge (" + std::to_string(e.source) + ", " +
                              std::to_string(e.target) + ")");
      }
      if (!(e.prob >= 0.0 && e.prob <= 1.0)) {
        throw ValidationError("edge probability outside [0,1]");
      }
      if (e.activity && *e.activity < 0) {
        throw ValidationError("negative activity on edge (" + std::to_string(e.source) +
                              ", " + std::to_string(e.target) + ")");
      }
      ++g.out_offsets_[static_cast<std::size_t>(e.source) + 1];
      ++g.in_offsets_[static_cast<std::size_t>(e.target) + 1];
    }
    if (edges.size() > static_cast<std::size_t>(std::numeric_limits<EdgeId>::max())) {
      throw CapacityError("too many edges");
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

    g.sources_.reserve(edges.size());
    g.targets_.reserve(edges.size());
    g.probs_.reserve(edges.size());
    bool any_activity = false;
    for (const Edge& e : edges) any_activity = any_activity || e.activity.has_value();
    for (const Edge& e : edges) {
      g.sources_.push_back(e.source);
      g.targets_.push_back(e.target);
      g.probs_.push_back(e.prob);
      if (any_activity) g.activities_.push_back(e.activity);
    }
    g.in_edges_.resize(edges.size());
    std::vector<EdgeId> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (EdgeId e = 0; e < static_cast<EdgeId>(edges.size()); ++e) {
      g.in_edges_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(g.targets_[e])]++)] = e;
    }
    g.original_ids_.resize(static_cast<std::size_t>(node_count));
    std::iota(g.original_ids_.begin(), g.original_ids_.end(), std::int64_t{0});
    return g;
  }

  NodeId node_count() const noexcept { return node_count_; }
  EdgeId edge_count() const noexcept { return static_cast<EdgeId>(targets_.size()); }

  NodeId source(EdgeId e) const { return sources_[static_cast<std::size_t>(e)]; }
  NodeId target(EdgeId e) const { return targets_[static_cast<std::size_t>(e)]; }
  double prob(EdgeId e) const { return probs_[static_cast<std::size_t>(e)]; }
  std::optional<std::int64_t> activity(EdgeId e) const {
    if (activities_.empty()) return std::nullopt;
    return activities_[static_cast<std::size_t>(e)];
  }

  // Out-edges of u are the contiguous id range [first, last).
  std::pair<EdgeId, EdgeId> out_range(NodeId u) const {
    return {out_offsets_[static_cast<std::size_t>(u)],
            out_offsets_[static_cast<std::size_t>(u) + 1]};
  }
  std::span<const EdgeId> in_edges(NodeId v) const {
    const auto first = static_cast<std::size_t>(in_offsets_[static_cast<std::size_t>(v)]);
    const auto last = static_cast<std::size_t>(in_offsets_[static_cast<std::size_t>(v) + 1]);
    return std::span<const EdgeId>(in_edges_).subspan(first, last - first);
  }
  EdgeId out_degree(NodeId u) const {
    auto [first, last] = out_range(u);
    return last - first;
  }
  EdgeId in_degree(NodeId v) const {
    return in_offsets_[static_cast<std::size_t>(v) + 1] - in_offsets_[static_cast<std::size_t>(v)];
  }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const {
    auto [first, last] = out_range(u);
    auto begin = targets_.begin() + first;
    auto end = targets_.begin() + last;
    auto it = std::lower_bound(begin, end, v);
    if (it == end || *it != v) return std::nullopt;
    return static_cast<EdgeId>(it - targets_.begin());
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(targets_.size());
    for (EdgeId e = 0; e < edge_count(); ++e) {
      out.push_back(Edge{source(e), target(e), prob(e), activity(e)});
    }
    return out;
  }

  // Label of node v in the input it was loaded from (identity for graphs
  // built in memory).
  std::int64_t original_id(NodeId v) const { return original_ids_[static_cast<std::size_t>(v)]; }
  std::span<const std::int64_t> original_ids() const { return original_ids_; }

  // Returns a copy with per-edge probabilities replaced.
  DirectedGraph with_probabilities(std::vector<double> probs) const {
    if (probs.size() != probs_.size()) throw ValidationError("probability vector size mismatch");
    for (double p : probs) {
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability outside [0,1]");
    }
    DirectedGraph g = *this;
    g.probs_ = std::move(probs);
    return g;
  }

  DirectedGraph with_original_ids(std::vector<std::int64_t> ids) const {
    if (ids.size() != static_cast<std::size_t>(node_count_)) {
      throw ValidationError("id map size mismatch");
    }
    DirectedGraph g = *this;
    g.original_ids_ = std::move(ids);
    return g;
  }

  // Sum of out-edge probabilities.
  double out_weight(NodeId u) const {
    auto [first, last] = out_range(u);
    double w = 0.0;
    for (EdgeId e = first; e < last; ++e) w += prob(e);
    return w;
  }

 private:
  NodeId node_count_ = 0;
  std::vector<EdgeId> out_offsets_{0};
  std::vector<NodeId> sources_;
  std::vector<NodeId> targets_;
  std::vector<double> probs_;
  std::vector<std::optional<std::int64_t>> activities_;
  std::vector<EdgeId> in_offsets_{0};
  std::vector<EdgeId> in_edges_;
  std::vector<std::int64_t> original_ids_;
};

// What the optional third column of an edge-list line holds.
enum class ThirdColumn { activity, probability };

// Parses whitespace-separated "u v [x]" lines; '#' lines and blank lines are
// skipped. Ids are compacted in order of first appearance.
inline DirectedGraph parse_edge_list(std::istream& in, bool directed,
                                     ThirdColumn third = ThirdColumn::activity,
                                     const std::string& source_name = "<input>") {
  std::unordered_map<std::int64_t, NodeId> index;
  std::vector<std::int64_t> original;
  auto intern = [&](std::int64_t raw) {
    auto [it, inserted] = index.emplace(raw, static_cast<NodeId>(original.size()));
    if (inserted) original.push_back(raw);
    return it->second;
  };
  auto fail = [&](std::size_t line_no, const std::string& why) {
    throw ParseError(source_name + ":" + std::to_string(line_no) + ": " + why);
  };

  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.size() < 2 || tokens.size() > 3) {
      fail(line_no, "expected 2 or 3 fields, got " + std::to_string(tokens.size()));
    }
    auto parse_int = [&](const std::string& tok) {
      std::size_t used = 0;
      std::int64_t value = 0;
      try {
        value = std::stoll(tok, &used);
      } catch (const std::exception&) {
        fail(line_no, "not an integer: '" + tok + "'");
      }
      if (used != tok.size()) fail(line_no, "not an integer: '" + tok + "'");
      return value;
    };
    const std::int64_t u = parse_int(tokens[0]);
    const std::int64_t v = parse_int(tokens[1]);
    Edge edge;
    if (tokens.size() == 3) {
      if (third == ThirdColumn::activity) {
        const std::int64_t a = parse_int(tokens[2]);
        if (a < 0) {
          throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                ": negative activity " + tokens[2]);
        }
        edge.activity = a;
      } else {
        std::size_t used = 0;
        try {
          edge.prob = std::stod(tokens[2], &used);
        } catch (const std::exception&) {
          fail(line_no, "not a probability: '" + tokens[2] + "'");
        }
        if (used != tokens[2].size()) fail(line_no, "not a probability: '" + tokens[2] + "'");
        if (!(edge.prob >= 0.0 && edge.prob <= 1.0)) {
          throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                ": probability outside [0,1]");
        }
      }
    }
    if (u == v) {
      throw ValidationError(source_name + ":" + std::to_string(line_no) + ": self-loop on " +
                            tokens[0]);
    }
    edge.source = intern(u);
    edge.target = intern(v);
    edges.push_back(edge);
    if (!directed) {
      Edge back = edge;
      std::swap(back.source, back.target);
      edges.push_back(back);
    }
  }
  auto g = DirectedGraph::from_edges(static_cast<NodeId>(original.size()), std::move(edges));
  return g.with_original_ids(std::move(original));
}

inline DirectedGraph load_edge_list(const std::string& path, bool directed,
                                    ThirdColumn third = ThirdColumn::activity) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  return parse_edge_list(in, directed, third, path);
}

// Propagation-probability assignment modes.
namespace probability {
struct Uniform {
  double p = 0.1;
};
struct WeightedCascade {};
struct ActivityBased {
  double p_max = 0.2;
  double p_base = 0.4;
};
struct FromFile {};
}  // namespace probability

using ProbabilityMode = std::variant<probability::Uniform, probability::WeightedCascade,
                                     probability::ActivityBased, probability::FromFile>;

inline DirectedGraph assign_probabilities(const DirectedGraph& g, const ProbabilityMode& mode) {
  std::vector<double> probs(static_cast<std::size_t>(g.edge_count()));
  if (const auto* uniform = std::get_if<probability::Uniform>(&mode)) {
    if (!(uniform->p >= 0.0 && uniform->p <= 1.0)) {
      throw ValidationError("uniform probability outside [0,1]");
    }
    std::fill(probs.begin(), probs.end(), uniform->p);
  } else if (std::holds_alternative<probability::WeightedCascade>(mode)) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      probs[static_cast<std::size_t>(e)] = 1.0 / static_cast<double>(g.in_degree(g.target(e)));
    }
  } else if (const auto* act = std::get_if<probability::ActivityBased>(&mode)) {
    if (act->p_max < 0.0 || act->p_base < 0.0 || act->p_max + act->p_base > 1.0) {
      throw ValidationError("activity-based mode needs p_max, p_base >= 0 and p_max + p_base <= 1");
    }
    std::int64_t a_max = 0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const auto a = g.activity(e);
      if (!a) {
        throw ValidationError("activity-based mode: edge " + std::to_string(e) +
                              " carries no activity");
      }
      a_max = std::max(a_max, *a);
    }
    if (g.edge_count() > 0 && a_max == 0) {
      throw ValidationError("activity-based mode: every activity is zero");
    }
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      const double ratio = static_cast<double>(*g.activity(e)) / static_cast<double>(a_max);
      probs[static_cast<std::size_t>(e)] = std::min(1.0, ratio * act->p_max + act->p_base);
    }
  } else {
    return g;
  }
  return g.with_probabilities(std::move(probs));
}

// Synthetic generators. Both are deterministic in `seed`.

// Directed G(n, m): m distinct arcs drawn uniformly without self-loops.
inline DirectedGraph erdos_renyi(NodeId n, std::int64_t m, std::uint64_t seed) {
  const std::int64_t max_arcs = static_cast<std::int64_t>(n) * (n - 1);
  if (m > max_arcs) throw ValidationError("too many arcs requested for G(n, m)");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  std::unordered_set<std::int64_t> seen;
  while (static_cast<std::int64_t>(edges.size()) < m) {
    const auto u = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    const auto v = static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n)));
    if (u == v) continue;
    const std::int64_t key = static_cast<std::int64_t>(u) * n + v;
    if (!seen.insert(key).second) continue;
    edges.push_back(Edge{u, v, 0.0, std::nullopt});
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

// Directed preferential attachment: node t links to `out_degree` distinct
// earlier nodes chosen proportionally to (in-degree + 1). Arcs point from the
// newcomer to the chosen node and, with probability `reciprocal`, back.
inline DirectedGraph preferential_attachment(NodeId n, int out_degree, double reciprocal,
                                             std::uint64_t seed) {
  if (out_degree < 1) throw ValidationError("preferential attachment needs out_degree >= 1");
  SplitMix64 rng(seed);
  std::vector<Edge> edges;
  std::vector<NodeId> urn;  // node repeated (in-degree + 1) times
  std::vector<NodeId> picked;
  for (NodeId t = 0; t < n; ++t) {
    picked.clear();
    const int want = std::min<int>(out_degree, t);
    while (static_cast<int>(picked.size()) < want) {
      const NodeId v = urn[static_cast<std::size_t>(rng.below(urn.size()))];
      if (std::find(picked.begin(), picked.end(), v) == picked.end()) picked.push_back(v);
    }
    for (NodeId v : picked) {
      edges.push_back(Edge{t, v, 0.0, std::nullopt});
      urn.push_back(v);
      if (rng.uniform() < reciprocal) {
        edges.push_back(Edge{v, t, 0.0, std::nullopt});
        urn.push_back(t);
      }
    }
    urn.push_back(t);
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

}  // namespace mcc
