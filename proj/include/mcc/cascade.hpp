#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mcc/error.hpp"
#include "mcc/graph.hpp"
#include "mcc/rng.hpp"

namespace mcc {

using CascadeId = std::int32_t;
// Larger rank = higher priority. Ranks at a node form a permutation of 1..|C|.
using Rank = std::int32_t;

inline constexpr CascadeId kNoCascade = -1;

enum class Group : std::uint8_t { misinformation, positive };

inline const char* to_string(Group g) { return g == Group::misinformation ? "M" : "P"; }

struct Cascade {
  Group group = Group::positive;
  std::vector<NodeId> seeds;
};

// Existing cascades plus the designated new positive cascade P*. Cascade ids
// are positions in `cascades()`. P*'s seed set is the decision variable and
// is passed separately wherever diffusion is evaluated; the seeds stored for
// P* here must be empty.
class CascadeSystem {
 public:
  CascadeSystem() = default;

  CascadeSystem(std::vector<Cascade> cascades, CascadeId star, NodeId node_count)
      : cascades_(std::move(cascades)), star_(star) {
    if (star_ < 0 || star_ >= size()) throw ValidationError("star cascade id out of range");
    if (cascades_[static_cast<std::size_t>(star_)].group != Group::positive) {
      throw ValidationError("the new cascade must belong to the positive group");
    }
    if (!cascades_[static_cast<std::size_t>(star_)].seeds.empty()) {
      throw ValidationError("the new cascade's seeds are chosen by the solver, not fixed");
    }
    for (auto& c : cascades_) {
      std::sort(c.seeds.begin(), c.seeds.end());
      c.seeds.erase(std::unique(c.seeds.begin(), c.seeds.end()), c.seeds.end());
      for (NodeId v : c.seeds) {
        if (v < 0 || v >= node_count) {
          throw ValidationError("seed node " + std::to_string(v) + " out of range");
        }
      }
    }
  }

  CascadeId size() const noexcept { return static_cast<CascadeId>(cascades_.size()); }
  CascadeId star() const noexcept { return star_; }
  const Cascade& operator[](CascadeId c) const { return cascades_[static_cast<std::size_t>(c)]; }
  std::span<const Cascade> cascades() const noexcept { return cascades_; }

  Group group(CascadeId c) const { return (*this)[c].group; }
  bool is_misinformation(CascadeId c) const { return group(c) == Group::misinformation; }

  std::vector<CascadeId> members(Group g) const {
    std::vector<CascadeId> out;
    for (CascadeId c = 0; c < size(); ++c) {
      if (group(c) == g) out.push_back(c);
    }
    return out;
  }

  // Union of the seed sets of all existing cascades, sorted.
  std::vector<NodeId> existing_seeds() const {
    std::vector<NodeId> out;
    for (const auto& c : cascades_) out.insert(out.end(), c.seeds.begin(), c.seeds.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  std::vector<Cascade> cascades_;
  CascadeId star_ = 0;
};

// Per-node bijection cascade -> rank, stored row-major (node, cascade).
class PriorityProfile {
 public:
  PriorityProfile() = default;

  PriorityProfile(NodeId node_count, CascadeId cascade_count, std::vector<Rank> ranks)
      : node_count_(node_count), cascade_count_(cascade_count), ranks_(std::move(ranks)) {
    if (ranks_.size() != static_cast<std::size_t>(node_count) * static_cast<std::size_t>(cascade_count)) {
      throw ValidationError("priority table has the wrong shape");
    }
    std::vector<char> seen(static_cast<std::size_t>(cascade_count) + 1);
    for (NodeId v = 0; v < node_count_; ++v) {
      std::fill(seen.begin(), seen.end(), 0);
      for (Rank r : row(v)) {
        if (r < 1 || r > cascade_count_ || seen[static_cast<std::size_t>(r)]) {
          throw ValidationError("priorities at node " + std::to_string(v) +
                                " are not a permutation of 1.." + std::to_string(cascade_count_));
        }
        seen[static_cast<std::size_t>(r)] = 1;
      }
    }
  }

  NodeId node_count() const noexcept { return node_count_; }
  CascadeId cascade_count() const noexcept { return cascade_count_; }

  Rank rank(NodeId v, CascadeId c) const {
    return ranks_[static_cast<std::size_t>(v) * static_cast<std::size_t>(cascade_count_) +
                  static_cast<std::size_t>(c)];
  }
  std::span<const Rank> row(NodeId v) const {
    return std::span<const Rank>(ranks_).subspan(
        static_cast<std::size_t>(v) * static_cast<std::size_t>(cascade_count_),
        static_cast<std::size_t>(cascade_count_));
  }

  // Cascade preferred at v between a and b (either may be kNoCascade).
  CascadeId prefer(NodeId v, CascadeId a, CascadeId b) const {
    if (a == kNoCascade) return b;
    if (b == kNoCascade) return a;
    return rank(v, a) >= rank(v, b) ? a : b;
  }

  friend bool operator==(const PriorityProfile&, const PriorityProfile&) = default;

 private:
  NodeId node_count_ = 0;
  CascadeId cascade_count_ = 0;
  std::vector<Rank> ranks_;
};

namespace priority {
// A global order given as ranks[c] in 1..|C|.
struct Homogeneous {
  std::vector<Rank> ranks;
};
struct MDominant {
  std::vector<Rank> ranks;
};
struct PDominant {
  std::vector<Rank> ranks;
};
// Independent uniform permutation per node, derived from hash(seed, node).
struct Random {
  std::uint64_t seed = 0;
};
struct Explicit {
  std::vector<Rank> table;  // row-major (node, cascade)
};
}  // namespace priority

using PriorityKind = std::variant<priority::Homogeneous, priority::MDominant, priority::PDominant,
                                  priority::Random, priority::Explicit>;

namespace detail {

inline void check_global_ranks(std::span<const Rank> ranks, CascadeId count) {
  if (ranks.size() != static_cast<std::size_t>(count)) {
    throw ValidationError("global priority must rank every cascade exactly once");
  }
  std::vector<char> seen(static_cast<std::size_t>(count) + 1);
  for (Rank r : ranks) {
    if (r < 1 || r > count || seen[static_cast<std::size_t>(r)]) {
      throw ValidationError("global priority is not a permutation of 1.." + std::to_string(count));
    }
    seen[static_cast<std::size_t>(r)] = 1;
  }
}

// Stable regrouping of one node's ranks: `low` group first, then `high`,
// preserving the within-group order of `row`.
inline void regroup(std::span<const Rank> row, const CascadeSystem& system, Group high,
                    std::span<Rank> out) {
  const auto n = static_cast<CascadeId>(row.size());
  std::vector<CascadeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](CascadeId a, CascadeId b) {
    return row[static_cast<std::size_t>(a)] < row[static_cast<std::size_t>(b)];
  });
  std::stable_partition(order.begin(), order.end(),
                        [&](CascadeId c) { return system.group(c) != high; });
  for (CascadeId i = 0; i < n; ++i) out[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i + 1;
}

}  // namespace detail

inline PriorityProfile make_priority_profile(const PriorityKind& kind, const CascadeSystem& system,
                                             NodeId node_count) {
  const CascadeId count = system.size();
  const auto width = static_cast<std::size_t>(count);
  std::vector<Rank> table(static_cast<std::size_t>(node_count) * width);

  auto replicate = [&](std::span<const Rank> row) {
    for (NodeId v = 0; v < node_count; ++v) {
      std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(v * width));
    }
  };

  if (const auto* h = std::get_if<priority::Homogeneous>(&kind)) {
    detail::check_global_ranks(h->ranks, count);
    replicate(h->ranks);
  } else if (const auto* m = std::get_if<priority::MDominant>(&kind)) {
    detail::check_global_ranks(m->ranks, count);
    std::vector<Rank> row(width);
    detail::regroup(m->ranks, system, Group::misinformation, row);
    replicate(row);
  } else if (const auto* p = std::get_if<priority::PDominant>(&kind)) {
    detail::check_global_ranks(p->ranks, count);
    std::vector<Rank> row(width);
    detail::regroup(p->ranks, system, Group::positive, row);
    replicate(row);
  } else if (const auto* r = std::get_if<priority::Random>(&kind)) {
    std::vector<Rank> row(width);
    for (NodeId v = 0; v < node_count; ++v) {
      std::iota(row.begin(), row.end(), 1);
      SplitMix64 rng(hash_combine(r->seed, static_cast<std::uint64_t>(v)));
      shuffle(std::span<Rank>(row), rng);
      std::copy(row.begin(), row.end(), table.begin() + static_cast<std::ptrdiff_t>(v * width));
    }
  } else {
    table = std::get<priority::Explicit>(kind).table;
  }
  return PriorityProfile(node_count, count, std::move(table));
}

// P-dominant reordering that keeps the within-group order at every node.
inline PriorityProfile induce_upper_priority(const PriorityProfile& p, const CascadeSystem& system) {
  std::vector<Rank> table(static_cast<std::size_t>(p.node_count()) *
                          static_cast<std::size_t>(p.cascade_count()));
  for (NodeId v = 0; v < p.node_count(); ++v) {
    detail::regroup(p.row(v), system, Group::positive,
                    std::span<Rank>(table).subspan(static_cast<std::size_t>(v) * static_cast<std::size_t>(p.cascade_count()),
                                                   static_cast<std::size_t>(p.cascade_count())));
  }
  return PriorityProfile(p.node_count(), p.cascade_count(), std::move(table));
}

// M-dominant counterpart of induce_upper_priority.
inline PriorityProfile induce_lower_priority(const PriorityProfile& p, const CascadeSystem& system) {
  std::vector<Rank> table(static_cast<std::size_t>(p.node_count()) *
                          static_cast<std::size_t>(p.cascade_count()));
  for (NodeId v = 0; v < p.node_count(); ++v) {
    detail::regroup(p.row(v), system, Group::misinformation,
                    std::span<Rank>(table).subspan(static_cast<std::size_t>(v) * static_cast<std::size_t>(p.cascade_count()),
                                                   static_cast<std::size_t>(p.cascade_count())));
  }
  return PriorityProfile(p.node_count(), p.cascade_count(), std::move(table));
}

enum class PriorityClass { homogeneous, m_dominant, p_dominant };

inline const char* to_string(PriorityClass c) {
  switch (c) {
    case PriorityClass::homogeneous: return "homogeneous";
    case PriorityClass::m_dominant: return "m_dominant";
    case PriorityClass::p_dominant: return "p_dominant";
  }
  return "?";
}

inline bool is_homogeneous(const PriorityProfile& p) {
  for (NodeId v = 1; v < p.node_count(); ++v) {
    if (!std::ranges::equal(p.row(v), p.row(0))) return false;
  }
  return true;
}

// Every member of `high` outranks every member of the other group at every node.
inline bool is_group_dominant(const PriorityProfile& p, const CascadeSystem& system, Group high) {
  for (NodeId v = 0; v < p.node_count(); ++v) {
    Rank lowest_high = p.cascade_count() + 1;
    Rank highest_low = 0;
    for (CascadeId c = 0; c < p.cascade_count(); ++c) {
      if (system.group(c) == high) {
        lowest_high = std::min(lowest_high, p.rank(v, c));
      } else {
        highest_low = std::max(highest_low, p.rank(v, c));
      }
    }
    if (highest_low > lowest_high) return false;
  }
  return true;
}

inline bool belongs_to(const PriorityProfile& p, const CascadeSystem& system, PriorityClass cls) {
  switch (cls) {
    case PriorityClass::homogeneous: return is_homogeneous(p);
    case PriorityClass::m_dominant: return is_group_dominant(p, system, Group::misinformation);
    case PriorityClass::p_dominant: return is_group_dominant(p, system, Group::positive);
  }
  return false;
}

// First special class the profile belongs to, if any (dominance checked first
// since those evaluators only need distances).
inline std::optional<PriorityClass> classify(const PriorityProfile& p, const CascadeSystem& system) {
  for (auto cls : {PriorityClass::m_dominant, PriorityClass::p_dominant, PriorityClass::homogeneous}) {
    if (belongs_to(p, system, cls)) return cls;
  }
  return std::nullopt;
}

}  // namespace mcc
