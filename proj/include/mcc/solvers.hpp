#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/error.hpp"
#include "mcc/graph.hpp"
#include "mcc/objective.hpp"
#include "mcc/rng.hpp"

namespace mcc {

struct GreedyStep {
  NodeId node = 0;
  double gain = 0.0;
  double value = 0.0;  // h(U_i)
};

struct SolveResult {
  std::vector<NodeId> seeds;
  std::optional<double> objective_value;
  // Greedy only: h(empty set) and one entry per iteration.
  std::optional<double> initial_value;
  std::vector<GreedyStep> trace;
  // Sandwich only: f(S_upper) / f_upper(S_upper).
  std::optional<double> bound_ratio;
};

namespace detail {

inline std::vector<NodeId> sorted_unique(std::span<const NodeId> nodes) {
  std::vector<NodeId> out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// Best prefix U_i (0 <= i <= k) of a greedy trace. Earliest prefix wins ties.
inline SolveResult best_prefix(const SolveResult& run, int k) {
  SolveResult out;
  out.initial_value = run.initial_value;
  const auto steps = std::min<std::size_t>(run.trace.size(), static_cast<std::size_t>(std::max(k, 0)));
  out.trace.assign(run.trace.begin(), run.trace.begin() + static_cast<std::ptrdiff_t>(steps));
  std::size_t best_len = 0;
  double best = run.initial_value.value_or(0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    if (out.trace[i].value > best) {
      best = out.trace[i].value;
      best_len = i + 1;
    }
  }
  for (std::size_t i = 0; i < best_len; ++i) out.seeds.push_back(out.trace[i].node);
  out.objective_value = best;
  return out;
}

// Greedy scheme: k rounds of argmax marginal gain over the remaining
// candidates (smallest id on ties), then the best prefix including the empty
// set, since h need not be monotone.
inline SolveResult greedy(SetFunction& h, std::span<const NodeId> candidates, int k) {
  const auto pool = detail::sorted_unique(candidates);
  SolveResult run;
  run.initial_value = h.value({});
  std::vector<NodeId> chosen;
  std::vector<NodeId> remaining = pool;
  std::vector<double> gains;
  for (int i = 0; i < k && !remaining.empty(); ++i) {
    gains.assign(remaining.size(), 0.0);
    h.marginal_gains(chosen, remaining, gains);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < remaining.size(); ++j) {
      if (gains[j] > gains[arg]) arg = j;
    }
    chosen.push_back(remaining[arg]);
    const double gain = gains[arg];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(arg));
    run.trace.push_back(GreedyStep{chosen.back(), gain, h.value(chosen)});
  }
  return best_prefix(run, k);
}

struct SandwichRuns {
  SolveResult upper;  // greedy on f_upper
  SolveResult lower;  // greedy on f_lower
  SolveResult plain;  // greedy on f
};

enum class SandwichPick { plain, upper, lower };

inline const char* to_string(SandwichPick p) {
  switch (p) {
    case SandwichPick::plain: return "f";
    case SandwichPick::upper: return "upper";
    case SandwichPick::lower: return "lower";
  }
  return "?";
}

struct SandwichChoice {
  SolveResult result;
  SandwichPick pick = SandwichPick::plain;
  double f_of_upper = 0.0;
  double f_of_lower = 0.0;
};

// Picks argmax_f over the three greedy answers (the plain run wins ties, then
// upper, then lower) and attaches f(S_upper) / f_upper(S_upper).
inline SandwichChoice sandwich_select(SetFunction& f, const SandwichRuns& runs) {
  SandwichChoice out;
  out.f_of_upper = f.value(runs.upper.seeds);
  out.f_of_lower = f.value(runs.lower.seeds);
  const double f_plain = runs.plain.objective_value.value_or(f.value(runs.plain.seeds));
  out.result = runs.plain;
  out.result.objective_value = f_plain;
  double best = f_plain;
  if (out.f_of_upper > best) {
    best = out.f_of_upper;
    out.result = runs.upper;
    out.pick = SandwichPick::upper;
  }
  if (out.f_of_lower > best) {
    best = out.f_of_lower;
    out.result = runs.lower;
    out.pick = SandwichPick::lower;
  }
  out.result.objective_value = best;
  const double upper_value = runs.upper.objective_value.value_or(0.0);
  if (upper_value > 0.0) out.result.bound_ratio = out.f_of_upper / upper_value;
  return out;
}

inline SandwichChoice sandwich_detailed(SetFunction& f, SetFunction& f_upper, SetFunction& f_lower,
                                        std::span<const NodeId> candidates, int k) {
  SandwichRuns runs{greedy(f_upper, candidates, k), greedy(f_lower, candidates, k),
                    greedy(f, candidates, k)};
  return sandwich_select(f, runs);
}

inline SolveResult sandwich(SetFunction& f, SetFunction& f_upper, SetFunction& f_lower,
                            std::span<const NodeId> candidates, int k) {
  return sandwich_detailed(f, f_upper, f_lower, candidates, k).result;
}

// Top-k candidates by out-weight (sum of out-edge probabilities), ties by id.
inline SolveResult baseline_high_weight(const DirectedGraph& g, std::span<const NodeId> candidates,
                                        int k, std::span<const NodeId> exclude = {}) {
  auto pool = detail::sorted_unique(candidates);
  std::erase_if(pool, [&](NodeId v) { return std::find(exclude.begin(), exclude.end(), v) != exclude.end(); });
  std::vector<std::pair<double, NodeId>> ranked;
  ranked.reserve(pool.size());
  for (NodeId v : pool) ranked.emplace_back(g.out_weight(v), v);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  SolveResult out;
  for (std::size_t i = 0; i < ranked.size() && static_cast<int>(i) < k; ++i) {
    out.seeds.push_back(ranked[i].second);
  }
  return out;
}

// Heaviest out-neighbours of misinformation seeds (within the candidate set,
// excluding existing seeds); any shortfall is filled by high weight.
inline SolveResult baseline_proximity(const DirectedGraph& g, const CascadeSystem& system,
                                      std::span<const NodeId> candidates, int k) {
  const auto pool_all = detail::sorted_unique(candidates);
  const auto existing = system.existing_seeds();
  std::vector<NodeId> near;
  for (CascadeId c = 0; c < system.size(); ++c) {
    if (!system.is_misinformation(c)) continue;
    for (NodeId s : system[c].seeds) {
      auto [first, last] = g.out_range(s);
      for (EdgeId e = first; e < last; ++e) near.push_back(g.target(e));
    }
  }
  near = detail::sorted_unique(near);
  std::erase_if(near, [&](NodeId v) {
    return !std::binary_search(pool_all.begin(), pool_all.end(), v) ||
           std::binary_search(existing.begin(), existing.end(), v);
  });
  SolveResult out = baseline_high_weight(g, near, k);
  if (static_cast<int>(out.seeds.size()) < k) {
    const auto fill = baseline_high_weight(g, pool_all, k - static_cast<int>(out.seeds.size()), out.seeds);
    out.seeds.insert(out.seeds.end(), fill.seeds.begin(), fill.seeds.end());
  }
  return out;
}

// One uniformly random k-subset of the candidates (all of them if k >= |V*|).
inline SolveResult baseline_random(std::span<const NodeId> candidates, int k, std::uint64_t seed) {
  auto pool = detail::sorted_unique(candidates);
  SplitMix64 rng(seed);
  const auto take = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(std::max(k, 0)));
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  std::sort(pool.begin(), pool.end());
  SolveResult out;
  out.seeds = std::move(pool);
  return out;
}

struct RandomBaselineSummary {
  double mean = 0.0;
  double std_error = 0.0;  // across trials
  int trials = 0;
};

// Mean of h over `trials` independent random k-subsets; trial t uses seed
// hash(seed, t).
inline RandomBaselineSummary random_baseline_mean(SetFunction& h, std::span<const NodeId> candidates,
                                                  int k, std::uint64_t seed, int trials) {
  if (trials < 1) throw ValidationError("random baseline needs at least one trial");
  long double sum = 0;
  long double sum_sq = 0;
  for (int t = 0; t < trials; ++t) {
    const auto pick = baseline_random(candidates, k, hash_combine(seed, static_cast<std::uint64_t>(t)));
    const long double v = h.value(pick.seeds);
    sum += v;
    sum_sq += v * v;
  }
  RandomBaselineSummary out;
  out.trials = trials;
  const long double mean = sum / trials;
  out.mean = static_cast<double>(mean);
  if (trials > 1) {
    long double var = (sum_sq - sum * mean) / (trials - 1);
    if (var < 0) var = 0;
    out.std_error = static_cast<double>(std::sqrt(var / trials));
  }
  return out;
}

inline constexpr double kBruteForceLimit = 1e6;

// Exhaustive maximum over subsets of size <= k, smaller sets and
// lexicographically earlier sets winning ties.
inline SolveResult brute_force_opt(SetFunction& h, std::span<const NodeId> candidates, int k) {
  const auto pool = detail::sorted_unique(candidates);
  const int n = static_cast<int>(pool.size());
  k = std::clamp(k, 0, n);
  double count = 0;
  double binom = 1;
  for (int i = 0; i <= k; ++i) {
    count += binom;
    binom = binom * (n - i) / (i + 1);
  }
  if (count > kBruteForceLimit) {
    throw CapacityError("brute force over " + std::to_string(static_cast<long long>(count)) +
                        " subsets exceeds the limit of 1000000");
  }
  SolveResult out;
  out.objective_value = h.value({});
  std::vector<int> idx;
  std::vector<NodeId> subset;
  for (int size = 1; size <= k; ++size) {
    idx.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      subset.clear();
      for (int i : idx) subset.push_back(pool[static_cast<std::size_t>(i)]);
      const double v = h.value(subset);
      if (v > *out.objective_value) {
        out.objective_value = v;
        out.seeds = subset;
      }
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return out;
}

}  // namespace mcc
