#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/diffusion.hpp"
#include "mcc/estimation.hpp"
#include "mcc/graph.hpp"
#include "mcc/hardness.hpp"
#include "mcc/instances.hpp"
#include "mcc/objective.hpp"
#include "mcc/rng.hpp"
#include "mcc/solvers.hpp"

namespace mcc::verify {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  std::string detail;
  double seconds = 0.0;
};

enum class ProfileKind { m_dominant, p_dominant, homogeneous, random };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::m_dominant: return "m-dominant";
    case ProfileKind::p_dominant: return "p-dominant";
    case ProfileKind::homogeneous: return "homogeneous";
    case ProfileKind::random: return "random";
  }
  return "?";
}

struct RandomInstanceShape {
  NodeId min_nodes = 4;
  NodeId max_nodes = 8;
  int max_edges = 12;
  std::vector<double> probabilities{0.3, 0.7, 1.0};
  int max_m_cascades = 2;
  int max_p_cascades = 2;
  int max_seed_size = 2;
  bool disjoint_seeds = false;
};

inline int uniform_int(SplitMix64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

inline PriorityProfile random_profile(ProfileKind kind, const CascadeSystem& sys, NodeId n, SplitMix64& rng) {
  const auto base = make_priority_profile(priority::Random{rng()}, sys, n);
  switch (kind) {
    case ProfileKind::m_dominant: return induce_lower_priority(base, sys);
    case ProfileKind::p_dominant: return induce_upper_priority(base, sys);
    case ProfileKind::homogeneous: {
      std::vector<Rank> ranks(static_cast<std::size_t>(sys.size()));
      std::iota(ranks.begin(), ranks.end(), 1);
      shuffle(std::span<Rank>(ranks), rng);
      return make_priority_profile(priority::Homogeneous{ranks}, sys, n);
    }
    case ProfileKind::random: return base;
  }
  return base;
}

// Random small instance; the last cascade is the unseeded P*.
inline Instance random_instance(const RandomInstanceShape& shape, ProfileKind kind, SplitMix64& rng) {
  const NodeId n = uniform_int(rng, shape.min_nodes, shape.max_nodes);
  const int max_m = std::min<std::int64_t>(shape.max_edges, static_cast<std::int64_t>(n) * (n - 1));
  const int m = uniform_int(rng, 0, max_m);
  auto edges = erdos_renyi(n, m, rng()).edges();
  for (auto& e : edges) e.prob = shape.probabilities[rng.below(shape.probabilities.size())];

  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  shuffle(std::span<NodeId>(order), rng);
  std::size_t next = 0;
  std::vector<Cascade> cascades;
  auto add = [&](Group g, int count) {
    for (int i = 0; i < count; ++i) {
      Cascade c{g, {}};
      const int size = uniform_int(rng, 1, shape.max_seed_size);
      for (int j = 0; j < size; ++j) {
        if (shape.disjoint_seeds) {
          if (next < order.size()) c.seeds.push_back(order[next++]);
        } else {
          c.seeds.push_back(static_cast<NodeId>(rng.below(static_cast<std::uint64_t>(n))));
        }
      }
      cascades.push_back(std::move(c));
    }
  };
  add(Group::misinformation, uniform_int(rng, 1, shape.max_m_cascades));
  add(Group::positive, uniform_int(rng, 0, shape.max_p_cascades));
  cascades.push_back(Cascade{Group::positive, {}});
  const auto star = static_cast<CascadeId>(cascades.size() - 1);

  Instance inst;
  inst.graph = DirectedGraph::from_edges(n, std::move(edges));
  inst.system = CascadeSystem(std::move(cascades), star, n);
  inst.profile = random_profile(kind, inst.system, n, rng);
  return inst;
}

// Up to `count` random nodes that seed no existing cascade, sorted.
inline std::vector<NodeId> random_candidates(const Instance& inst, std::size_t count, SplitMix64& rng) {
  const auto taken = inst.system.existing_seeds();
  std::vector<NodeId> free;
  for (NodeId v = 0; v < inst.graph.node_count(); ++v) {
    if (!std::binary_search(taken.begin(), taken.end(), v)) free.push_back(v);
  }
  shuffle(std::span<NodeId>(free), rng);
  if (free.size() > count) free.resize(count);
  std::sort(free.begin(), free.end());
  return free;
}

inline std::vector<NodeId> subset_of(std::span<const NodeId> pool, std::uint32_t mask) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if ((mask >> i) & 1U) out.push_back(pool[i]);
  }
  return out;
}

// Exact f (not-M-active mean) for every subset of `pool`, indexed by mask.
inline std::vector<double> exact_table(const Instance& inst, std::span<const NodeId> pool, int max_size = 64) {
  std::vector<double> table(std::size_t{1} << pool.size(), 0.0);
  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    if (std::popcount(mask) > max_size) continue;
    table[mask] = exact_f(inst.graph, inst.system, inst.profile, subset_of(pool, mask),
                          EvaluatorChoice::step_simulation)
                      .f_not_m;
  }
  return table;
}

namespace detail {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void note(SuiteResult& r, const std::string& msg) {
  if (r.violations <= 3) r.detail += (r.detail.empty() ? "" : "; ") + msg;
}

inline SuiteResult finish(SuiteResult r, const Timer& t) {
  r.seconds = t.seconds();
  r.passed = r.violations == 0 && r.checks > 0;
  return r;
}

}  // namespace detail

// Worked three-cascade trace and its priority flip.
inline SuiteResult example_trace() {
  detail::Timer timer;
  SuiteResult r;
  r.name = "example trace";
  auto check = [&](bool ok, const std::string& what) {
    ++r.checks;
    if (!ok) {
      ++r.violations;
      detail::note(r, what);
    }
  };
  {
    const auto inst = three_cascade_example(false);
    const auto out = simulate(inst.graph, inst.system, inst.profile, {}, LiveEdgeGraph::all(inst.graph));
    check(out.state[3] == 0 && out.activation_time[3] == 1, "v4 should be C1-active at step 1");
    check(out.state[4] == 2 && out.activation_time[4] == 1, "v5 should be C3-active at step 1");
    check(out.state[5] == 2 && out.activation_time[5] == 2, "v6 should be C3-active at step 2");
  }
  {
    const auto inst = three_cascade_example(true);
    const auto out = simulate(inst.graph, inst.system, inst.profile, {}, LiveEdgeGraph::all(inst.graph));
    check(out.state[3] == 1, "flipped: v4 should be C2-active");
    check(out.state[5] == 1, "flipped: v6 should be C2-active");
  }
  return detail::finish(std::move(r), timer);
}

// Fast BFS evaluator against the step simulator on every live graph.
inline SuiteResult oracle_equivalence(int graphs, std::uint64_t seed, int max_edges = 12) {
  detail::Timer timer;
  SuiteResult r;
  r.name = "oracle equivalence";
  SplitMix64 rng(seed);
  RandomInstanceShape shape;
  shape.min_nodes = 3;
  shape.max_nodes = 8;
  shape.max_edges = max_edges;
  shape.max_m_cascades = 2;
  shape.max_p_cascades = 2;
  for (int i = 0; i < graphs; ++i) {
    for (auto kind : {ProfileKind::m_dominant, ProfileKind::p_dominant, ProfileKind::homogeneous}) {
      const auto inst = random_instance(shape, kind, rng);
      const auto cls = classify(inst.profile, inst.system);
      const PriorityClass target = kind == ProfileKind::m_dominant   ? PriorityClass::m_dominant
                                   : kind == ProfileKind::p_dominant ? PriorityClass::p_dominant
                                                                     : PriorityClass::homogeneous;
      if (!cls || !belongs_to(inst.profile, inst.system, target)) {
        ++r.violations;
        detail::note(r, "generated profile not in its class");
        continue;
      }
      const auto star = random_candidates(inst, static_cast<std::size_t>(uniform_int(rng, 0, 2)), rng);
      Simulator sim(inst.graph, inst.system, inst.profile);
      FastEvaluator fast(inst.graph, inst.system, inst.profile, target);
      const auto m = static_cast<std::size_t>(inst.graph.edge_count());
      std::vector<std::uint8_t> kept(m);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        for (std::size_t e = 0; e < m; ++e) kept[e] = (mask >> e) & 1U;
        const LiveEdgeGraph live(kept);
        const auto a = sim.run(star, live);
        const auto b = fast.run(star, live);
        bool same = a == b;
        for (NodeId v = 0; same && v < inst.graph.node_count(); ++v) {
          same = (sim.state(v) != kNoCascade && inst.system.is_misinformation(sim.state(v))) == fast.m_active(v);
        }
        ++r.checks;
        if (!same) {
          ++r.violations;
          std::ostringstream os;
          os << "graph " << i << " (" << to_string(target) << ") mask " << mask;
          detail::note(r, os.str());
        }
      }
    }
  }
  return detail::finish(std::move(r), timer);
}

// Monotone nondecreasing and submodular exact f under the three special classes.
inline SuiteResult monotone_submodular(int instances, std::uint64_t seed, double tol = 1e-9) {
  detail::Timer timer;
  SuiteResult r;
  r.name = "monotone and submodular";
  SplitMix64 rng(seed);
  RandomInstanceShape shape;
  shape.min_nodes = 8;
  shape.max_nodes = 10;
  shape.max_edges = 14;
  shape.disjoint_seeds = true;
  for (int i = 0; i < instances; ++i) {
    for (auto kind : {ProfileKind::m_dominant, ProfileKind::p_dominant, ProfileKind::homogeneous}) {
      const auto inst = random_instance(shape, kind, rng);
      const auto pool = random_candidates(inst, 6, rng);
      const auto f = exact_table(inst, pool);
      const std::uint32_t full = (1U << pool.size()) - 1;
      for (std::uint32_t t = 0; t <= full; ++t) {
        for (std::size_t x = 0; x < pool.size(); ++x) {
          const std::uint32_t bit = 1U << x;
          if (t & bit) continue;
          const double gain_t = f[t | bit] - f[t];
          ++r.checks;
          if (gain_t < -tol) {
            ++r.violations;
            std::ostringstream os;
            os << "instance " << i << " (" << to_string(kind) << ") not monotone at mask " << t << " + " << x;
            detail::note(r, os.str());
          }
          // every S subset of T
          for (std::uint32_t s = t;; s = (s - 1) & t) {
            ++r.checks;
            if (f[s | bit] - f[s] < gain_t - tol) {
              ++r.violations;
              std::ostringstream os;
              os << "instance " << i << " (" << to_string(kind) << ") not submodular: S=" << s << " T=" << t
                 << " x=" << x;
              detail::note(r, os.str());
            }
            if (s == 0) break;
          }
        }
      }
    }
  }
  return detail::finish(std::move(r), timer);
}

// f_upper >= f >= f_lower under random priorities, all subsets of size <= 3.
inline SuiteResult sandwich_bounds(int instances, std::uint64_t seed, double tol = 1e-9) {
  detail::Timer timer;
  SuiteResult r;
  r.name = "sandwich bounds";
  SplitMix64 rng(seed);
  RandomInstanceShape shape;
  shape.min_nodes = 8;
  shape.max_nodes = 10;
  shape.max_edges = 14;
  shape.disjoint_seeds = true;
  for (int i = 0; i < instances; ++i) {
    const auto inst = random_instance(shape, ProfileKind::random, rng);
    const auto pool = random_candidates(inst, 6, rng);
    Instance upper{inst.graph, inst.system, induce_upper_priority(inst.profile, inst.system)};
    Instance lower{inst.graph, inst.system, induce_lower_priority(inst.profile, inst.system)};
    const auto f = exact_table(inst, pool, 3);
    const auto fu = exact_table(upper, pool, 3);
    const auto fl = exact_table(lower, pool, 3);
    for (std::uint32_t s = 0; s < f.size(); ++s) {
      if (std::popcount(s) > 3) continue;
      ++r.checks;
      if (fu[s] < f[s] - tol || f[s] < fl[s] - tol) {
        ++r.violations;
        std::ostringstream os;
        os << "instance " << i << " mask " << s << ": " << fu[s] << " / " << f[s] << " / " << fl[s];
        detail::note(r, os.str());
      }
    }
  }
  return detail::finish(std::move(r), timer);
}

// Exact values on the hand-built instance where P* seeding backfires.
inline SuiteResult non_submodular_witness() {
  detail::Timer timer;
  SuiteResult r;
  r.name = "non-submodularity witness";
  const auto inst = non_submodular_example();
  auto f = [&](std::vector<NodeId> s) { return exact_f(inst.graph, inst.system, inst.profile, s).f_not_m; };
  const double empty = f({});
  const double v2 = f({1});
  const double v4 = f({3});
  const double both = f({1, 3});
  auto check = [&](bool ok, const std::string& what) {
    ++r.checks;
    if (!ok) {
      ++r.violations;
      detail::note(r, what);
    }
  };
  check(empty == 5.0 && v2 == 4.0 && v4 == 4.0 && both == 4.0, "expected 5, 4, 4, 4");
  check(v2 < empty, "f({v2}) < f(empty)");
  check(v2 + v4 < empty + both, "f({v2}) + f({v4}) < f(empty) + f({v2,v4})");
  std::ostringstream os;
  os << "f(empty)=" << empty << " f({v2})=" << v2 << " f({v4})=" << v4 << " f({v2,v4})=" << both;
  if (r.violations == 0) r.detail = os.str();
  return detail::finish(std::move(r), timer);
}

// f_M(selection) = 3 + cost(selection) over every small set-cover instance.
inline SuiteResult reduction_identity(int max_x = 3, int max_y = 2, int max_sets = 3) {
  detail::Timer timer;
  SuiteResult r;
  r.name = "reduction identity";
  for (int nx = 0; nx <= max_x; ++nx) {
    for (int ny = 0; ny <= max_y; ++ny) {
      const int universe = nx + ny;
      const std::uint32_t subsets = 1U << universe;
      for (int m = 1; m <= max_sets; ++m) {
        std::vector<std::uint32_t> choice(static_cast<std::size_t>(m), 0);
        while (true) {
          PspcInstance inst{nx, ny, {}};
          for (std::uint32_t c : choice) {
            std::vector<PspcElement> set;
            for (int e = 0; e < universe; ++e) {
              if ((c >> e) & 1U) {
                set.push_back(e < nx ? PspcElement{PspcElement::Side::x, e}
                                     : PspcElement{PspcElement::Side::y, e - nx});
              }
            }
            inst.phi.push_back(std::move(set));
          }
          for (std::uint32_t sel = 0; sel < (1U << m); ++sel) {
            std::vector<int> selection;
            for (int i = 0; i < m; ++i) {
              if ((sel >> i) & 1U) selection.push_back(i);
            }
            const auto id = verify_reduction_identity(inst, selection);
            ++r.checks;
            if (!id.ok) {
              ++r.violations;
              std::ostringstream os;
              os << "|X|=" << nx << " |Y|=" << ny << " m=" << m << " sel=" << sel << ": " << id.lhs
                 << " != " << id.rhs;
              detail::note(r, os.str());
            }
          }
          std::size_t pos = 0;
          while (pos < choice.size() && ++choice[pos] == subsets) choice[pos++] = 0;
          if (pos == choice.size()) break;
        }
      }
    }
  }
  return detail::finish(std::move(r), timer);
}

// Greedy on exact f reaches (1 - 1/e) of the optimum on submodular classes,
// and the sandwich certificate holds under random priorities.
inline SuiteResult greedy_guarantee(int instances, std::uint64_t seed, double tol = 1e-9) {
  detail::Timer timer;
  SuiteResult r;
  r.name = "greedy guarantee";
  const double factor = 1.0 - 1.0 / std::exp(1.0);
  SplitMix64 rng(seed);
  RandomInstanceShape shape;
  shape.min_nodes = 8;
  shape.max_nodes = 13;
  shape.max_edges = 14;
  shape.disjoint_seeds = true;
  double worst_ratio = 1.0;
  for (int i = 0; i < instances; ++i) {
    const auto kind = static_cast<ProfileKind>(i % 3);
    const auto inst = random_instance(shape, kind, rng);
    const auto pool = random_candidates(inst, 10, rng);
    const int k = uniform_int(rng, 1, 3);
    ExactObjective f(inst.graph, inst.system, inst.profile);
    const auto g = greedy(f, pool, k);
    const auto opt = brute_force_opt(f, pool, k);
    ++r.checks;
    if (*g.objective_value < factor * *opt.objective_value - tol) {
      ++r.violations;
      std::ostringstream os;
      os << "instance " << i << " (" << to_string(kind) << "): greedy " << *g.objective_value << " opt "
         << *opt.objective_value;
      detail::note(r, os.str());
    }

    const auto rinst = random_instance(shape, ProfileKind::random, rng);
    const auto rpool = random_candidates(rinst, 10, rng);
    ExactObjective rf(rinst.graph, rinst.system, rinst.profile);
    ExactObjective ru(rinst.graph, rinst.system, induce_upper_priority(rinst.profile, rinst.system));
    ExactObjective rl(rinst.graph, rinst.system, induce_lower_priority(rinst.profile, rinst.system));
    const auto sw = sandwich_detailed(rf, ru, rl, rpool, k);
    const auto ropt = brute_force_opt(rf, rpool, k);
    const double ratio = sw.result.bound_ratio.value_or(0.0);
    worst_ratio = std::min(worst_ratio, ratio);
    ++r.checks;
    if (!(ratio > 0.0 && ratio <= 1.0 + tol) ||
        *sw.result.objective_value < ratio * factor * *ropt.objective_value - tol) {
      ++r.violations;
      std::ostringstream os;
      os << "instance " << i << " (random): sandwich " << *sw.result.objective_value << " ratio " << ratio
         << " opt " << *ropt.objective_value;
      detail::note(r, os.str());
    }
  }
  if (r.violations == 0) {
    std::ostringstream os;
    os << "smallest bound ratio " << worst_ratio;
    r.detail = os.str();
  }
  return detail::finish(std::move(r), timer);
}

// The fixed instance used for convergence checks: 10 nodes, uncertain
// edges only, random priorities.
inline Instance convergence_instance() {
  std::vector<Edge> edges{{0, 2, 0.5, {}}, {1, 2, 0.4, {}}, {2, 3, 0.6, {}}, {2, 4, 0.3, {}},
                          {3, 5, 0.7, {}}, {4, 5, 0.5, {}}, {5, 6, 0.8, {}}, {6, 7, 0.4, {}},
                          {1, 8, 0.6, {}}, {8, 9, 0.5, {}}, {9, 7, 0.3, {}}, {3, 9, 0.4, {}}};
  Instance inst;
  inst.graph = DirectedGraph::from_edges(10, std::move(edges));
  inst.system = CascadeSystem({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {1}},
                               Cascade{Group::positive, {}}},
                              2, 10);
  inst.profile = make_priority_profile(priority::Random{2024}, inst.system, 10);
  return inst;
}

// Monte Carlo estimates against the exact value, and the 1/sqrt(R) rate.
inline SuiteResult estimator_convergence(int runs, std::int64_t replications, std::uint64_t seed) {
  detail::Timer timer;
  SuiteResult r;
  r.name = "estimator convergence";
  const auto inst = convergence_instance();
  const std::vector<NodeId> star{4};
  const auto exact = exact_f(inst.graph, inst.system, inst.profile, star);
  int within = 0;
  double se_sum = 0.0;
  for (int i = 0; i < runs; ++i) {
    EstimatorConfig cfg;
    cfg.replications = replications;
    cfg.base_seed = hash_combine(seed, static_cast<std::uint64_t>(i));
    const auto est = estimate(inst.graph, inst.system, inst.profile, star, cfg);
    se_sum += est.std_error;
    within += std::abs(est.mean_m_active - exact.f_m) <= 4.0 * est.std_error;
  }
  ++r.checks;
  const int needed = static_cast<int>(std::ceil(0.99 * runs));
  if (within < needed) ++r.violations;

  EstimatorConfig big;
  big.replications = 4 * replications;
  big.base_seed = hash_combine(seed, 0xb16ULL);
  const auto quad = estimate(inst.graph, inst.system, inst.profile, star, big);
  const double ratio = (se_sum / runs) / quad.std_error;
  ++r.checks;
  if (!(ratio >= 1.6 && ratio <= 2.4)) ++r.violations;

  std::ostringstream os;
  os << within << "/" << runs << " runs within 4 SE of exact f_M=" << exact.f_m << "; SE ratio " << ratio;
  r.detail = os.str();
  return detail::finish(std::move(r), timer);
}

}  // namespace mcc::verify
