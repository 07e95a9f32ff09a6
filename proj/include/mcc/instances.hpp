#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/graph.hpp"

namespace mcc {

// A fully specified diffusion instance.
struct Instance {
  DirectedGraph graph;
  CascadeSystem system;
  PriorityProfile profile;
};

inline DirectedGraph deterministic_graph(NodeId n, std::initializer_list<std::pair<NodeId, NodeId>> arcs,
                                         double p = 1.0) {
  std::vector<Edge> edges;
  for (auto [u, v] : arcs) edges.push_back(Edge{u, v, p, std::nullopt});
  return DirectedGraph::from_edges(n, std::move(edges));
}

// Three cascades on six nodes v1..v6 (ids 0..5):
// v1->v4, v2->v4, v3->v5, v4->v6, v5->v6, all p = 1, seeds C1={v1},
// C2={v2}, C3={v3}. C1 is the misinformation cascade; P* (id 3) is unseeded
// and ranked lowest everywhere. At v4, C1 > C2 unless `flip_v4`; at v6,
// C2 > C3 > C1.
inline Instance three_cascade_example(bool flip_v4 = false) {
  Instance inst;
  inst.graph = deterministic_graph(6, {{0, 3}, {1, 3}, {2, 4}, {3, 5}, {4, 5}});
  inst.system = CascadeSystem({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {1}},
                               Cascade{Group::positive, {2}}, Cascade{Group::positive, {}}},
                              3, 6);
  std::vector<Rank> table;
  for (NodeId v = 0; v < 6; ++v) {
    if (v == 3) {
      table.insert(table.end(), flip_v4 ? std::initializer_list<Rank>{3, 4, 2, 1}
                                        : std::initializer_list<Rank>{4, 3, 2, 1});
    } else if (v == 5) {
      table.insert(table.end(), {2, 4, 3, 1});
    } else {
      table.insert(table.end(), {4, 3, 2, 1});
    }
  }
  inst.profile = PriorityProfile(6, 4, std::move(table));
  return inst;
}

// Seven nodes v1..v7 (ids 0..6), p = 1, P1 = {v1}, M1 = {v7}:
// v1->v3, v2->v3, v4->v3, v3->v5, v7->v6, v6->v5.
// At v3 P* > P1 > M1; at v5 P1 > M1 > P*. Seeding v2 or v4 lets P* capture
// v3, which then loses v5 to M1: f(empty) = 5, f({v2}) = f({v4}) =
// f({v2,v4}) = 4.
inline Instance non_submodular_example() {
  Instance inst;
  inst.graph = deterministic_graph(7, {{0, 2}, {1, 2}, {3, 2}, {2, 4}, {6, 5}, {5, 4}});
  // ids: 0 = P1, 1 = M1, 2 = P*
  inst.system = CascadeSystem({Cascade{Group::positive, {0}}, Cascade{Group::misinformation, {6}},
                               Cascade{Group::positive, {}}},
                              2, 7);
  std::vector<Rank> table;
  for (NodeId v = 0; v < 7; ++v) {
    if (v == 2) {
      table.insert(table.end(), {2, 1, 3});
    } else {
      table.insert(table.end(), {3, 2, 1});
    }
  }
  inst.profile = PriorityProfile(7, 3, std::move(table));
  return inst;
}

}  // namespace mcc
