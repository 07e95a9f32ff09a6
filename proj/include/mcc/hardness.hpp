#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "mcc/cascade.hpp"
#include "mcc/diffusion.hpp"
#include "mcc/error.hpp"
#include "mcc/graph.hpp"

namespace mcc {

// Element of a positive-negative partial set cover instance: x_i or y_i
// (0-based index).
struct PspcElement {
  enum class Side : std::uint8_t { x, y } side = Side::x;
  int index = 0;

  friend bool operator==(const PspcElement&, const PspcElement&) = default;
  friend auto operator<=>(const PspcElement&, const PspcElement&) = default;
};

// X = {x_0..x_{x_count-1}}, Y = {y_0..y_{y_count-1}} (disjoint by
// construction), and the family Phi of subsets of X u Y.
struct PspcInstance {
  int x_count = 0;
  int y_count = 0;
  std::vector<std::vector<PspcElement>> phi;
};

inline void validate(const PspcInstance& inst) {
  if (inst.x_count < 0 || inst.y_count < 0) throw ValidationError("negative element count");
  for (std::size_t i = 0; i < inst.phi.size(); ++i) {
    for (const auto& el : inst.phi[i]) {
      const int limit = el.side == PspcElement::Side::x ? inst.x_count : inst.y_count;
      if (el.index < 0 || el.index >= limit) {
        throw ValidationError("set " + std::to_string(i + 1) + " names an element outside X u Y");
      }
    }
  }
}

// Text form: "|X| |Y| m" then m lines of x<i>/y<j> tokens (1-based); a blank
// line is an empty set.
inline PspcInstance parse_pspc(std::istream& in) {
  PspcInstance inst;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first != std::string::npos && line[first] == '#') continue;
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& why) {
    throw ParseError("line " + std::to_string(line_no) + ": " + why);
  };
  // Header: skip leading blank lines.
  do {
    if (!next_line()) throw ParseError("empty instance");
  } while (line.find_first_not_of(" \t\r") == std::string::npos);
  long long m = 0;
  {
    std::istringstream header(line);
    long long x = -1, y = -1;
    if (!(header >> x >> y >> m) || x < 0 || y < 0 || m < 0) fail("expected header '|X| |Y| m'");
    std::string extra;
    if (header >> extra) fail("unexpected token '" + extra + "' in header");
    inst.x_count = static_cast<int>(x);
    inst.y_count = static_cast<int>(y);
  }
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) {
      if (in.eof()) {
        line.clear();  // trailing empty sets may be omitted at end of file
      } else {
        fail("read error");
      }
    }
    std::istringstream fields(line);
    std::vector<PspcElement> set;
    for (std::string tok; fields >> tok;) {
      if (tok.size() < 2 || (tok[0] != 'x' && tok[0] != 'y')) fail("bad element token '" + tok + "'");
      std::size_t used = 0;
      int idx = 0;
      try {
        idx = std::stoi(tok.substr(1), &used);
      } catch (const std::exception&) {
        fail("bad element token '" + tok + "'");
      }
      if (used != tok.size() - 1 || idx < 1) fail("bad element token '" + tok + "'");
      set.push_back(PspcElement{tok[0] == 'x' ? PspcElement::Side::x : PspcElement::Side::y, idx - 1});
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    inst.phi.push_back(std::move(set));
  }
  while (next_line()) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) fail("more sets than the header declares");
  }
  validate(inst);
  return inst;
}

// |X \ U| + |Y n U| where U is the union of the selected sets (indices into phi).
inline int pspc_cost(const PspcInstance& inst, std::span<const int> selection) {
  std::vector<char> covered_x(static_cast<std::size_t>(inst.x_count));
  std::vector<char> covered_y(static_cast<std::size_t>(inst.y_count));
  for (int s : selection) {
    if (s < 0 || s >= static_cast<int>(inst.phi.size())) throw ValidationError("selection index out of range");
    for (const auto& el : inst.phi[static_cast<std::size_t>(s)]) {
      (el.side == PspcElement::Side::x ? covered_x : covered_y)[static_cast<std::size_t>(el.index)] = 1;
    }
  }
  const auto uncovered_x = std::count(covered_x.begin(), covered_x.end(), 0);
  const auto covered_y_count = std::count(covered_y.begin(), covered_y.end(), 1);
  return static_cast<int>(uncovered_x + covered_y_count);
}

enum class ReductionRole : std::uint8_t { x, y, z, phi, a, b1, b2, c };

inline const char* to_string(ReductionRole r) {
  switch (r) {
    case ReductionRole::x: return "x";
    case ReductionRole::y: return "y";
    case ReductionRole::z: return "z";
    case ReductionRole::phi: return "phi";
    case ReductionRole::a: return "a";
    case ReductionRole::b1: return "b1";
    case ReductionRole::b2: return "b2";
    case ReductionRole::c: return "c";
  }
  return "?";
}

struct NodeRole {
  ReductionRole role = ReductionRole::a;
  int index = 0;  // element / set index for x, y, z, phi
};

// Min-M instance built from a PSPC instance. Node layout:
// x_0.., y_0.., z_0.., phi_0.., a, b1, b2, c.
struct ReducedInstance {
  DirectedGraph graph;
  CascadeSystem system;  // 0 = M1 {b1, b2}, 1 = P1 {a}, 2 = P*
  PriorityProfile profile;
  std::vector<NodeId> candidates;  // the phi nodes
  int budget = 0;
  std::vector<NodeRole> roles;

  static constexpr CascadeId kM1 = 0;
  static constexpr CascadeId kP1 = 1;
  static constexpr CascadeId kStar = 2;

  NodeId x_node(int i) const { return i; }
  NodeId y_node(int i) const { return x_count + i; }
  NodeId z_node(int i) const { return x_count + y_count + i; }
  NodeId phi_node(int i) const { return x_count + 2 * y_count + i; }
  NodeId a_node() const { return x_count + 2 * y_count + phi_count; }
  NodeId b1_node() const { return a_node() + 1; }
  NodeId b2_node() const { return a_node() + 2; }
  NodeId c_node() const { return a_node() + 3; }

  int x_count = 0;
  int y_count = 0;
  int phi_count = 0;
};

inline ReducedInstance build_reduction(const PspcInstance& inst) {
  validate(inst);
  ReducedInstance r;
  r.x_count = inst.x_count;
  r.y_count = inst.y_count;
  r.phi_count = static_cast<int>(inst.phi.size());
  const NodeId n = r.x_count + 2 * r.y_count + r.phi_count + 4;

  r.roles.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < r.x_count; ++i) r.roles[static_cast<std::size_t>(r.x_node(i))] = {ReductionRole::x, i};
  for (int i = 0; i < r.y_count; ++i) {
    r.roles[static_cast<std::size_t>(r.y_node(i))] = {ReductionRole::y, i};
    r.roles[static_cast<std::size_t>(r.z_node(i))] = {ReductionRole::z, i};
  }
  for (int i = 0; i < r.phi_count; ++i) r.roles[static_cast<std::size_t>(r.phi_node(i))] = {ReductionRole::phi, i};
  r.roles[static_cast<std::size_t>(r.a_node())] = {ReductionRole::a, 0};
  r.roles[static_cast<std::size_t>(r.b1_node())] = {ReductionRole::b1, 0};
  r.roles[static_cast<std::size_t>(r.b2_node())] = {ReductionRole::b2, 0};
  r.roles[static_cast<std::size_t>(r.c_node())] = {ReductionRole::c, 0};

  std::vector<Edge> edges;
  auto arc = [&](NodeId u, NodeId v) { edges.push_back(Edge{u, v, 1.0, std::nullopt}); };
  for (int i = 0; i < r.phi_count; ++i) {
    for (const auto& el : inst.phi[static_cast<std::size_t>(i)]) {
      arc(r.phi_node(i), el.side == PspcElement::Side::x ? r.x_node(el.index) : r.y_node(el.index));
    }
  }
  for (int i = 0; i < r.y_count; ++i) {
    arc(r.y_node(i), r.z_node(i));
    arc(r.c_node(), r.z_node(i));
    arc(r.a_node(), r.y_node(i));
  }
  for (int i = 0; i < r.x_count; ++i) arc(r.b2_node(), r.x_node(i));
  arc(r.b1_node(), r.c_node());
  r.graph = DirectedGraph::from_edges(n, std::move(edges));

  r.system = CascadeSystem({Cascade{Group::misinformation, {r.b1_node(), r.b2_node()}},
                            Cascade{Group::positive, {r.a_node()}}, Cascade{Group::positive, {}}},
                           ReducedInstance::kStar, n);

  // Default P* > P1 > M1; at z nodes P1 > M1 > P*.
  std::vector<Rank> table;
  table.reserve(static_cast<std::size_t>(n) * 3);
  for (NodeId v = 0; v < n; ++v) {
    if (r.roles[static_cast<std::size_t>(v)].role == ReductionRole::z) {
      table.insert(table.end(), {2, 3, 1});
    } else {
      table.insert(table.end(), {1, 2, 3});
    }
  }
  r.profile = PriorityProfile(n, 3, std::move(table));
  for (int i = 0; i < r.phi_count; ++i) r.candidates.push_back(r.phi_node(i));
  r.budget = r.phi_count;
  return r;
}

struct IdentityCheck {
  std::int64_t lhs = 0;  // f_M on the reduced instance
  int rhs = 0;           // 3 + g(selection)
  bool ok = false;
};

inline IdentityCheck verify_reduction_identity(const PspcInstance& inst, std::span<const int> selection) {
  const auto reduced = build_reduction(inst);
  std::vector<NodeId> seeds;
  for (int s : selection) {
    if (s < 0 || s >= reduced.phi_count) throw ValidationError("selection index out of range");
    seeds.push_back(reduced.phi_node(s));
  }
  const auto outcome = simulate(reduced.graph, reduced.system, reduced.profile, seeds,
                                LiveEdgeGraph::all(reduced.graph));
  IdentityCheck out;
  out.lhs = outcome.m_active_count;
  out.rhs = 3 + pspc_cost(inst, selection);
  out.ok = out.lhs == out.rhs;
  return out;
}

}  // namespace mcc
