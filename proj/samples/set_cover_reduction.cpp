// Builds the blocking instance for a small set-cover input and prints, for
// every selection of sets, the misinformed-node count next to the cover cost.
#include <cstdio>
#include <sstream>
#include <vector>

#include "mcc/hardness.hpp"

int main() {
  using namespace mcc;
  // |X| |Y| m, then one line per set.
  std::istringstream text("3 2 3\nx1 x2\nx3 y1\nx2 y2\n");
  const auto inst = parse_pspc(text);
  const auto reduced = build_reduction(inst);
  std::printf("reduced graph: %d nodes, %lld edges, budget %d\n", reduced.graph.node_count(),
              static_cast<long long>(reduced.graph.edge_count()), reduced.budget);

  const int m = static_cast<int>(inst.phi.size());
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> selection;
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i)) selection.push_back(i);
    }
    const auto check = verify_reduction_identity(inst, selection);
    std::printf("sets {");
    for (std::size_t i = 0; i < selection.size(); ++i) std::printf("%s%d", i ? "," : "", selection[i] + 1);
    std::printf("}: misinformed %lld, 3 + cost %d%s\n", static_cast<long long>(check.lhs), check.rhs,
                check.ok ? "" : "  MISMATCH");
  }
  return 0;
}
