#include "mcc/cascade.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace mcc {
namespace {

// Cascades: 0 = P1, 1 = P2, 2 = P3, 3 = M1, 4 = M2, 5 = P* (unseeded).
CascadeSystem five_plus_star() {
  return CascadeSystem({Cascade{Group::positive, {0}}, Cascade{Group::positive, {1}},
                        Cascade{Group::positive, {2}}, Cascade{Group::misinformation, {3}},
                        Cascade{Group::misinformation, {4}}, Cascade{Group::positive, {}}},
                       5, 8);
}

// Order of cascades at node v from lowest to highest priority.
std::vector<CascadeId> order_at(const PriorityProfile& p, NodeId v) {
  std::vector<CascadeId> ids(static_cast<std::size_t>(p.cascade_count()));
  for (CascadeId c = 0; c < p.cascade_count(); ++c) ids[static_cast<std::size_t>(p.rank(v, c)) - 1] = c;
  return ids;
}

TEST(CascadeSystemTest, Validation) {
  EXPECT_THROW(CascadeSystem({Cascade{Group::misinformation, {}}}, 0, 3), ValidationError);
  EXPECT_THROW(CascadeSystem({Cascade{Group::positive, {1}}}, 0, 3), ValidationError);
  EXPECT_THROW(CascadeSystem({Cascade{Group::positive, {9}}, Cascade{Group::positive, {}}}, 1, 3),
               ValidationError);
  const CascadeSystem ok({Cascade{Group::misinformation, {2, 1, 2}}, Cascade{Group::positive, {}}}, 1, 3);
  EXPECT_EQ(ok[0].seeds, (std::vector<NodeId>{1, 2}));
}

TEST(PriorityTest, ExplicitTableMustBePermutations) {
  const auto sys = five_plus_star();
  EXPECT_THROW(make_priority_profile(priority::Explicit{std::vector<Rank>(48, 1)}, sys, 8), ValidationError);
  EXPECT_THROW(make_priority_profile(priority::Explicit{{1, 2, 3}}, sys, 8), ValidationError);
}

TEST(PriorityTest, MDominantPutsMisinformationOnTop) {
  const CascadeSystem sys({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {1}},
                           Cascade{Group::positive, {}}},
                          2, 4);
  const auto p = make_priority_profile(priority::MDominant{{1, 3, 2}}, sys, 4);
  for (NodeId v = 0; v < 4; ++v) {
    EXPECT_GT(p.rank(v, 0), p.rank(v, 1));
    EXPECT_GT(p.rank(v, 0), p.rank(v, 2));
    EXPECT_GT(p.rank(v, 1), p.rank(v, 2));  // within-group order kept from the global ranks
  }
  EXPECT_TRUE(belongs_to(p, sys, PriorityClass::m_dominant));
  EXPECT_FALSE(belongs_to(p, sys, PriorityClass::p_dominant));
}

TEST(PriorityTest, HomogeneousReplicatesGlobalOrder) {
  const auto sys = five_plus_star();
  const auto p = make_priority_profile(priority::Homogeneous{{6, 1, 3, 2, 5, 4}}, sys, 8);
  for (NodeId v = 0; v < 8; ++v) EXPECT_TRUE(std::ranges::equal(p.row(v), p.row(0)));
  EXPECT_TRUE(is_homogeneous(p));
  EXPECT_THROW(make_priority_profile(priority::Homogeneous{{1, 1, 2, 3, 4, 5}}, sys, 8), ValidationError);
}

TEST(PriorityTest, RandomIsReproducibleAndVaries) {
  const auto sys = five_plus_star();
  const auto a = make_priority_profile(priority::Random{42}, sys, 8);
  const auto b = make_priority_profile(priority::Random{42}, sys, 8);
  const auto c = make_priority_profile(priority::Random{43}, sys, 8);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_FALSE(is_homogeneous(a));
}

TEST(PriorityTest, RandomPermutationsAreRoughlyUniform) {
  const CascadeSystem sys({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {1}},
                           Cascade{Group::positive, {}}},
                          2, 6000);
  const auto p = make_priority_profile(priority::Random{7}, sys, 6000);
  int top_m = 0;
  for (NodeId v = 0; v < 6000; ++v) top_m += p.rank(v, 0) == 3;
  EXPECT_NEAR(top_m / 6000.0, 1.0 / 3.0, 0.03);
}

TEST(InducedPriorityTest, UpperMatchesWorkedExample) {
  // At node 0: P3 < P1 < M2 < P2 < M1, P* lowest.
  const auto sys = five_plus_star();
  std::vector<Rank> table;
  for (NodeId v = 0; v < 8; ++v) table.insert(table.end(), {3, 5, 2, 6, 4, 1});
  const auto p = make_priority_profile(priority::Explicit{table}, sys, 8);
  EXPECT_EQ(order_at(p, 0), (std::vector<CascadeId>{5, 2, 0, 4, 1, 3}));

  const auto upper = induce_upper_priority(p, sys);
  // M2 < M1 < P* < P3 < P1 < P2
  EXPECT_EQ(order_at(upper, 0), (std::vector<CascadeId>{4, 3, 5, 2, 0, 1}));
  const auto lower = induce_lower_priority(p, sys);
  // P* < P3 < P1 < P2 < M2 < M1
  EXPECT_EQ(order_at(lower, 0), (std::vector<CascadeId>{5, 2, 0, 1, 4, 3}));
  EXPECT_TRUE(belongs_to(upper, sys, PriorityClass::p_dominant));
  EXPECT_TRUE(belongs_to(lower, sys, PriorityClass::m_dominant));
}

TEST(InducedPriorityTest, FixedPointsAndIdempotence) {
  const auto sys = five_plus_star();
  const auto random = make_priority_profile(priority::Random{3}, sys, 8);
  const auto upper = induce_upper_priority(random, sys);
  const auto lower = induce_lower_priority(random, sys);
  EXPECT_EQ(induce_upper_priority(upper, sys), upper);
  EXPECT_EQ(induce_lower_priority(lower, sys), lower);

  const auto pdom = make_priority_profile(priority::PDominant{{1, 2, 3, 4, 5, 6}}, sys, 8);
  EXPECT_EQ(induce_upper_priority(pdom, sys), pdom);
  const auto mdom = make_priority_profile(priority::MDominant{{1, 2, 3, 4, 5, 6}}, sys, 8);
  EXPECT_EQ(induce_lower_priority(mdom, sys), mdom);
}

TEST(InducedPriorityTest, NoMisinformationLeavesProfileUnchanged) {
  const CascadeSystem sys({Cascade{Group::positive, {0}}, Cascade{Group::positive, {1}},
                           Cascade{Group::positive, {}}},
                          2, 5);
  const auto p = make_priority_profile(priority::Random{9}, sys, 5);
  EXPECT_EQ(induce_upper_priority(p, sys), p);
  EXPECT_EQ(induce_lower_priority(p, sys), p);
}

TEST(InducedPriorityTest, SinglePositiveCascadeMovesMisinformationBlockUp) {
  const CascadeSystem sys({Cascade{Group::misinformation, {0}}, Cascade{Group::misinformation, {1}},
                           Cascade{Group::positive, {}}},
                          2, 3);
  const auto p = make_priority_profile(priority::Homogeneous{{1, 3, 2}}, sys, 3);
  const auto lower = induce_lower_priority(p, sys);
  for (NodeId v = 0; v < 3; ++v) {
    EXPECT_EQ(lower.rank(v, 2), 1);
    EXPECT_EQ(lower.rank(v, 0), 2);
    EXPECT_EQ(lower.rank(v, 1), 3);
  }
}

// Property: within-group relative order is preserved at every node.
TEST(InducedPriorityTest, PreservesWithinGroupOrder) {
  const auto sys = five_plus_star();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = make_priority_profile(priority::Random{seed}, sys, 8);
    for (const auto& q : {induce_upper_priority(p, sys), induce_lower_priority(p, sys)}) {
      for (NodeId v = 0; v < 8; ++v) {
        for (CascadeId a = 0; a < sys.size(); ++a) {
          for (CascadeId b = 0; b < sys.size(); ++b) {
            if (sys.group(a) != sys.group(b)) continue;
            EXPECT_EQ(p.rank(v, a) < p.rank(v, b), q.rank(v, a) < q.rank(v, b));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace mcc
