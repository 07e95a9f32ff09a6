#include "mcc/estimation.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

namespace mcc {
namespace {

using testing::deterministic_graph;

// u -> v with p = 0.5, M1 seeded at u, no positive seeds.
struct SingleEdge {
  DirectedGraph graph = deterministic_graph(2, {{0, 1}}, 0.5);
  CascadeSystem system{{Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {}}}, 1, 2};
  PriorityProfile profile = make_priority_profile(priority::Homogeneous{{2, 1}}, system, 2);
};

TEST(ExactTest, SingleEdgeByHand) {
  // Two outcomes: edge dead (f_M = 1) or alive (f_M = 2), each with 1/2.
  SingleEdge s;
  const auto exact = exact_f(s.graph, s.system, s.profile, {});
  EXPECT_DOUBLE_EQ(exact.f_m, 1.5);
  EXPECT_DOUBLE_EQ(exact.f_not_m, 0.5);
  EXPECT_NEAR(exact.total_probability, 1.0, 1e-12);
}

TEST(ExactTest, DeterministicGraphIsSingleTerm) {
  const auto inst = testing::three_cascade_example();
  const auto exact = exact_f(inst.graph, inst.system, inst.profile, {});
  const auto sim = simulate(inst.graph, inst.system, inst.profile, {}, LiveEdgeGraph::all(inst.graph));
  EXPECT_EQ(exact.f_m, static_cast<double>(sim.m_active_count));
  EXPECT_EQ(exact.f_m + exact.f_not_m, 6.0);
}

TEST(ExactTest, NonSubmodularExampleValues) {
  const auto inst = testing::non_submodular_example();
  auto f = [&](std::vector<NodeId> s) { return exact_f(inst.graph, inst.system, inst.profile, s).f_not_m; };
  EXPECT_EQ(f({}), 5.0);
  EXPECT_EQ(f({1}), 4.0);
  EXPECT_EQ(f({3}), 4.0);
  EXPECT_EQ(f({1, 3}), 4.0);
}

TEST(ExactTest, CapacityGuard) {
  const auto g = assign_probabilities(erdos_renyi(12, 21, 1), probability::Uniform{0.5});
  const CascadeSystem sys({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {}}}, 1, 12);
  const auto pri = make_priority_profile(priority::Homogeneous{{2, 1}}, sys, 12);
  try {
    exact_f(g, sys, pri, {});
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("20"), std::string::npos);
  }
}

TEST(ExactTest, EvaluatorsAgree) {
  const auto g = assign_probabilities(erdos_renyi(9, 14, 4), probability::Uniform{0.3});
  const CascadeSystem sys({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {4}},
                           Cascade{Group::positive, {}}},
                          2, 9);
  const auto pri = make_priority_profile(priority::PDominant{{3, 1, 2}}, sys, 9);
  const std::vector<NodeId> star{2};
  const auto a = exact_f(g, sys, pri, star, EvaluatorChoice::step_simulation);
  const auto b = exact_f(g, sys, pri, star, EvaluatorChoice::fast_bfs);
  EXPECT_NEAR(a.f_m, b.f_m, 1e-12);
}

TEST(EstimateTest, NoEdgesNoMisinformation) {
  const auto g = DirectedGraph::from_edges(5, {});
  const CascadeSystem sys({Cascade{Group::positive, {}}}, 0, 5);
  const auto pri = make_priority_profile(priority::Homogeneous{{1}}, sys, 5);
  const std::vector<NodeId> star{2};
  const auto est = estimate(g, sys, pri, star, EstimatorConfig{100, 3, true, EvaluatorChoice::automatic});
  EXPECT_EQ(est.mean_not_m_active, 5.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.replications, 100);
}

TEST(EstimateTest, SingleEdgeConverges) {
  SingleEdge s;
  const auto est = estimate(s.graph, s.system, s.profile, {}, EstimatorConfig{100000, 17, true, EvaluatorChoice::automatic});
  EXPECT_LE(std::abs(est.mean_m_active - 1.5), 3 * est.std_error);
  EXPECT_NEAR(est.std_error, 0.5 / std::sqrt(100000.0), 1e-4);
  EXPECT_NEAR(est.mean_m_active + est.mean_not_m_active, 2.0, 1e-12);
}

TEST(EstimateTest, DeterministicGraphEqualsExact) {
  const auto inst = testing::three_cascade_example();
  const auto exact = exact_f(inst.graph, inst.system, inst.profile, {});
  for (std::int64_t r : {1, 7, 50}) {
    const auto est = estimate(inst.graph, inst.system, inst.profile, {}, EstimatorConfig{r, 9, true, EvaluatorChoice::automatic});
    EXPECT_EQ(est.mean_m_active, exact.f_m);
    EXPECT_EQ(est.std_error, 0.0);
  }
}

TEST(EstimateTest, EvaluatorChoicesAgreeSampleBySample) {
  const auto g = assign_probabilities(erdos_renyi(40, 120, 2), probability::Uniform{0.3});
  const CascadeSystem sys({Cascade{Group::misinformation, {0, 1}}, Cascade{Group::positive, {2}},
                           Cascade{Group::positive, {}}},
                          2, 40);
  const auto pri = make_priority_profile(priority::MDominant{{1, 2, 3}}, sys, 40);
  const std::vector<NodeId> star{9};
  EstimatorConfig cfg{2000, 5, true, EvaluatorChoice::step_simulation};
  const auto a = estimate(g, sys, pri, star, cfg);
  cfg.evaluator = EvaluatorChoice::fast_bfs;
  const auto b = estimate(g, sys, pri, star, cfg);
  EXPECT_EQ(a.mean_m_active, b.mean_m_active);
  EXPECT_EQ(a.std_error, b.std_error);

  const auto random_pri = make_priority_profile(priority::Random{1}, sys, 40);
  EXPECT_THROW(estimate(g, sys, random_pri, star, cfg), ValidationError);
}

TEST(EstimateTest, StdErrorScalesWithInverseSqrtR) {
  SingleEdge s;
  const auto small = estimate(s.graph, s.system, s.profile, {}, EstimatorConfig{10000, 1, true, EvaluatorChoice::automatic});
  const auto large = estimate(s.graph, s.system, s.profile, {}, EstimatorConfig{40000, 2, true, EvaluatorChoice::automatic});
  EXPECT_NEAR(small.std_error / large.std_error, 2.0, 0.4);
}

// With CRN, a candidate that reaches nothing but itself changes the estimate by
// exactly its own contribution.
TEST(EstimateTest, CommonRandomNumbersIsolateIsolatedNode) {
  const auto g = assign_probabilities(erdos_renyi(30, 90, 8), probability::Uniform{0.4});
  std::vector<Edge> edges = g.edges();
  const auto h = DirectedGraph::from_edges(31, edges);  // node 30 is isolated
  const CascadeSystem sys({Cascade{Group::misinformation, {0}}, Cascade{Group::positive, {}}}, 1, 31);
  const auto pri = make_priority_profile(priority::Random{4}, sys, 31);
  const EstimatorConfig cfg{3000, 77, true, EvaluatorChoice::automatic};
  const std::vector<NodeId> base{5};
  const std::vector<NodeId> plus{5, 30};
  const auto a = estimate(h, sys, pri, base, cfg);
  const auto b = estimate(h, sys, pri, plus, cfg);
  EXPECT_EQ(a.mean_m_active, b.mean_m_active);  // node 30 was never M-active and stays so

  EstimatorConfig independent = cfg;
  independent.common_random_numbers = false;
  const auto c = estimate(h, sys, pri, base, independent);
  const auto d = estimate(h, sys, pri, plus, independent);
  EXPECT_NE(c.mean_m_active, d.mean_m_active);
}

TEST(EstimateTest, RejectsZeroReplications) {
  SingleEdge s;
  EXPECT_THROW(estimate(s.graph, s.system, s.profile, {}, EstimatorConfig{0, 1, true, EvaluatorChoice::automatic}),
               ValidationError);
}

}  // namespace
}  // namespace mcc
