#include <gtest/gtest.h>

#include "anybn/error.hpp"
#include "anybn/exact.hpp"
#include "oracle.hpp"

namespace anybn {
namespace {

TEST(Exact, SingleNodeNoEvidence) {
  Network net("one", {NodeSpec{"A", 2, {}, {0.3, 0.7}}});
  const auto sol = exact_posterior(net, Evidence{});
  EXPECT_DOUBLE_EQ(sol.evidence_probability, 1.0);
  EXPECT_DOUBLE_EQ(sol.posterior.at(NodeId{0}, 0), 0.3);
  EXPECT_DOUBLE_EQ(sol.posterior.at(NodeId{0}, 1), 0.7);
}

TEST(Exact, TwoNodeBayesByHand) {
  // A prior (0.6, 0.4); P(B=1 | A) = (0.2, 0.9); observe B = 1.
  Network net("ab", {NodeSpec{"A", 2, {}, {0.6, 0.4}}, NodeSpec{"B", 2, {NodeId{0}}, {0.8, 0.2, 0.1, 0.9}}});
  const auto sol = exact_posterior(net, Evidence({{NodeId{1}, 1}}));
  const double pe = 0.6 * 0.2 + 0.4 * 0.9;
  EXPECT_NEAR(sol.evidence_probability, pe, 1e-15);
  EXPECT_NEAR(sol.posterior.at(NodeId{0}, 0), 0.12 / pe, 1e-12);
  EXPECT_NEAR(sol.posterior.at(NodeId{0}, 1), 0.36 / pe, 1e-12);
  EXPECT_DOUBLE_EQ(sol.posterior.at(NodeId{1}, 1), 1.0);
}

TEST(Exact, ImpossibleEvidenceIsUndefined) {
  Network net("z", {NodeSpec{"A", 2, {}, {1.0, 0.0}}, NodeSpec{"B", 2, {NodeId{0}}, {1.0, 0.0, 0.5, 0.5}}});
  const auto sol = exact_posterior(net, Evidence({{NodeId{1}, 1}}));
  EXPECT_EQ(sol.evidence_probability, 0.0);
  EXPECT_FALSE(sol.posterior.defined());
}

TEST(Exact, MatchesOracleOnRandomNets) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto net = testing::random_small_net(seed, 8, 3, 3);
    Evidence ev({{NodeId{7}, 0}, {NodeId{3}, 1}});
    const auto sol = exact_posterior(net, ev);
    const auto ref = testing::oracle_posterior(net, ev);
    EXPECT_NEAR(sol.evidence_probability, ref.p_evidence, 1e-12);
    if (ref.p_evidence == 0.0) {
      EXPECT_FALSE(sol.posterior.defined());
      continue;
    }
    for (std::size_t n = 0; n < net.size(); ++n) {
      double row = 0.0;
      for (State s = 0; s < net.cardinality(NodeId{n}); ++s) {
        EXPECT_NEAR(sol.posterior.at(NodeId{n}, s), ref.posterior[n][s], 1e-9);
        row += sol.posterior.at(NodeId{n}, s);
      }
      EXPECT_NEAR(row, 1.0, 1e-9);
    }
  }
}

TEST(Exact, PriorSumsJointMass) {
  const auto net = testing::random_small_net(42, 6, 2, 4);
  const auto prior = exact_prior(net);
  const auto ref = testing::oracle_posterior(net, Evidence{});
  EXPECT_NEAR(ref.p_evidence, 1.0, 1e-9);
  EXPECT_LT(testing::oracle_rmse(prior, ref.posterior), 1e-12);
}

TEST(Exact, BudgetIsEnforced) {
  const auto net = testing::random_small_net(1, 10, 2, 2);
  EXPECT_THROW(exact_posterior(net, Evidence{}, 100.0), BudgetExceeded);
  EXPECT_FALSE(enumerable(net, 100.0));
  EXPECT_TRUE(enumerable(net));
}

}  // namespace
}  // namespace anybn
