#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "anybn/error.hpp"
#include "anybn/exact.hpp"
#include "anybn/samplers.hpp"
#include "oracle.hpp"

namespace anybn {
namespace {

std::vector<std::size_t> positions(const std::vector<NodeId>& order) {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].index] = i;
  return pos;
}

TEST(LogicSample, DeterministicNet) {
  Network net("det", {NodeSpec{"A", 2, {}, {0.0, 1.0}}, NodeSpec{"B", 3, {NodeId{0}}, {1, 0, 0, 0, 0, 1}}});
  Rng rng(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(logic_sample(net, rng), Trial(std::vector<State>{1, 2}));
}

TEST(LogicSample, RootFrequency) {
  Network net("one", {NodeSpec{"A", 2, {}, {0.3, 0.7}}});
  Rng rng(11);
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += logic_sample(net, rng)[NodeId{0}] == 0;
  EXPECT_NEAR(zeros / 100000.0, 0.3, 0.01);
}

TEST(LogicSample, RespectsZeroEntries) {
  Network net("z", {NodeSpec{"A", 2, {}, {0.5, 0.5}}, NodeSpec{"B", 2, {NodeId{0}}, {1.0, 0.0, 0.5, 0.5}}});
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const auto t = logic_sample(net, rng);
    EXPECT_FALSE(t[NodeId{0}] == 0 && t[NodeId{1}] == 1);
  }
}

TEST(LogicEstimate, ImpossibleEvidence) {
  Network net("z", {NodeSpec{"A", 2, {}, {1.0, 0.0}}});
  Rng rng(1);
  const auto est = logic_sampling_estimate(net, Evidence({{NodeId{0}, 1}}), 1000, rng);
  EXPECT_EQ(est.accepted, 0u);
  EXPECT_FALSE(est.table.defined());
}

TEST(LogicEstimate, AcceptanceTracksEvidenceProbability) {
  // Find a net where the observation has probability near 0.1.
  for (std::uint64_t seed = 1; seed < 200; ++seed) {
    const auto net = testing::random_small_net(seed, 5, 2, 2, 0.0);
    const Evidence ev({{NodeId{4}, 0}, {NodeId{3}, 0}});
    const double pe = testing::oracle_posterior(net, ev).p_evidence;
    if (pe < 0.07 || pe > 0.13) continue;
    Rng rng(seed);
    const auto est = logic_sampling_estimate(net, ev, 50000, rng);
    EXPECT_NEAR(static_cast<double>(est.accepted) / 50000.0, pe, 0.01);
    return;
  }
  FAIL() << "no net with P(evidence) near 0.1";
}

TEST(ForwardSample, EmptyEvidenceWeightsOne) {
  const auto net = testing::random_small_net(4, 6, 2, 3);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(forward_sample(net, Evidence{}, rng).weight, 1.0);
}

TEST(ForwardSample, RootEvidenceWeightIsConstant) {
  Network net("r", {NodeSpec{"A", 2, {}, {0.8, 0.2}}, NodeSpec{"B", 2, {NodeId{0}}, {0.5, 0.5, 0.1, 0.9}}});
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto wt = forward_sample(net, Evidence({{NodeId{0}, 1}}), rng);
    EXPECT_EQ(wt.weight, 0.2);
    EXPECT_EQ(wt.trial[NodeId{0}], 1u);
  }
}

TEST(ForwardSample, WeightTimesUsedFactorsIsJoint) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto net = testing::random_small_net(seed, 9, 3, 3);
    const Evidence ev({{NodeId{8}, 1}, {NodeId{2}, 0}});
    Rng rng(seed);
    for (int i = 0; i < 500; ++i) {
      const auto wt = forward_sample(net, ev, rng);
      ASSERT_TRUE(conforms(wt.trial, ev));
      const auto s = std::vector<State>(wt.trial.states().begin(), wt.trial.states().end());
      double used = 1.0;
      for (std::size_t n = 0; n < net.size(); ++n) {
        if (!ev.contains(NodeId{n})) used *= net.conditional(NodeId{n}, s);
      }
      const double joint = testing::oracle_joint(net, s);
      EXPECT_NEAR(wt.weight * used, joint, 1e-12 * std::max(joint, 1e-300));
      EXPECT_NEAR(wt.proposal, used, 1e-15);
    }
  }
}

TEST(BackwardPlan, ChainEvidenceAtEnd) {
  const auto net = testing::chain_abc();
  const auto plan = backward_plan(net, Evidence({{NodeId{2}, 1}}));
  EXPECT_EQ(plan.ordering, (std::vector<NodeId>{NodeId{2}, NodeId{1}, NodeId{0}}));
  EXPECT_EQ(plan.inversion_child[1], NodeId{2});
  EXPECT_EQ(plan.inversion_child[0], NodeId{1});
}

TEST(BackwardPlan, RootEvidence) {
  const auto net = testing::chain_abc();
  const auto plan = backward_plan(net, Evidence({{NodeId{0}, 1}}));
  EXPECT_EQ(plan.ancestor_set, std::vector<NodeId>{NodeId{0}});
  EXPECT_EQ(plan.ordering, (std::vector<NodeId>{NodeId{0}, NodeId{1}, NodeId{2}}));
}

TEST(BackwardPlan, DiamondRules) {
  const auto net = testing::diamond();
  const auto plan = backward_plan(net, Evidence({{NodeId{3}, 1}}));
  ASSERT_EQ(plan.ordering.size(), 4u);
  EXPECT_EQ(plan.ordering.front(), NodeId{3});
  const auto pos = positions(plan.ordering);
  EXPECT_LT(pos[1], pos[0]);
  EXPECT_LT(pos[2], pos[0]);
  EXPECT_EQ(plan.inversion_child[0], NodeId{1});
}

TEST(BackwardPlan, RulesHoldOnRandomNets) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto net = testing::random_small_net(seed, 10, 3, 2);
    const Evidence ev({{NodeId{9}, 0}, {NodeId{6}, 1}});
    const auto plan = backward_plan(net, ev);
    const auto pos = positions(plan.ordering);
    auto block = [&](NodeId n) { return ev.contains(n) ? 0 : plan.in_ancestors[n.index] ? 1 : 2; };
    for (std::size_t i = 0; i + 1 < plan.ordering.size(); ++i) {
      EXPECT_LE(block(plan.ordering[i]), block(plan.ordering[i + 1]));
    }
    for (std::size_t n = 0; n < net.size(); ++n) {
      const NodeId id{n};
      for (auto p : net.parents(id)) {
        const int bn = block(id), bp = block(p);
        if (bn == 1 && bp == 1) EXPECT_LT(pos[n], pos[p.index]);  // children first inside the ancestors
        if (bn == 2 && bp == 2) EXPECT_LT(pos[p.index], pos[n]);  // parents first elsewhere
      }
      if (block(id) == 1) {
        ASSERT_TRUE(plan.inversion_child[n].has_value());
        const auto child = *plan.inversion_child[n];
        EXPECT_TRUE(plan.in_ancestors[child.index]);
        EXPECT_LT(pos[child.index], pos[n]);
      } else {
        EXPECT_FALSE(plan.inversion_child[n].has_value());
      }
    }
  }
}

TEST(BackwardPlan, EmptyEvidenceRejected) {
  EXPECT_THROW(backward_plan(testing::chain_abc(), Evidence{}), InvalidEvidence);
}

TEST(BayesInverse, TwoTermExample) {
  // P(b | p0) = 0.8, P(b | p1) = 0.4.
  Network net("inv", {NodeSpec{"P", 2, {}, {0.5, 0.5}}, NodeSpec{"B", 2, {NodeId{0}}, {0.2, 0.8, 0.6, 0.4}}});
  PartialTrial partial(2);
  partial.set(NodeId{1}, 1);
  Rng rng(9);
  int p0 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto draw = bayes_inverse_sample(net, NodeId{1}, partial, rng);
    ASSERT_EQ(draw.assignment.size(), 1u);
    EXPECT_NEAR(draw.kappa, 1.0 / 1.2, 1e-15);
    p0 += draw.assignment[0].state == 0;
  }
  EXPECT_NEAR(p0 / static_cast<double>(n), 0.8 / 1.2, 0.01);
}

TEST(BayesInverse, AllParentsAssigned) {
  Network net("inv", {NodeSpec{"P", 2, {}, {0.5, 0.5}}, NodeSpec{"B", 2, {NodeId{0}}, {0.2, 0.8, 0.6, 0.4}}});
  PartialTrial partial(2);
  partial.set(NodeId{1}, 1);
  partial.set(NodeId{0}, 1);
  Rng rng(9);
  const auto draw = bayes_inverse_sample(net, NodeId{1}, partial, rng);
  EXPECT_TRUE(draw.assignment.empty());
  EXPECT_NEAR(draw.kappa, 1.0 / 0.4, 1e-12);
}

TEST(BayesInverse, ZeroSupport) {
  Network net("inv", {NodeSpec{"P", 2, {}, {0.5, 0.5}}, NodeSpec{"B", 2, {NodeId{0}}, {1.0, 0.0, 1.0, 0.0}}});
  PartialTrial partial(2);
  partial.set(NodeId{1}, 1);
  Rng rng(9);
  EXPECT_THROW(bayes_inverse_sample(net, NodeId{1}, partial, rng), ZeroSupport);
}

TEST(BackwardSample, TwoNodeWeight) {
  Network net("ab", {NodeSpec{"A", 2, {}, {0.3, 0.7}}, NodeSpec{"B", 2, {NodeId{0}}, {0.2, 0.8, 0.6, 0.4}}});
  const Evidence ev({{NodeId{1}, 1}});
  const auto plan = backward_plan(net, ev);
  Rng rng(1);
  const double kappa = 1.0 / (0.8 + 0.4);
  for (int i = 0; i < 200; ++i) {
    const auto wt = backward_sample(net, ev, plan, rng);
    const double pa = wt.trial[NodeId{0}] == 0 ? 0.3 : 0.7;
    EXPECT_NEAR(wt.weight, pa / kappa, 1e-12);
  }
}

TEST(BackwardSample, RootEvidenceDegeneratesToForward) {
  const auto net = testing::diamond();
  const Evidence ev({{NodeId{0}, 1}});
  const auto plan = backward_plan(net, ev);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(backward_sample(net, ev, plan, rng).weight, 0.4, 1e-15);
}

TEST(BackwardSample, WeightTimesProposalIsJoint) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto net = testing::random_small_net(seed, 9, 3, 3);
    const Evidence ev({{NodeId{8}, 0}, {NodeId{5}, 1}});
    const auto plan = backward_plan(net, ev);
    Rng rng(seed);
    for (int i = 0; i < 500; ++i) {
      const auto wt = backward_sample(net, ev, plan, rng);
      ASSERT_TRUE(conforms(wt.trial, ev));
      if (wt.weight == 0.0) continue;
      const auto s = std::vector<State>(wt.trial.states().begin(), wt.trial.states().end());
      const double joint = testing::oracle_joint(net, s);
      EXPECT_NEAR(wt.weight * wt.proposal, joint, 1e-9 * joint);
    }
  }
}

TEST(Frequency, PointMassAndEqualWeights) {
  const auto net = testing::chain_abc();
  FrequencyTally tally(net);
  tally.add(Trial(std::vector<State>{1, 0, 1}), 0.37);
  const auto est = frequency_estimate(tally);
  EXPECT_EQ(est.at(NodeId{0}, 1), 1.0);
  EXPECT_EQ(est.at(NodeId{1}, 0), 1.0);
  tally.add(Trial(std::vector<State>{0, 0, 1}), 0.37);
  EXPECT_DOUBLE_EQ(frequency_estimate(tally).at(NodeId{0}, 1), 0.5);
  tally.reset();
  EXPECT_EQ(tally.trials(), 0u);
  EXPECT_FALSE(frequency_estimate(tally).defined());
}

TEST(Frequency, ForwardAndBackwardConverge) {
  const auto net = testing::random_small_net(7, 7, 2, 3);
  const Evidence ev({{NodeId{6}, 1}});
  const auto ref = testing::oracle_posterior(net, ev);
  ASSERT_GT(ref.p_evidence, 0.0);
  for (auto method : {SamplingMethod::forward, SamplingMethod::backward}) {
    const Simulator sim(net, ev, method);
    FrequencyTally tally(net);
    Rng rng(17);
    for (int i = 0; i < 100000; ++i) tally.add(sim.draw(rng));
    EXPECT_LT(testing::oracle_rmse(frequency_estimate(tally), ref.posterior), 0.01) << to_string(method);
  }
}

TEST(SimulatorType, BackwardWithoutEvidenceFallsBack) {
  const auto net = testing::chain_abc();
  const Simulator sim(net, Evidence{}, SamplingMethod::backward);
  Rng rng(1);
  EXPECT_EQ(sim.draw(rng).weight, 1.0);
  EXPECT_EQ(parse_sampling_method("backward"), SamplingMethod::backward);
  EXPECT_FALSE(parse_sampling_method("sideways").has_value());
}

}  // namespace
}  // namespace anybn
