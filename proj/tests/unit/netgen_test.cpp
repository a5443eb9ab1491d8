#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "anybn/exact.hpp"
#include "anybn/netgen.hpp"
#include "anybn/network_io.hpp"
#include "oracle.hpp"

namespace anybn {
namespace {

TEST(NetGen, SingleNode) {
  NetGenConfig cfg;
  cfg.node_count = 1;
  const auto net = generate_network(cfg);
  EXPECT_EQ(net.size(), 1u);
  EXPECT_TRUE(net.parents(NodeId{0}).empty());
}

TEST(NetGen, NoParents) {
  NetGenConfig cfg;
  cfg.max_parents = 0;
  const auto net = generate_network(cfg);
  for (std::size_t i = 0; i < net.size(); ++i) EXPECT_TRUE(net.parents(NodeId{i}).empty());
}

TEST(NetGen, DefaultsAreValidAcrossSeeds) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    NetGenConfig cfg;
    cfg.seed = seed;
    const auto net = generate_network(cfg);
    ASSERT_EQ(net.size(), 32u);
    for (std::size_t i = 0; i < net.size(); ++i) {
      const NodeId n{i};
      EXPECT_LE(net.parents(n).size(), 3u);
      EXPECT_GE(net.cardinality(n), 2u);
      EXPECT_LE(net.cardinality(n), 4u);
      for (auto p : net.parents(n)) EXPECT_LT(p.index, i);
    }
    // The text form re-validates through the constructor.
    EXPECT_NO_THROW(parse_network(format_network(net)));
  }
}

TEST(NetGen, DeterministicPerSeed) {
  NetGenConfig cfg;
  cfg.seed = 77;
  EXPECT_EQ(format_network(generate_network(cfg)), format_network(generate_network(cfg)));
  cfg.seed = 78;
  NetGenConfig other;
  other.seed = 77;
  EXPECT_NE(format_network(generate_network(cfg)), format_network(generate_network(other)));
}

// Zero fraction of a k-cell row drawn with independent zeros at rate z,
// conditioned on not being all zero (all-zero rows are redrawn).
double expected_zero_rate(std::size_t k, double z) {
  const double all = std::pow(z, static_cast<double>(k));
  return (z - all) / (1.0 - all);
}

TEST(NetGen, ZeroCellFrequencyMatchesRedrawRule) {
  double zeros = 0.0, expected = 0.0;
  std::size_t cells = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    NetGenConfig cfg;
    cfg.seed = seed;
    const auto net = generate_network(cfg);
    for (std::size_t i = 0; i < net.size(); ++i) {
      const auto k = net.cardinality(NodeId{i});
      for (double v : net.cpt(NodeId{i})) zeros += v == 0.0;
      cells += net.cpt(NodeId{i}).size();
      expected += static_cast<double>(net.cpt(NodeId{i}).size()) * expected_zero_rate(k, cfg.zero_cell_prob);
    }
  }
  ASSERT_GE(cells, 10000u);
  EXPECT_NEAR(zeros / static_cast<double>(cells), expected / static_cast<double>(cells), 0.02);
}

TEST(NetGen, ZeroCellFrequencyNearTargetWhenRedrawsAreRare) {
  NetGenConfig cfg;
  cfg.cardinality_weights = {0.0, 0.0, 1.0};
  cfg.zero_cell_prob = 0.1;
  std::size_t zeros = 0, cells = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    cfg.seed = seed;
    const auto net = generate_network(cfg);
    for (std::size_t i = 0; i < net.size(); ++i) {
      for (double v : net.cpt(NodeId{i})) {
        zeros += v == 0.0;
        ++cells;
      }
    }
  }
  ASSERT_GE(cells, 10000u);
  EXPECT_NEAR(static_cast<double>(zeros) / static_cast<double>(cells), cfg.zero_cell_prob, 0.02);
}

Network two_leaves() {
  // Root R with leaves L1 (min prior 0.1) and L2 (min prior 0.4).
  return Network("two", {NodeSpec{"R", 2, {}, {0.5, 0.5}},
                         NodeSpec{"L1", 2, {NodeId{0}}, {0.9, 0.1, 0.9, 0.1}},
                         NodeSpec{"L2", 2, {NodeId{0}}, {0.6, 0.4, 0.6, 0.4}}});
}

TEST(LowPriorEvidence, PicksSmallestLeafState) {
  NetGenConfig cfg;
  cfg.evidence_count = 1;
  Rng rng(1);
  const auto ev = select_low_prior_evidence(two_leaves(), cfg, rng);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev.observations()[0], (Observation{NodeId{1}, 1}));
}

TEST(LowPriorEvidence, SkipsZeroPriorStates) {
  // L1 state 1 has prior 0; its next state is certain.
  Network net("z", {NodeSpec{"R", 2, {}, {0.5, 0.5}}, NodeSpec{"L1", 2, {NodeId{0}}, {1.0, 0.0, 1.0, 0.0}},
                    NodeSpec{"L2", 3, {NodeId{0}}, {0.2, 0.3, 0.5, 0.2, 0.3, 0.5}}});
  NetGenConfig cfg;
  cfg.evidence_count = 2;
  Rng rng(1);
  const auto ev = select_low_prior_evidence(net, cfg, rng);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev.observations()[0], (Observation{NodeId{2}, 0}));
  EXPECT_EQ(ev.observations()[1], (Observation{NodeId{1}, 0}));
  EXPECT_GT(exact_posterior(net, ev).evidence_probability, 0.0);
}

TEST(LowPriorEvidence, TooFewLeaves) {
  NetGenConfig cfg;
  cfg.evidence_count = 3;
  Rng rng(1);
  EXPECT_THROW(select_low_prior_evidence(two_leaves(), cfg, rng), TooFewLeaves);
}

TEST(LowPriorEvidence, DefaultRegimeIsSmallAndFeasible) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    NetGenConfig cfg;
    cfg.seed = seed;
    cfg.node_count = 14;
    Rng rng(seed);
    const auto net = generate_network(cfg, rng);
    if (leaves(net).size() < cfg.evidence_count) continue;
    const auto ev = select_low_prior_evidence(net, cfg, rng);
    const double pe = exact_posterior(net, ev).evidence_probability;
    EXPECT_GT(pe, 0.0);
    EXPECT_LT(pe, 0.1);
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

}  // namespace
}  // namespace anybn
