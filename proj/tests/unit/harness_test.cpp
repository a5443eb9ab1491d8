#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "anybn/csv.hpp"
#include "anybn/error.hpp"
#include "anybn/exact.hpp"
#include "anybn/harness.hpp"
#include "anybn/netgen.hpp"
#include "oracle.hpp"

namespace anybn {
namespace {

BeliefTable binary_table(std::vector<double> p0) {
  std::vector<std::size_t> cards(p0.size(), 2);
  BeliefTable t(cards);
  for (std::size_t i = 0; i < p0.size(); ++i) {
    t.at(NodeId{i}, 0) = p0[i];
    t.at(NodeId{i}, 1) = 1.0 - p0[i];
  }
  return t;
}

TEST(Rmse, Examples) {
  const auto exact = binary_table({0.3, 0.6});
  EXPECT_EQ(rmse(exact, exact), 0.0);
  EXPECT_NEAR(rmse(binary_table({0.4, 0.7}), exact), 0.1, 1e-12);
  auto undef = exact;
  undef.mark_undefined();
  // Cells score max(p, 1 - p): 0.7, 0.7, 0.6, 0.6.
  EXPECT_NEAR(rmse(undef, exact), std::sqrt((0.49 * 2 + 0.36 * 2) / 4), 1e-12);
  EXPECT_THROW(rmse(exact, undef), std::invalid_argument);
  EXPECT_THROW(rmse(binary_table({0.5}), exact), std::invalid_argument);
}

TEST(Rmse, ForwardErrorShrinksWithTrials) {
  const auto net = testing::random_small_net(5, 8, 3, 3);
  const Evidence ev({{NodeId{7}, 0}});
  const auto exact = exact_posterior(net, ev).posterior;
  double small = 0.0, large = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Simulator sim(net, ev, SamplingMethod::forward);
    FrequencyTally tally(net);
    Rng rng(seed);
    for (int i = 0; i < 1000; ++i) tally.add(sim.draw(rng));
    small += rmse(frequency_estimate(tally), exact);
    for (int i = 0; i < 9000; ++i) tally.add(sim.draw(rng));
    const double r = rmse(frequency_estimate(tally), exact);
    EXPECT_GT(r, 0.0);
    large += r;
  }
  EXPECT_LT(large, small);
}

TEST(Schedule, Shapes) {
  const std::vector<Observation> obs{{NodeId{3}, 1}, {NodeId{1}, 0}};
  EXPECT_EQ(make_schedule("none", obs, 10, 0).size(), 1u);
  EXPECT_TRUE(make_schedule("none", obs, 10, 0)[0].observe.empty());
  const auto all = make_schedule("all", obs, 10, 2);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0].observe.size(), 2u);
  const auto seq = make_schedule("seq", obs, 10, 2);
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_TRUE(seq[0].observe.empty());
  EXPECT_EQ(seq[2].observe[0], obs[1]);
  EXPECT_EQ(seq[2].generations, 2u);
}

class ExperimentFixture : public ::testing::Test {
 protected:
  static Network pick_net() {
    // First seed whose three observations are jointly possible.
    for (std::uint64_t seed = 11;; ++seed) {
      auto net = testing::random_small_net(seed, 9, 3, 3);
      if (testing::oracle_posterior(net, Evidence(observations())).p_evidence > 0.0) return net;
    }
  }
  static std::vector<Observation> observations() { return {{NodeId{8}, 0}, {NodeId{6}, 1}, {NodeId{7}, 0}}; }

  Network net = pick_net();
  std::vector<Observation> obs = observations();
};

TEST_F(ExperimentFixture, TraceRowsAndMonotoneMass) {
  ExperimentConfig cfg;
  cfg.method = Method::ga_forward;
  cfg.update = "seq";
  cfg.phases = make_schedule("seq", obs, 300, 5);
  cfg.trace_stride = 100;
  const auto run = run_experiment(net, cfg, 3);
  ASSERT_EQ(run.phases.size(), 4u);
  std::size_t phase = 0;
  for (std::size_t i = 1; i < run.trace.size(); ++i) {
    const auto& a = run.trace[i - 1];
    const auto& b = run.trace[i];
    EXPECT_GE(b.trials, a.trials);
    EXPECT_GE(b.mass_total, a.mass_total);
    EXPECT_GE(b.phase, a.phase);
    if (a.phase == b.phase) EXPECT_GE(b.mass_conditional, a.mass_conditional);
    phase = b.phase;
  }
  EXPECT_EQ(phase, 3u);
  for (const auto& p : run.phases) EXPECT_GT(p.bred, 0u);
}

TEST_F(ExperimentFixture, FrequencyResetsArchivePersists) {
  ExperimentConfig cfg;
  cfg.method = Method::forward;
  cfg.phases = make_schedule("seq", obs, 500, 0);
  const auto run = run_experiment(net, cfg, 1);
  for (std::size_t k = 0; k < run.phases.size(); ++k) {
    const auto& p = run.phases[k];
    // Reset tally: undefined at the boundary, which scores the maximal error.
    const auto ref = testing::oracle_posterior(net, Evidence(std::vector<Observation>(obs.begin(), obs.begin() + p.n_obs)));
    BeliefTable undef = BeliefTable::undefined(net);
    ASSERT_TRUE(p.start_rmse_frequency.has_value());
    EXPECT_NEAR(*p.start_rmse_frequency, testing::oracle_rmse(undef, ref.posterior), 1e-12);
    if (k > 0) {
      ASSERT_TRUE(p.start_rmse_archive.has_value());
      EXPECT_LE(*p.start_rmse_archive, *p.start_rmse_frequency);
      if (p.start_conforming > 0) EXPECT_LT(*p.start_rmse_archive, *p.start_rmse_frequency);
    }
  }
}

TEST_F(ExperimentFixture, ZeroBudgetPhasesStillReportArchive) {
  ExperimentConfig cfg;
  cfg.method = Method::forward;
  cfg.phases = make_schedule("seq", obs, 0, 0);
  cfg.phases[0].sim_trials = 2000;
  const auto run = run_experiment(net, cfg, 1);
  // Rows only at phase boundaries: start and end of each phase (plus strides in phase 0).
  for (const auto& row : run.trace) {
    if (row.phase > 0) EXPECT_EQ(row.trials, 2000u);
  }
  EXPECT_TRUE(run.phases.back().rmse_archive.has_value());
}

TEST_F(ExperimentFixture, DeterministicCsv) {
  ExperimentConfig cfg;
  cfg.method = Method::ga_backward;
  cfg.phases = make_schedule("seq", obs, 200, 3);
  cfg.seeds = {1, 2};
  auto render = [&] {
    const auto result = run_experiment(net, cfg);
    std::ostringstream out;
    for (const auto& r : result.runs) write_trace_csv(out, r.trace);
    const SummaryRow rows[] = {result.summary};
    write_summary_csv(out, rows);
    return out.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(Experiment, RmseOnRequiresEnumerableNet) {
  NetGenConfig g;
  g.node_count = 60;
  const auto net = generate_network(g);
  ExperimentConfig cfg;
  cfg.phases = make_schedule("none", {}, 10, 0);
  cfg.rmse = RmseMode::on;
  cfg.oracle_budget = 1e6;
  EXPECT_THROW(run_experiment(net, cfg, 1), ConfigError);
  cfg.rmse = RmseMode::automatic;
  const auto run = run_experiment(net, cfg, 1);
  EXPECT_FALSE(run.phases[0].rmse_frequency.has_value());
  EXPECT_GT(run.phases[0].mass_total, 0.0);
}

TEST(Experiment, AveragingIsIdentityForOneRow) {
  SummaryRow r;
  r.experiment = "x";
  r.rmse_archive = 0.25;
  r.mass_archive = 0.5;
  const SummaryRow rows[] = {r};
  const auto avg = average_rows(rows);
  EXPECT_EQ(avg.rmse_archive, 0.25);
  EXPECT_EQ(avg.mass_archive, 0.5);
  EXPECT_EQ(avg.contributing, 1u);
}

TEST(Grid, EightStandardRows) {
  const std::vector<Observation> obs{{NodeId{1}, 0}, {NodeId{2}, 0}, {NodeId{3}, 0}, {NodeId{4}, 0}};
  StudyConfig cfg;
  const auto grid = standard_grid(obs, cfg);
  std::vector<std::string> names;
  for (const auto& g : grid) names.push_back(g.name);
  EXPECT_EQ(names, (std::vector<std::string>{"Fwd-0-obs", "GA/fwd-0-obs", "Fwd-4-seq", "Bwd-4-seq", "GA/fwd-4-seq",
                                             "Fwd-4-all", "Bwd-4-all", "GA/fwd-4-all"}));
  // GA/fwd-4-all: half the budget simulated, the rest bred in generations of 50.
  EXPECT_EQ(grid[7].phases[0].sim_trials, 5000u);
  EXPECT_EQ(grid[7].phases[0].generations, 100u);
  EXPECT_EQ(grid[2].phases.size(), 5u);
  EXPECT_EQ(grid[2].phases[0].sim_trials, 2000u);
}

TEST(Study, SingleSeedAveragingIsIdentity) {
  StudyConfig cfg;
  cfg.netgen.node_count = 10;
  cfg.seeds = {5};
  cfg.total_trials = 400;
  cfg.rows = {"Fwd-4-seq", "GA/fwd-4-seq"};
  cfg.ga.max_generations = 5;
  const auto result = run_random_study(cfg);
  ASSERT_EQ(result.networks.size(), 1u);
  ASSERT_EQ(result.averaged.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(result.averaged[i].rmse_archive, result.networks[0].rows[i].rmse_archive);
    EXPECT_EQ(result.averaged[i].contributing, 1u);
  }
  EXPECT_EQ(result.sequential.size(), 5u);
}

TEST(Csv, HeadersAndEmptyFields) {
  std::ostringstream out;
  TraceRow row;
  row.trials = 10;
  row.mass_total = 0.5;
  const TraceRow rows[] = {row};
  write_trace_csv(out, rows);
  EXPECT_EQ(out.str(), "phase,trials,rmse_frequency,rmse_archive,mass_total,mass_conditional\n0,10,,,0.5,0\n");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("plain"), "plain");
}

TEST(MethodNames, RoundTrip) {
  for (auto m : {Method::logic, Method::forward, Method::backward, Method::ga_forward, Method::ga_backward}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_method("ga-fwd"), Method::ga_forward);
  EXPECT_FALSE(parse_method("magic").has_value());
}

}  // namespace
}  // namespace anybn
