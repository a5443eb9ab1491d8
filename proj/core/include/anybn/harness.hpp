#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anybn/belief.hpp"
#include "anybn/exact.hpp"
#include "anybn/genetic.hpp"
#include "anybn/netgen.hpp"
#include "anybn/network.hpp"
#include "anybn/samplers.hpp"
#include "anybn/trial.hpp"

namespace anybn {

/// Root mean squared difference over every (node, state) cell. Cells of an
/// undefined estimate score the largest error any estimate could have there,
/// max(p, 1 - p). Throws std::invalid_argument on a shape mismatch or an
/// undefined reference.
double rmse(const BeliefTable& estimate, const BeliefTable& exact);

enum class Method { logic, forward, backward, ga_forward, ga_backward };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view text);
SamplingMethod simulation_method(Method m);
bool uses_search(Method m);

/// One step of the evidence schedule. Observations are added to those of the
/// earlier phases.
struct Phase {
  std::vector<Observation> observe;
  std::size_t sim_trials = 0;
  std::size_t generations = 0;  // genetic methods only
};

enum class RmseMode { automatic, on, off };

struct ExperimentConfig {
  std::string name = "experiment";
  std::string update;  // "seq", "all" or empty; a label for the summary
  Method method = Method::forward;
  std::vector<Phase> phases;
  bool report_frequency = true;
  bool report_archive = true;
  GaParams ga;
  std::vector<std::uint64_t> seeds{1};
  std::size_t trace_stride = 100;
  RmseMode rmse = RmseMode::automatic;
  double oracle_budget = kDefaultOracleBudget;

  /// Throws ConfigError.
  void validate() const;
};

/// Standard schedules over an ordered observation list.
/// "none": one phase, no evidence. "all": one phase with every observation.
/// "seq": an empty phase, then one phase per observation.
std::vector<Phase> make_schedule(std::string_view update, std::span<const Observation> observations,
                                 std::size_t sim_trials, std::size_t generations);

struct TraceRow {
  std::size_t phase = 0;
  std::uint64_t trials = 0;  // cumulative over the run; bred offspring count as trials
  std::optional<double> rmse_frequency;
  std::optional<double> rmse_archive;
  double mass_total = 0.0;
  double mass_conditional = 0.0;
};

struct PhaseOutcome {
  std::size_t n_obs = 0;
  std::optional<double> evidence_probability;  // exact P(X_E) when RMSE is on
  // At the boundary, before any new sampling.
  std::optional<double> start_rmse_frequency;
  std::optional<double> start_rmse_archive;
  std::size_t start_conforming = 0;
  // At the end of the phase.
  std::optional<double> rmse_frequency;
  std::optional<double> rmse_archive;
  double mass_total = 0.0;
  double mass_conditional = 0.0;
  std::uint64_t sim_trials = 0;
  std::uint64_t bred = 0;
  std::optional<StopReason> search_stop;
  bool search_skipped = false;  // no conforming trial could seed the breeders
};

/// Table-shaped result row.
struct SummaryRow {
  std::string experiment;
  std::size_t n_obs = 0;
  std::string update;
  std::string method;
  std::size_t trials = 0;  // simulation trials per phase
  std::size_t n_gen = 0;   // generations per phase
  std::size_t gen_size = 0;
  std::optional<double> rmse_archive;
  std::optional<double> rmse_frequency;
  double mass_archive = 0.0;
  double mass_cond = 0.0;
  std::size_t contributing = 1;  // runs or networks averaged into the row
};

struct RunResult {
  std::uint64_t seed = 0;
  std::vector<TraceRow> trace;
  std::vector<PhaseOutcome> phases;
  SummaryRow summary;
};

struct ExperimentResult {
  std::vector<RunResult> runs;  // one per seed, in config order
  SummaryRow summary;           // averaged over runs
};

/// One seeded run of the schedule. Frequency tallies restart at every phase;
/// the archive persists. Exact posteriors are computed up front, so a
/// non-enumerable network with rmse = on fails before any sampling.
RunResult run_experiment(const Network& net, const ExperimentConfig& config, std::uint64_t seed);

/// Every seed in config.seeds, plus the averaged summary.
ExperimentResult run_experiment(const Network& net, const ExperimentConfig& config);

/// Average of rows describing the same experiment; optional columns average
/// over the rows that have them.
SummaryRow average_rows(std::span<const SummaryRow> rows);

struct StudyConfig {
  NetGenConfig netgen;
  std::vector<std::uint64_t> seeds;  // one network per seed
  std::size_t total_trials = 10000;  // per experiment, split as in the standard grid
  GaParams ga;
  std::size_t trace_stride = 1000;
  RmseMode rmse = RmseMode::automatic;
  std::vector<std::string> rows;  // subset of the grid by name; empty = all
  std::size_t seed_retries = 20;  // fresh seeds to try when a network has too few leaves

  void validate() const;
};

/// The eight comparison rows (Fwd-0-obs ... GA/fwd-4-all) for one network's
/// ordered evidence, with budgets derived from total_trials.
std::vector<ExperimentConfig> standard_grid(std::span<const Observation> evidence, const StudyConfig& config);

struct StudyNetwork {
  std::uint64_t seed = 0;  // seed that finally produced the network
  std::string network;
  std::string evidence;
  std::optional<double> evidence_probability;
  std::vector<SummaryRow> rows;
  std::vector<std::vector<PhaseOutcome>> phases;  // aligned with rows
};

struct SequentialComparisonRow {
  std::size_t n_obs = 0;
  std::optional<double> forward_frequency;  // Fwd-4-seq, frequency estimator
  std::optional<double> ga_archive;         // GA/fwd-4-seq, archive estimator
  std::size_t contributing = 0;
};

struct StudyResult {
  std::vector<SummaryRow> averaged;  // grid order
  std::vector<StudyNetwork> networks;
  std::vector<SequentialComparisonRow> sequential;  // empty unless both seq rows ran
  std::vector<std::string> failures;                // "seed: reason"
};

/// Generates one network per seed, selects low-prior evidence, runs the grid
/// on each and averages. Failed seeds are skipped and listed.
StudyResult run_random_study(const StudyConfig& config);

}  // namespace anybn
