#include "anybn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anybn/archive.hpp"
#include "anybn/error.hpp"
#include "anybn/network_io.hpp"

namespace anybn {

double rmse(const BeliefTable& estimate, const BeliefTable& exact) {
  if (!estimate.same_shape(exact)) throw std::invalid_argument("rmse: belief tables differ in shape");
  if (!exact.defined()) throw std::invalid_argument("rmse: reference table is undefined");
  const auto e = estimate.cells();
  const auto p = exact.cells();
  if (p.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = estimate.defined() ? e[i] - p[i] : std::max(p[i], 1.0 - p[i]);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(p.size()));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::logic:
      return "logic";
    case Method::forward:
      return "forward";
    case Method::backward:
      return "backward";
    case Method::ga_forward:
      return "ga-forward";
    case Method::ga_backward:
      return "ga-backward";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "logic") return Method::logic;
  if (text == "forward" || text == "fwd") return Method::forward;
  if (text == "backward" || text == "bwd") return Method::backward;
  if (text == "ga-forward" || text == "ga-fwd") return Method::ga_forward;
  if (text == "ga-backward" || text == "ga-bwd") return Method::ga_backward;
  return std::nullopt;
}

SamplingMethod simulation_method(Method m) {
  switch (m) {
    case Method::logic:
      return SamplingMethod::logic;
    case Method::backward:
    case Method::ga_backward:
      return SamplingMethod::backward;
    default:
      return SamplingMethod::forward;
  }
}

bool uses_search(Method m) { return m == Method::ga_forward || m == Method::ga_backward; }

void ExperimentConfig::validate() const {
  if (phases.empty()) throw ConfigError("experiment '" + name + "' has no phases");
  if (!report_frequency && !report_archive) throw ConfigError("at least one estimator must be reported");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (trace_stride == 0) throw ConfigError("trace_stride must be positive");
  if (uses_search(method)) ga.validate();
}

std::vector<Phase> make_schedule(std::string_view update, std::span<const Observation> observations,
                                 std::size_t sim_trials, std::size_t generations) {
  std::vector<Phase> phases;
  if (update == "none" || update.empty()) {
    phases.push_back({{}, sim_trials, generations});
  } else if (update == "all") {
    phases.push_back({{observations.begin(), observations.end()}, sim_trials, generations});
  } else if (update == "seq") {
    phases.push_back({{}, sim_trials, generations});
    for (const auto& obs : observations) phases.push_back({{obs}, sim_trials, generations});
  } else {
    throw ConfigError("unknown update schedule '" + std::string(update) + "' (expected none, all or seq)");
  }
  return phases;
}

namespace {

class Recorder {
 public:
  Recorder(const ExperimentConfig& config, const Archive& archive, const FrequencyTally& tally)
      : config_(config), archive_(archive), tally_(tally) {}

  void set_reference(const BeliefTable* exact) { exact_ = exact; }

  TraceRow snapshot(std::size_t phase, std::uint64_t trials) const {
    TraceRow row;
    row.phase = phase;
    row.trials = trials;
    if (exact_) {
      if (config_.report_frequency) row.rmse_frequency = rmse(frequency_estimate(tally_), *exact_);
      if (config_.report_archive) row.rmse_archive = rmse(archive_.posterior(), *exact_);
    }
    row.mass_total = archive_.total_mass();
    row.mass_conditional = archive_.evidence_mass();
    return row;
  }

  void record(std::vector<TraceRow>& trace, std::size_t phase, std::uint64_t trials) {
    trace.push_back(snapshot(phase, trials));
    last_phase_ = phase;
    last_trials_ = trials;
    next_mark_ = (trials / config_.trace_stride + 1) * config_.trace_stride;
  }

  void maybe_record(std::vector<TraceRow>& trace, std::size_t phase, std::uint64_t trials) {
    if (trials >= next_mark_) record(trace, phase, trials);
  }

  bool recorded(std::size_t phase, std::uint64_t trials) const {
    return last_phase_ == phase && last_trials_ == trials;
  }

 private:
  const ExperimentConfig& config_;
  const Archive& archive_;
  const FrequencyTally& tally_;
  const BeliefTable* exact_ = nullptr;
  std::uint64_t next_mark_ = 0;
  std::size_t last_phase_ = SIZE_MAX;
  std::uint64_t last_trials_ = 0;
};

}  // namespace

RunResult run_experiment(const Network& net, const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();

  std::vector<Evidence> evidence;
  {
    Evidence ev;
    for (const auto& phase : config.phases) {
      for (const auto& obs : phase.observe) ev.add(obs);
      ev.validate(net);
      evidence.push_back(ev);
    }
  }

  bool with_rmse = false;
  switch (config.rmse) {
    case RmseMode::on:
      if (!enumerable(net, config.oracle_budget)) {
        throw ConfigError("RMSE needs exact posteriors but the network has " + format_double(net.joint_state_count()) +
                          " joint states (budget " + format_double(config.oracle_budget) + ")");
      }
      with_rmse = true;
      break;
    case RmseMode::automatic:
      with_rmse = enumerable(net, config.oracle_budget);
      break;
    case RmseMode::off:
      break;
  }

  std::vector<ExactSolution> exact;
  if (with_rmse) {
    for (std::size_t p = 0; p < evidence.size(); ++p) {
      exact.push_back(exact_posterior(net, evidence[p], config.oracle_budget));
      if (!exact.back().posterior.defined()) {
        throw ConfigError("evidence of phase " + std::to_string(p) + " has probability zero");
      }
    }
  }

  RunResult result;
  result.seed = seed;
  Rng rng(seed);
  Archive archive(net);
  FrequencyTally tally(net);
  Recorder recorder(config, archive, tally);
  std::uint64_t trials = 0;

  for (std::size_t p = 0; p < config.phases.size(); ++p) {
    const auto& phase = config.phases[p];
    const auto& ev = evidence[p];
    PhaseOutcome outcome;
    outcome.n_obs = ev.size();
    if (with_rmse) {
      recorder.set_reference(&exact[p].posterior);
      outcome.evidence_probability = exact[p].evidence_probability;
    }

    outcome.start_conforming = archive.set_evidence(ev);
    tally.reset();
    recorder.record(result.trace, p, trials);
    outcome.start_rmse_frequency = result.trace.back().rmse_frequency;
    outcome.start_rmse_archive = result.trace.back().rmse_archive;

    const Simulator sim(net, ev, simulation_method(config.method));
    for (std::size_t t = 0; t < phase.sim_trials; ++t) {
      auto wt = sim.draw(rng);
      tally.add(wt);
      archive.insert(wt.trial);
      ++trials;
      recorder.maybe_record(result.trace, p, trials);
    }
    outcome.sim_trials = phase.sim_trials;

    if (uses_search(config.method) && phase.generations > 0) {
      GaParams ga = config.ga;
      ga.max_generations = phase.generations;
      const auto before = trials;
      try {
        const auto report = run_search(archive, net, ev, ga, sim, SearchBudget{}, rng,
                                       [&](const SearchReport& so_far, const Archive&) {
                                         trials = before + so_far.init_simulated + so_far.bred();
                                         recorder.maybe_record(result.trace, p, trials);
                                       });
        trials = before + report.init_simulated + report.bred();
        outcome.bred = report.bred();
        outcome.sim_trials += report.init_simulated;
        outcome.search_stop = report.stop;
      } catch (const EmptyPopulation&) {
        // init_breeders spent its budget; those draws still count.
        trials = before + ga.init_trial_budget;
        outcome.sim_trials += ga.init_trial_budget;
        outcome.search_skipped = true;
      }
    }

    if (!recorder.recorded(p, trials)) recorder.record(result.trace, p, trials);
    const auto& last = result.trace.back();
    outcome.rmse_frequency = last.rmse_frequency;
    outcome.rmse_archive = last.rmse_archive;
    outcome.mass_total = last.mass_total;
    outcome.mass_conditional = last.mass_conditional;
    result.phases.push_back(outcome);
  }

  auto& s = result.summary;
  s.experiment = config.name;
  s.n_obs = evidence.back().size();
  s.update = config.update;
  s.method = std::string(to_string(config.method));
  for (const auto& phase : config.phases) {
    s.trials = std::max(s.trials, phase.sim_trials);
    if (uses_search(config.method)) s.n_gen = std::max(s.n_gen, phase.generations);
  }
  s.gen_size = uses_search(config.method) ? config.ga.generation_size : 0;
  const auto& final = result.phases.back();
  s.rmse_archive = final.rmse_archive;
  s.rmse_frequency = final.rmse_frequency;
  s.mass_archive = final.mass_total;
  s.mass_cond = final.mass_conditional;
  s.contributing = 1;
  return result;
}

ExperimentResult run_experiment(const Network& net, const ExperimentConfig& config) {
  config.validate();
  ExperimentResult out;
  std::vector<SummaryRow> rows;
  for (auto seed : config.seeds) {
    out.runs.push_back(run_experiment(net, config, seed));
    rows.push_back(out.runs.back().summary);
  }
  out.summary = average_rows(rows);
  return out;
}

SummaryRow average_rows(std::span<const SummaryRow> rows) {
  if (rows.empty()) return {};
  SummaryRow out = rows.front();
  auto mean_opt = [&](auto field) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (const auto& v = r.*field) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  out.rmse_archive = mean_opt(&SummaryRow::rmse_archive);
  out.rmse_frequency = mean_opt(&SummaryRow::rmse_frequency);
  double ma = 0.0, mc = 0.0;
  for (const auto& r : rows) {
    ma += r.mass_archive;
    mc += r.mass_cond;
  }
  out.mass_archive = ma / static_cast<double>(rows.size());
  out.mass_cond = mc / static_cast<double>(rows.size());
  out.contributing = rows.size();
  return out;
}

void StudyConfig::validate() const {
  netgen.validate();
  if (seeds.empty()) throw ConfigError("study needs at least one seed");
  if (total_trials == 0) throw ConfigError("total_trials must be positive");
  if (trace_stride == 0) throw ConfigError("trace_stride must be positive");
  ga.validate();
}

std::vector<ExperimentConfig> standard_grid(std::span<const Observation> evidence, const StudyConfig& config) {
  const auto T = config.total_trials;
  const auto n = evidence.size();
  const auto gen_size = config.ga.generation_size;
  const auto obs = std::to_string(n);

  auto make = [&](std::string name, Method method, std::string update, std::size_t sim, std::size_t gens) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.method = method;
    c.update = update;
    c.phases = make_schedule(update.empty() ? "none" : update, evidence, sim, gens);
    c.ga = config.ga;
    c.trace_stride = config.trace_stride;
    c.rmse = config.rmse;
    c.oracle_budget = config.netgen.oracle_budget;
    return c;
  };

  // GA rows split each budget evenly between simulation and breeding.
  const auto seq_phase = T / (n + 1);
  std::vector<ExperimentConfig> grid;
  grid.push_back(make("Fwd-0-obs", Method::forward, "", T, 0));
  grid.push_back(make("GA/fwd-0-obs", Method::ga_forward, "", T / 2, (T - T / 2) / gen_size));
  grid.push_back(make("Fwd-" + obs + "-seq", Method::forward, "seq", seq_phase, 0));
  grid.push_back(make("Bwd-" + obs + "-seq", Method::backward, "seq", seq_phase, 0));
  grid.push_back(
      make("GA/fwd-" + obs + "-seq", Method::ga_forward, "seq", seq_phase / 2, (seq_phase - seq_phase / 2) / gen_size));
  grid.push_back(make("Fwd-" + obs + "-all", Method::forward, "all", T, 0));
  grid.push_back(make("Bwd-" + obs + "-all", Method::backward, "all", T, 0));
  grid.push_back(make("GA/fwd-" + obs + "-all", Method::ga_forward, "all", T / 2, (T - T / 2) / gen_size));

  if (!config.rows.empty()) {
    std::vector<ExperimentConfig> picked;
    for (const auto& want : config.rows) {
      auto it = std::find_if(grid.begin(), grid.end(), [&](const ExperimentConfig& c) { return c.name == want; });
      if (it == grid.end()) throw ConfigError("unknown study row '" + want + "'");
      picked.push_back(*it);
    }
    grid = std::move(picked);
  }
  return grid;
}

StudyResult run_random_study(const StudyConfig& config) {
  config.validate();
  StudyResult out;
  std::vector<std::vector<SummaryRow>> per_row;
  std::vector<std::string> row_names;

  for (auto seed : config.seeds) {
    try {
      NetGenConfig gen = config.netgen;
      std::optional<Network> net;
      Evidence ev;
      for (std::size_t attempt = 0;; ++attempt) {
        gen.seed = attempt == 0 ? seed : derive_seed(seed, attempt);
        Rng rng(gen.seed);
        net.emplace(generate_network(gen, rng));
        try {
          ev = select_low_prior_evidence(*net, gen, rng);
          break;
        } catch (const TooFewLeaves&) {
          if (attempt >= config.seed_retries) throw;
        }
      }

      StudyNetwork record;
      record.seed = gen.seed;
      record.network = net->name();
      record.evidence = format_evidence(*net, ev);
      const auto grid = standard_grid(ev.observations(), config);
      if (row_names.empty()) {
        for (const auto& c : grid) row_names.push_back(c.name);
        per_row.resize(grid.size());
      }
      for (std::size_t r = 0; r < grid.size(); ++r) {
        auto run = run_experiment(*net, grid[r], derive_seed(seed, r));
        if (!record.evidence_probability && run.phases.back().n_obs == ev.size()) {
          record.evidence_probability = run.phases.back().evidence_probability;
        }
        record.rows.push_back(run.summary);
        record.phases.push_back(std::move(run.phases));
      }
      for (std::size_t r = 0; r < grid.size(); ++r) per_row[r].push_back(record.rows[r]);
      out.networks.push_back(std::move(record));
    } catch (const std::exception& e) {
      out.failures.push_back(std::to_string(seed) + ": " + e.what());
    }
  }

  for (const auto& rows : per_row) out.averaged.push_back(average_rows(rows));

  // Per-phase comparison of the two sequential rows, when both ran.
  const auto find_row = [&](std::string_view prefix) -> std::optional<std::size_t> {
    for (std::size_t r = 0; r < row_names.size(); ++r) {
      if (row_names[r].starts_with(prefix) && row_names[r].ends_with("-seq")) return r;
    }
    return std::nullopt;
  };
  const auto fwd = find_row("Fwd-");
  const auto ga = find_row("GA/fwd-");
  if (fwd && ga && !out.networks.empty()) {
    const auto phases = out.networks.front().phases[*fwd].size();
    for (std::size_t p = 0; p < phases; ++p) {
      SequentialComparisonRow row;
      row.n_obs = out.networks.front().phases[*fwd][p].n_obs;
      double f = 0.0, g = 0.0;
      std::size_t nf = 0, ng = 0;
      for (const auto& net : out.networks) {
        if (const auto& v = net.phases[*fwd][p].rmse_frequency) {
          f += *v;
          ++nf;
        }
        if (const auto& v = net.phases[*ga][p].rmse_archive) {
          g += *v;
          ++ng;
        }
      }
      if (nf) row.forward_frequency = f / static_cast<double>(nf);
      if (ng) row.ga_archive = g / static_cast<double>(ng);
      row.contributing = std::max(nf, ng);
      out.sequential.push_back(row);
    }
  }
  return out;
}

}  // namespace anybn
