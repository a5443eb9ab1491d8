#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "anybn/config.hpp"
#include "anybn/csv.hpp"
#include "anybn/error.hpp"
#include "anybn/exact.hpp"
#include "anybn/harness.hpp"
#include "anybn/netgen.hpp"
#include "anybn/network_io.hpp"

namespace anybn::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format = "csv";
};

std::ofstream open_output(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  const auto path = fs::path(g.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

struct GaFlags {
  std::string config;
  std::optional<std::size_t> generation_size, breeding_size, max_radius, plateau_generations, init_trial_budget;
  std::optional<double> crossover_prob, mutation_prob, plateau_epsilon;

  void add_to(CLI::App* app) {
    app->add_option("--ga-config", config, "Config file whose [ga] section sets the parameters");
    app->add_option("--generation-size", generation_size);
    app->add_option("--breeding-size", breeding_size);
    app->add_option("--crossover-prob", crossover_prob);
    app->add_option("--mutation-prob", mutation_prob);
    app->add_option("--max-radius", max_radius);
    app->add_option("--plateau-generations", plateau_generations);
    app->add_option("--plateau-epsilon", plateau_epsilon);
    app->add_option("--init-trial-budget", init_trial_budget);
  }

  GaParams resolve() const {
    GaParams p;
    if (!config.empty()) {
      const auto file = read_config_file(config);
      if (const auto* s = file.section("ga")) apply_ga_section(p, *s);
    }
    if (generation_size) p.generation_size = *generation_size;
    if (breeding_size) p.breeding_size = *breeding_size;
    if (crossover_prob) p.crossover_prob = *crossover_prob;
    if (mutation_prob) p.mutation_prob = *mutation_prob;
    if (max_radius) p.max_radius = *max_radius;
    if (plateau_generations) p.plateau_generations = *plateau_generations;
    if (plateau_epsilon) p.plateau_epsilon = *plateau_epsilon;
    if (init_trial_budget) p.init_trial_budget = *init_trial_budget;
    p.validate();
    return p;
  }
};

void write_run(const Globals& g, const ExperimentResult& result, std::ostream& out) {
  for (const auto& run : result.runs) {
    const auto name = result.runs.size() == 1 ? std::string("trace.csv") : "trace_seed" + std::to_string(run.seed) + ".csv";
    auto f = open_output(g, name);
    write_trace_csv(f, run.trace);
    out << "wrote " << (fs::path(g.out_dir) / name).string() << '\n';
  }
  auto f = open_output(g, "summary.csv");
  const SummaryRow rows[] = {result.summary};
  write_summary_csv(f, rows);
  out << "wrote " << (fs::path(g.out_dir) / "summary.csv").string() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anytime approximate inference for discrete Bayesian networks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides config seeds)");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv"}));

  // gen-net
  auto* gen = app.add_subcommand("gen-net", "Generate a random network file");
  std::string gen_config, gen_output = "network.net", gen_evidence_out;
  std::optional<std::size_t> gen_nodes, gen_max_parents, gen_evidence_count;
  std::optional<double> gen_zero;
  gen->add_option("--config", gen_config, "Config file with a [netgen] section");
  gen->add_option("--nodes", gen_nodes);
  gen->add_option("--max-parents", gen_max_parents);
  gen->add_option("--zero-cell-prob", gen_zero);
  gen->add_option("--evidence-count", gen_evidence_count);
  gen->add_option("-o,--output", gen_output, "Network file name inside --out-dir");
  gen->add_option("--evidence-out", gen_evidence_out, "Also write low-prior evidence to this file in --out-dir");

  // exact
  auto* ex = app.add_subcommand("exact", "Exact posterior by enumeration");
  std::string ex_net, ex_evidence;
  double ex_budget = kDefaultOracleBudget;
  ex->add_option("--net", ex_net, "Network file")->required();
  ex->add_option("--evidence", ex_evidence, "name=state,...");
  ex->add_option("--budget", ex_budget, "Maximum joint states to enumerate");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation with frequency and archive estimators");
  std::string sim_net, sim_evidence, sim_method = "forward";
  std::size_t sim_trials = 10000, sim_stride = 100;
  sim->add_option("--net", sim_net, "Network file")->required();
  sim->add_option("--evidence", sim_evidence, "name=state,...");
  sim->add_option("--method", sim_method, "logic, forward or backward")
      ->check(CLI::IsMember({"logic", "forward", "backward"}));
  sim->add_option("--trials", sim_trials);
  sim->add_option("--stride", sim_stride, "Trace row every N trials");

  // search
  auto* search = app.add_subcommand("search", "Simulation followed by genetic search");
  std::string se_net, se_evidence, se_method = "forward";
  std::size_t se_sim_trials = 1000, se_generations = 50, se_stride = 100;
  GaFlags ga_flags;
  search->add_option("--net", se_net, "Network file")->required();
  search->add_option("--evidence", se_evidence, "name=state,...");
  search->add_option("--sim-method", se_method, "forward or backward")
      ->check(CLI::IsMember({"forward", "backward"}));
  search->add_option("--sim-trials", se_sim_trials);
  search->add_option("--generations", se_generations);
  search->add_option("--stride", se_stride);
  ga_flags.add_to(search);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment config");
  std::string exp_config;
  exp->add_option("--config", exp_config, "Experiment config file")->required();

  // study
  auto* study = app.add_subcommand("study", "Random-network comparison grid");
  std::string st_config, st_seeds;
  std::optional<std::size_t> st_total;
  study->add_option("--config", st_config, "Study config file");
  study->add_option("--seeds", st_seeds, "Network seeds, e.g. 1-12");
  study->add_option("--total-trials", st_total);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      NetGenConfig cfg;
      if (!gen_config.empty()) {
        const auto file = read_config_file(gen_config);
        if (const auto* s = file.section("netgen")) apply_netgen_section(cfg, *s);
      }
      if (gen_nodes) cfg.node_count = *gen_nodes;
      if (gen_max_parents) cfg.max_parents = *gen_max_parents;
      if (gen_zero) cfg.zero_cell_prob = *gen_zero;
      if (gen_evidence_count) cfg.evidence_count = *gen_evidence_count;
      if (g.seed) cfg.seed = *g.seed;
      Rng rng(cfg.seed);
      const auto net = generate_network(cfg, rng);
      auto f = open_output(g, gen_output);
      write_network(f, net);
      out << "wrote " << (fs::path(g.out_dir) / gen_output).string() << '\n';
      if (!gen_evidence_out.empty()) {
        const auto ev = select_low_prior_evidence(net, cfg, rng);
        auto e = open_output(g, gen_evidence_out);
        e << format_evidence(net, ev) << '\n';
        out << "evidence " << format_evidence(net, ev) << '\n';
      }
    } else if (*ex) {
      const auto net = read_network_file(ex_net);
      const auto ev = parse_evidence(net, ex_evidence);
      const auto solution = exact_posterior(net, ev, ex_budget);
      auto f = open_output(g, "exact.csv");
      write_belief_csv(f, net, solution.posterior);
      out << "P(evidence) = " << format_double(solution.evidence_probability) << '\n';
      if (!solution.posterior.defined()) out << "posterior undefined: evidence is impossible\n";
    } else if (*sim) {
      const auto net = read_network_file(sim_net);
      const auto ev = parse_evidence(net, sim_evidence);
      const auto method = *parse_method(sim_method);
      if (method == Method::backward && ev.empty()) {
        throw UsageError("backward simulation requires evidence; use --method forward when nothing is observed");
      }
      ExperimentConfig cfg;
      cfg.name = "simulate";
      cfg.method = method;
      cfg.update = ev.empty() ? "" : "all";
      cfg.phases = make_schedule(ev.empty() ? "none" : "all", ev.observations(), sim_trials, 0);
      cfg.trace_stride = sim_stride;
      cfg.seeds = {g.seed.value_or(1)};
      write_run(g, run_experiment(net, cfg), out);
    } else if (*search) {
      const auto net = read_network_file(se_net);
      const auto ev = parse_evidence(net, se_evidence);
      if (se_method == "backward" && ev.empty()) {
        throw UsageError("backward simulation requires evidence; use --sim-method forward");
      }
      ExperimentConfig cfg;
      cfg.name = "search";
      cfg.method = se_method == "backward" ? Method::ga_backward : Method::ga_forward;
      cfg.update = ev.empty() ? "" : "all";
      cfg.phases = make_schedule(ev.empty() ? "none" : "all", ev.observations(), se_sim_trials, se_generations);
      cfg.ga = ga_flags.resolve();
      cfg.trace_stride = se_stride;
      cfg.seeds = {g.seed.value_or(1)};
      write_run(g, run_experiment(net, cfg), out);
    } else if (*exp) {
      auto setup = load_experiment(read_config_file(exp_config));
      if (g.seed) setup.config.seeds = {*g.seed};
      const auto start = std::chrono::steady_clock::now();
      const auto result = run_experiment(setup.network, setup.config);
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      write_run(g, result, out);
      err << "experiment '" << setup.config.name << "' finished in " << elapsed.count() << " s\n";
    } else if (*study) {
      StudyConfig cfg;
      if (!st_config.empty()) {
        cfg = load_study(read_config_file(st_config));
      } else {
        cfg.seeds = parse_seed_list("1-12");
      }
      if (!st_seeds.empty()) cfg.seeds = parse_seed_list(st_seeds);
      if (g.seed) cfg.seeds = {*g.seed};
      if (st_total) cfg.total_trials = *st_total;
      const auto result = run_random_study(cfg);
      {
        auto f = open_output(g, "study.csv");
        write_summary_csv(f, result.averaged, true);
      }
      if (!result.sequential.empty()) {
        auto f = open_output(g, "sequential.csv");
        write_sequential_csv(f, result.sequential);
      }
      {
        auto f = open_output(g, "networks.csv");
        f << "seed,network,evidence,evidence_probability\n";
        for (const auto& n : result.networks) {
          f << n.seed << ',' << csv_escape(n.network) << ',' << csv_escape(n.evidence) << ','
            << (n.evidence_probability ? format_double(*n.evidence_probability) : std::string()) << '\n';
        }
      }
      for (const auto& failure : result.failures) err << "skipped seed " << failure << '\n';
      out << "study over " << result.networks.size() << " network(s) written to " << g.out_dir << '\n';
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidEvidence& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace anybn::cli
