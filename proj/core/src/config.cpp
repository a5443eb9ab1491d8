#include "anybn/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "anybn/error.hpp"
#include "anybn/network_io.hpp"

namespace anybn {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& section, const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("[" + section + "] " + key + " = '" + value + "': expected " + expected);
}

std::size_t to_count(const std::string& section, const std::string& key, const std::string& value) {
  std::size_t out;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(section, key, value, "a non-negative integer");
  return out;
}

double to_real(const std::string& section, const std::string& key, const std::string& value) {
  double out;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(section, key, value, "a number");
  return out;
}

RmseMode to_rmse_mode(const std::string& section, const std::string& key, const std::string& value) {
  if (value == "auto") return RmseMode::automatic;
  if (value == "on") return RmseMode::on;
  if (value == "off") return RmseMode::off;
  bad_value(section, key, value, "auto, on or off");
}

void reject_unknown_sections(const ConfigFile& file, const std::set<std::string>& allowed, bool allow_phases) {
  for (const auto& [name, _] : file.sections) {
    if (allowed.contains(name)) continue;
    if (allow_phases && name.starts_with("phase") && name.size() > 5 &&
        std::all_of(name.begin() + 5, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    throw ConfigError("unknown config section [" + name + "]");
  }
}

}  // namespace

const ConfigSection* ConfigFile::section(const std::string& name) const {
  auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

ConfigFile read_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  ConfigFile file;
  for (const auto& [name, node] : tree) {
    if (node.empty()) throw ConfigError("config key '" + name + "' is outside any [section]");
    auto& section = file.sections[name];
    for (const auto& [key, value] : node) section[trim(key)] = trim(value.get_value<std::string>());
  }
  return file;
}

ConfigFile read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  auto file = read_config(in);
  file.base_dir = path.parent_path();
  return file;
}

void apply_ga_section(GaParams& p, const ConfigSection& section) {
  const std::string s = "ga";
  for (const auto& [key, value] : section) {
    if (key == "generation_size") {
      p.generation_size = to_count(s, key, value);
    } else if (key == "breeding_size") {
      p.breeding_size = to_count(s, key, value);
    } else if (key == "max_generations") {
      p.max_generations = to_count(s, key, value);
    } else if (key == "crossover_prob") {
      p.crossover_prob = to_real(s, key, value);
    } else if (key == "mutation_prob") {
      p.mutation_prob = to_real(s, key, value);
    } else if (key == "plateau_generations") {
      p.plateau_generations = to_count(s, key, value);
    } else if (key == "plateau_epsilon") {
      p.plateau_epsilon = to_real(s, key, value);
    } else if (key == "max_radius") {
      p.max_radius = to_count(s, key, value);
    } else if (key == "init_trial_budget") {
      p.init_trial_budget = to_count(s, key, value);
    } else {
      throw ConfigError("unknown key '" + key + "' in [ga]");
    }
  }
  p.validate();
}

void apply_netgen_section(NetGenConfig& c, const ConfigSection& section) {
  const std::string s = "netgen";
  for (const auto& [key, value] : section) {
    if (key == "node_count") {
      c.node_count = to_count(s, key, value);
    } else if (key == "max_parents") {
      c.max_parents = to_count(s, key, value);
    } else if (key == "cardinality_weights") {
      c.cardinality_weights.clear();
      for (const auto& item : split_list(value)) c.cardinality_weights.push_back(to_real(s, key, item));
    } else if (key == "zero_cell_prob") {
      c.zero_cell_prob = to_real(s, key, value);
    } else if (key == "evidence_count") {
      c.evidence_count = to_count(s, key, value);
    } else if (key == "seed") {
      c.seed = to_count(s, key, value);
    } else if (key == "oracle_budget") {
      c.oracle_budget = to_real(s, key, value);
    } else if (key == "prior_samples") {
      c.prior_samples = to_count(s, key, value);
    } else {
      throw ConfigError("unknown key '" + key + "' in [netgen]");
    }
  }
  c.validate();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(to_count("", "seeds", item));
      continue;
    }
    const auto lo = to_count("", "seeds", trim(item.substr(0, dash)));
    const auto hi = to_count("", "seeds", trim(item.substr(dash + 1)));
    if (hi < lo || hi - lo > 100000) throw ConfigError("bad seed range '" + item + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty seed list");
  return out;
}

ExperimentSetup load_experiment(const ConfigFile& file) {
  reject_unknown_sections(file, {"experiment", "ga", "netgen"}, true);
  const auto* exp = file.section("experiment");
  if (!exp) throw ConfigError("missing [experiment] section");

  ExperimentConfig config;
  NetGenConfig netgen;
  if (const auto* ga = file.section("ga")) apply_ga_section(config.ga, *ga);
  if (const auto* ng = file.section("netgen")) apply_netgen_section(netgen, *ng);

  const std::string s = "experiment";
  std::optional<std::string> network_file;
  std::string evidence_text = "none";
  std::string update = "none";
  std::size_t trials = 1000;
  std::size_t generations = 0;
  for (const auto& [key, value] : *exp) {
    if (key == "name") {
      config.name = value;
    } else if (key == "method") {
      auto m = parse_method(value);
      if (!m) bad_value(s, key, value, "logic, forward, backward, ga-forward or ga-backward");
      config.method = *m;
    } else if (key == "update") {
      update = value;
    } else if (key == "network") {
      network_file = value;
    } else if (key == "evidence") {
      evidence_text = value;
    } else if (key == "trials") {
      trials = to_count(s, key, value);
    } else if (key == "generations") {
      generations = to_count(s, key, value);
    } else if (key == "seeds") {
      config.seeds = parse_seed_list(value);
    } else if (key == "trace_stride") {
      config.trace_stride = to_count(s, key, value);
    } else if (key == "estimators") {
      config.report_frequency = config.report_archive = false;
      for (const auto& e : split_list(value)) {
        if (e == "frequency") {
          config.report_frequency = true;
        } else if (e == "archive") {
          config.report_archive = true;
        } else {
          bad_value(s, key, value, "a list of frequency, archive");
        }
      }
    } else if (key == "rmse") {
      config.rmse = to_rmse_mode(s, key, value);
    } else if (key == "oracle_budget") {
      config.oracle_budget = to_real(s, key, value);
      netgen.oracle_budget = config.oracle_budget;
    } else {
      throw ConfigError("unknown key '" + key + "' in [experiment]");
    }
  }
  if (update != "none" && update != "all" && update != "seq") bad_value(s, "update", update, "none, all or seq");
  config.update = update == "none" ? "" : update;

  std::optional<Network> net;
  if (network_file) {
    std::filesystem::path path(*network_file);
    if (path.is_relative()) path = file.base_dir / path;
    net.emplace(read_network_file(path));
  } else {
    net.emplace(generate_network(netgen));
  }

  Evidence evidence;
  if (evidence_text == "auto") {
    Rng rng(derive_seed(netgen.seed, 0xe71d));
    evidence = select_low_prior_evidence(*net, netgen, rng);
  } else if (evidence_text != "none") {
    evidence = parse_evidence(*net, evidence_text);
  }

  std::vector<std::pair<std::size_t, const ConfigSection*>> phase_sections;
  for (const auto& [name, section] : file.sections) {
    if (name.starts_with("phase")) phase_sections.emplace_back(to_count(name, "index", name.substr(5)), &section);
  }
  std::sort(phase_sections.begin(), phase_sections.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  if (phase_sections.empty()) {
    config.phases = make_schedule(update, evidence.observations(), trials, generations);
  } else {
    Evidence all;
    for (const auto& [index, section] : phase_sections) {
      const auto sname = "phase" + std::to_string(index);
      Phase phase{{}, trials, generations};
      for (const auto& [key, value] : *section) {
        if (key == "observe") {
          for (const auto& obs : parse_evidence(*net, value).observations()) {
            phase.observe.push_back(obs);
            all.add(obs);
          }
        } else if (key == "trials") {
          phase.sim_trials = to_count(sname, key, value);
        } else if (key == "generations") {
          phase.generations = to_count(sname, key, value);
        } else {
          throw ConfigError("unknown key '" + key + "' in [" + sname + "]");
        }
      }
      config.phases.push_back(std::move(phase));
    }
    evidence = all;
  }
  config.validate();
  return ExperimentSetup{std::move(*net), std::move(evidence), std::move(config)};
}

StudyConfig load_study(const ConfigFile& file) {
  reject_unknown_sections(file, {"study", "ga", "netgen"}, false);
  StudyConfig config;
  config.seeds = parse_seed_list("1-12");
  if (const auto* ga = file.section("ga")) apply_ga_section(config.ga, *ga);
  if (const auto* ng = file.section("netgen")) apply_netgen_section(config.netgen, *ng);
  if (const auto* study = file.section("study")) {
    const std::string s = "study";
    for (const auto& [key, value] : *study) {
      if (key == "seeds") {
        config.seeds = parse_seed_list(value);
      } else if (key == "total_trials") {
        config.total_trials = to_count(s, key, value);
      } else if (key == "trace_stride") {
        config.trace_stride = to_count(s, key, value);
      } else if (key == "rmse") {
        config.rmse = to_rmse_mode(s, key, value);
      } else if (key == "rows") {
        config.rows = split_list(value);
      } else if (key == "seed_retries") {
        config.seed_retries = to_count(s, key, value);
      } else {
        throw ConfigError("unknown key '" + key + "' in [study]");
      }
    }
  }
  config.validate();
  return config;
}

}  // namespace anybn
