#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anybn/genetic.hpp"
#include "anybn/harness.hpp"
#include "anybn/netgen.hpp"
#include "anybn/network.hpp"
#include "anybn/trial.hpp"

namespace anybn {

// Configuration files are INI-style: "[section]" headers, "key = value"
// lines, '#' or ';' comments. Unknown sections and keys are rejected by name.

using ConfigSection = std::map<std::string, std::string>;

struct ConfigFile {
  std::map<std::string, ConfigSection> sections;
  std::filesystem::path base_dir;  // for resolving relative paths

  const ConfigSection* section(const std::string& name) const;
};

ConfigFile read_config(std::istream& in);
ConfigFile read_config_file(const std::filesystem::path& path);

/// Applies every key of a [ga] / [netgen] section. Throws ConfigError naming
/// the offending key.
void apply_ga_section(GaParams& params, const ConfigSection& section);
void apply_netgen_section(NetGenConfig& config, const ConfigSection& section);

/// "1,2,3", "1-12" or a mix ("1-3, 7").
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// An experiment with its network and evidence resolved.
struct ExperimentSetup {
  Network network;
  Evidence evidence;  // every observation, in schedule order
  ExperimentConfig config;
};

/// Reads [experiment], optional [ga], [netgen] and [phaseN] sections.
///
/// The network comes from `network = <file>` (relative to the config file) or
/// is generated from [netgen]. `evidence` is "auto" (low-prior leaves),
/// "none", or "name=state,...". Without [phaseN] sections the schedule is
/// built from `update` (none/all/seq), `trials` and `generations`.
ExperimentSetup load_experiment(const ConfigFile& file);

/// Reads [study], optional [ga] and [netgen].
StudyConfig load_study(const ConfigFile& file);

}  // namespace anybn
