#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "anybn/archive.hpp"
#include "anybn/network.hpp"
#include "anybn/rng.hpp"
#include "anybn/samplers.hpp"
#include "anybn/trial.hpp"

namespace anybn {

struct GaParams {
  std::size_t generation_size = 50;
  std::size_t breeding_size = 40;
  std::size_t max_generations = 50;
  double crossover_prob = 0.85;
  double mutation_prob = 0.01;
  // Stop once the conforming mass grows by less than plateau_epsilon
  // (relative) for plateau_generations generations in a row. 0 disables.
  std::size_t plateau_generations = 10;
  double plateau_epsilon = 1e-4;
  // Crossover radius is uniform on {1, ..., max_radius}.
  std::size_t max_radius = 3;
  // Simulation trials init_breeders may spend topping up the population.
  std::size_t init_trial_budget = 1000;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct Breeder {
  Trial trial;
  IdCode id;
  double fit = 0.0;  // joint probability
};

/// The best trials seen so far. Every member conforms to the evidence, has
/// positive fit and a distinct id code.
class BreedingPopulation {
 public:
  explicit BreedingPopulation(std::size_t capacity) : capacity_(capacity) {}

  std::span<const Breeder> members() const noexcept { return members_; }
  const Breeder& operator[](std::size_t i) const { return members_[i]; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return members_.empty(); }

  bool contains(const IdCode& id) const;
  double total_fit() const;
  double min_fit() const;
  double max_fit() const;
  const Breeder& best() const;

  /// Appends while below capacity; afterwards replaces the worst member
  /// (lowest fit, then highest id) only on a strictly better fit. Duplicates
  /// and non-positive fits are refused. Returns whether b was admitted.
  bool offer(Breeder b);

 private:
  std::size_t worst() const;

  std::size_t capacity_;
  std::vector<Breeder> members_;
};

struct InitResult {
  BreedingPopulation population;
  std::size_t simulated = 0;  // trials drawn to top up the population
};

/// Seeds the breeders with the archive's best conforming trials, then tops up
/// with `sim` (inserting what it draws into the archive) until the population
/// is full or params.init_trial_budget is spent. Throws EmptyPopulation when
/// no positive-probability conforming trial is found.
InitResult init_breeders(Archive& archive, const Network& net, const Evidence& ev, const GaParams& params,
                         const Simulator& sim, Rng& rng);

/// Two independent fitness-proportional draws, with replacement.
std::pair<std::size_t, std::size_t> select_parents(const BreedingPopulation& pop, Rng& rng);

/// Copy of `base` with the states on Markov neighborhood M^radius(center)
/// taken from `donor`.
Trial splice(const Trial& base, const Trial& donor, const Network& net, NodeId center, std::size_t radius);

/// With probability crossover_prob, splices a neighborhood around a uniformly
/// chosen center with a uniformly chosen radius; otherwise copies parent_a.
/// Evidence is re-clamped on the result.
Trial crossover(const Trial& parent_a, const Trial& parent_b, const Network& net, const Evidence& ev,
                const GaParams& params, Rng& rng);

/// Unnormalized full conditional of `node` given every other state in the
/// trial: own CPT factor times the factors of its children.
std::vector<double> full_conditional(const Network& net, const Trial& trial, NodeId node);

/// Redraws `node` from its full conditional. Leaves it unchanged and returns
/// false when the conditional is identically zero.
bool resample_node(Trial& trial, const Network& net, NodeId node, Rng& rng);

struct MutationResult {
  Trial trial;
  std::size_t mutated = 0;
  bool flagged = false;  // some node had an all-zero conditional
};

/// Each non-evidence node, in index order, is redrawn from its full
/// conditional with probability mutation_prob.
MutationResult mutate(const Trial& trial, const Network& net, const Evidence& ev, const GaParams& params, Rng& rng);

struct GenerationStats {
  std::size_t offspring = 0;
  std::size_t new_uniques = 0;
  std::size_t admitted = 0;
  double mass_gained = 0.0;
  double evidence_mass = 0.0;  // archive conditional mass after the generation
};

/// Breeds generation_size offspring: select, crossover, mutate, evaluate,
/// archive, and offer to the population.
GenerationStats breed_generation(BreedingPopulation& pop, Archive& archive, const Network& net, const Evidence& ev,
                                 const GaParams& params, Rng& rng);

enum class StopReason { max_generations, plateau, time_budget };
std::string_view to_string(StopReason r);

struct SearchBudget {
  std::optional<std::chrono::steady_clock::duration> wall_clock;
};

struct SearchReport {
  std::size_t initial_population = 0;
  std::size_t init_simulated = 0;
  std::vector<double> mass_trace;  // conforming mass after init, then after each generation
  std::vector<GenerationStats> generations;
  StopReason stop = StopReason::max_generations;
  Breeder best;

  std::size_t bred() const;
};

/// Called after every generation with the report so far.
using GenerationObserver = std::function<void(const SearchReport&, const Archive&)>;

/// init_breeders followed by breed_generation until plateau, max_generations
/// or the wall-clock budget. The archive is only ever added to.
SearchReport run_search(Archive& archive, const Network& net, const Evidence& ev, const GaParams& params,
                        const Simulator& sim, const SearchBudget& budget, Rng& rng,
                        const GenerationObserver& observer = {});

}  // namespace anybn
