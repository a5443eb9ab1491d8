#include "anybn/genetic.hpp"

#include <algorithm>
#include <limits>

#include "anybn/error.hpp"
#include "anybn/graph.hpp"

namespace anybn {

void GaParams::validate() const {
  if (generation_size < 1) throw ConfigError("generation_size must be at least 1");
  if (breeding_size < 2) throw ConfigError("breeding_size must be at least 2");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) throw ConfigError("crossover_prob must be in [0, 1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw ConfigError("mutation_prob must be in [0, 1]");
  if (!(plateau_epsilon >= 0.0)) throw ConfigError("plateau_epsilon must be non-negative");
  if (max_radius < 1) throw ConfigError("max_radius must be at least 1");
}

bool BreedingPopulation::contains(const IdCode& id) const {
  return std::any_of(members_.begin(), members_.end(), [&](const Breeder& b) { return b.id == id; });
}

double BreedingPopulation::total_fit() const {
  double total = 0.0;
  for (const auto& b : members_) total += b.fit;
  return total;
}

double BreedingPopulation::min_fit() const { return members_.empty() ? 0.0 : members_[worst()].fit; }

double BreedingPopulation::max_fit() const { return members_.empty() ? 0.0 : best().fit; }

const Breeder& BreedingPopulation::best() const {
  return *std::min_element(members_.begin(), members_.end(), [](const Breeder& a, const Breeder& b) {
    if (a.fit != b.fit) return a.fit > b.fit;
    return a.id < b.id;
  });
}

std::size_t BreedingPopulation::worst() const {
  std::size_t w = 0;
  for (std::size_t i = 1; i < members_.size(); ++i) {
    const auto& m = members_[i];
    if (m.fit < members_[w].fit || (m.fit == members_[w].fit && members_[w].id < m.id)) w = i;
  }
  return w;
}

bool BreedingPopulation::offer(Breeder b) {
  if (!(b.fit > 0.0) || contains(b.id)) return false;
  if (members_.size() < capacity_) {
    members_.push_back(std::move(b));
    return true;
  }
  const auto w = worst();
  if (!(b.fit > members_[w].fit)) return false;
  members_[w] = std::move(b);
  return true;
}

InitResult init_breeders(Archive& archive, const Network& net, const Evidence& ev, const GaParams& params,
                         const Simulator& sim, Rng& rng) {
  if (!(archive.evidence() == ev)) archive.set_evidence(ev);
  InitResult out{BreedingPopulation(params.breeding_size), 0};
  auto& pop = out.population;
  for (auto e : archive.top_conforming(params.breeding_size)) {
    pop.offer({archive.trial(e), archive.id(e), archive.probability(e)});
  }
  while (pop.size() < pop.capacity() && out.simulated < params.init_trial_budget) {
    auto wt = sim.draw(rng);
    ++out.simulated;
    if (!conforms(wt.trial, ev)) continue;
    auto id = encode_trial(net, wt.trial);
    const double fit = joint_probability(net, wt.trial);
    archive.insert(wt.trial, id, fit);
    pop.offer({std::move(wt.trial), std::move(id), fit});
  }
  if (pop.empty()) {
    throw EmptyPopulation("no positive-probability trial conforming to the evidence after " +
                          std::to_string(out.simulated) + " simulation trials");
  }
  return out;
}

std::pair<std::size_t, std::size_t> select_parents(const BreedingPopulation& pop, Rng& rng) {
  std::vector<double> fits;
  fits.reserve(pop.size());
  for (const auto& b : pop.members()) fits.push_back(b.fit);
  const double total = pop.total_fit();
  const auto a = sample_categorical(rng, fits, total);
  const auto b = sample_categorical(rng, fits, total);
  return {a, b};
}

Trial splice(const Trial& base, const Trial& donor, const Network& net, NodeId center, std::size_t radius) {
  Trial child = base;
  for (auto n : markov_neighborhood(net, center, radius)) child[n] = donor[n];
  return child;
}

Trial crossover(const Trial& parent_a, const Trial& parent_b, const Network& net, const Evidence& ev,
                const GaParams& params, Rng& rng) {
  Trial child = parent_a;
  if (uniform01(rng) < params.crossover_prob) {
    const NodeId center{static_cast<std::size_t>(uniform_index(rng, net.size()))};
    const auto radius = 1 + static_cast<std::size_t>(uniform_index(rng, params.max_radius));
    child = splice(parent_a, parent_b, net, center, radius);
  }
  for (const auto& obs : ev.observations()) child[obs.node] = obs.state;
  return child;
}

std::vector<double> full_conditional(const Network& net, const Trial& trial, NodeId node) {
  std::vector<State> scratch(trial.states().begin(), trial.states().end());
  std::vector<double> out(net.cardinality(node));
  for (std::size_t s = 0; s < out.size(); ++s) {
    scratch[node.index] = static_cast<State>(s);
    double p = net.conditional(node, scratch);
    for (auto c : net.children(node)) {
      if (p == 0.0) break;
      p *= net.conditional(c, scratch);
    }
    out[s] = p;
  }
  return out;
}

bool resample_node(Trial& trial, const Network& net, NodeId node, Rng& rng) {
  const auto weights = full_conditional(net, trial, node);
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return false;
  trial[node] = static_cast<State>(sample_categorical(rng, weights, total));
  return true;
}

MutationResult mutate(const Trial& trial, const Network& net, const Evidence& ev, const GaParams& params, Rng& rng) {
  MutationResult out{trial, 0, false};
  if (params.mutation_prob <= 0.0) return out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeId n{i};
    if (ev.contains(n)) continue;
    if (uniform01(rng) >= params.mutation_prob) continue;
    if (resample_node(out.trial, net, n, rng)) {
      ++out.mutated;
    } else {
      out.flagged = true;
    }
  }
  return out;
}

GenerationStats breed_generation(BreedingPopulation& pop, Archive& archive, const Network& net, const Evidence& ev,
                                 const GaParams& params, Rng& rng) {
  GenerationStats stats;
  const double before = archive.evidence_mass();
  for (std::size_t k = 0; k < params.generation_size; ++k) {
    const auto [ia, ib] = select_parents(pop, rng);
    auto child = crossover(pop[ia].trial, pop[ib].trial, net, ev, params, rng);
    auto mutated = mutate(child, net, ev, params, rng);
    ++stats.offspring;

    auto id = encode_trial(net, mutated.trial);
    const double fit = joint_probability(net, mutated.trial);
    if (archive.insert(mutated.trial, id, fit)) ++stats.new_uniques;
    if (pop.offer({std::move(mutated.trial), std::move(id), fit})) ++stats.admitted;
  }
  stats.evidence_mass = archive.evidence_mass();
  stats.mass_gained = stats.evidence_mass - before;
  return stats;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::max_generations:
      return "max_generations";
    case StopReason::plateau:
      return "plateau";
    case StopReason::time_budget:
      return "time_budget";
  }
  return "?";
}

std::size_t SearchReport::bred() const {
  std::size_t total = 0;
  for (const auto& g : generations) total += g.offspring;
  return total;
}

SearchReport run_search(Archive& archive, const Network& net, const Evidence& ev, const GaParams& params,
                        const Simulator& sim, const SearchBudget& budget, Rng& rng,
                        const GenerationObserver& observer) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();

  auto init = init_breeders(archive, net, ev, params, sim, rng);
  auto& pop = init.population;
  SearchReport report;
  report.initial_population = pop.size();
  report.init_simulated = init.simulated;
  report.mass_trace.push_back(archive.evidence_mass());

  std::size_t flat = 0;
  for (std::size_t g = 0; g < params.max_generations; ++g) {
    if (budget.wall_clock && std::chrono::steady_clock::now() - start >= *budget.wall_clock) {
      report.stop = StopReason::time_budget;
      break;
    }
    const auto stats = breed_generation(pop, archive, net, ev, params, rng);
    const double prev = report.mass_trace.back();
    report.generations.push_back(stats);
    report.mass_trace.push_back(stats.evidence_mass);
    if (observer) observer(report, archive);

    if (params.plateau_generations > 0) {
      const double rel = prev > 0.0 ? (stats.evidence_mass - prev) / prev : std::numeric_limits<double>::infinity();
      flat = rel < params.plateau_epsilon ? flat + 1 : 0;
      if (flat >= params.plateau_generations) {
        report.stop = StopReason::plateau;
        break;
      }
    }
  }
  report.best = pop.best();
  return report;
}

}  // namespace anybn
