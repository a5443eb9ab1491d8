#include "anybn/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "anybn/samplers.hpp"

namespace anybn {

namespace {

constexpr int kRowRedraws = 100;

std::vector<double> random_row(std::size_t k, double zero_prob, Rng& rng) {
  std::vector<double> row(k);
  for (int attempt = 0; attempt < kRowRedraws; ++attempt) {
    double sum = 0.0;
    for (auto& cell : row) {
      if (uniform01(rng) < zero_prob) {
        cell = 0.0;
      } else {
        do {
          cell = uniform01(rng);
        } while (cell == 0.0);
      }
      sum += cell;
    }
    if (sum > 0.0) {
      for (auto& cell : row) cell /= sum;
      return row;
    }
  }
  std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(k));
  return row;
}

}  // namespace

void NetGenConfig::validate() const {
  if (node_count < 1) throw ConfigError("node_count must be at least 1");
  if (cardinality_weights.empty()) throw ConfigError("cardinality_weights must not be empty");
  double sum = 0.0;
  for (double w : cardinality_weights) {
    if (!(w >= 0.0)) throw ConfigError("cardinality_weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("cardinality_weights must sum to 1");
  if (!(zero_cell_prob >= 0.0 && zero_cell_prob < 1.0)) throw ConfigError("zero_cell_prob must be in [0, 1)");
}

Network generate_network(const NetGenConfig& config, Rng& rng) {
  config.validate();
  std::vector<NodeSpec> specs(config.node_count);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < config.node_count; ++i) {
    auto& spec = specs[i];
    spec.name = "X" + std::to_string(i);
    spec.cardinality = 2 + sample_categorical(rng, config.cardinality_weights, 1.0);

    const auto wanted = static_cast<std::size_t>(uniform_index(rng, config.max_parents + 1));
    const auto count = std::min(wanted, i);
    pool.resize(i);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t j = 0; j < count; ++j) {
      const auto pick = j + static_cast<std::size_t>(uniform_index(rng, i - j));
      std::swap(pool[j], pool[pick]);
    }
    std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
    for (std::size_t j = 0; j < count; ++j) spec.parents.emplace_back(pool[j]);

    std::size_t rows = 1;
    for (auto p : spec.parents) rows *= specs[p.index].cardinality;
    spec.cpt.reserve(rows * spec.cardinality);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto row = random_row(spec.cardinality, config.zero_cell_prob, rng);
      spec.cpt.insert(spec.cpt.end(), row.begin(), row.end());
    }
  }
  return Network("random-" + std::to_string(config.seed), std::move(specs));
}

Network generate_network(const NetGenConfig& config) {
  Rng rng(config.seed);
  return generate_network(config, rng);
}

std::vector<NodeId> leaves(const Network& net) {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.children(NodeId{i}).empty()) out.emplace_back(i);
  }
  return out;
}

Evidence select_low_prior_evidence(const Network& net, const NetGenConfig& config, Rng& rng) {
  const auto leaf_nodes = leaves(net);
  if (leaf_nodes.size() < config.evidence_count) {
    throw TooFewLeaves("network has " + std::to_string(leaf_nodes.size()) + " leaves, need " +
                       std::to_string(config.evidence_count));
  }

  const bool exact = enumerable(net, config.oracle_budget);
  BeliefTable prior;
  std::vector<Trial> samples;
  if (exact) {
    prior = exact_prior(net, config.oracle_budget);
  } else {
    FrequencyTally tally(net);
    samples.reserve(config.prior_samples);
    for (std::size_t t = 0; t < config.prior_samples; ++t) {
      samples.push_back(logic_sample(net, rng));
      tally.add(samples.back(), 1.0);
    }
    prior = frequency_estimate(tally);
  }

  auto feasible = [&](const Evidence& ev) {
    if (exact) return exact_posterior(net, ev, config.oracle_budget).evidence_probability > 0.0;
    return std::any_of(samples.begin(), samples.end(), [&](const Trial& t) { return conforms(t, ev); });
  };

  struct Candidate {
    NodeId leaf;
    std::vector<State> states;  // positive-prior states, ascending prior
  };
  std::vector<Candidate> candidates;
  for (auto leaf : leaf_nodes) {
    Candidate c{leaf, {}};
    for (State s = 0; s < net.cardinality(leaf); ++s) {
      if (prior.at(leaf, s) > 0.0) c.states.push_back(s);
    }
    std::stable_sort(c.states.begin(), c.states.end(),
                     [&](State a, State b) { return prior.at(leaf, a) < prior.at(leaf, b); });
    if (!c.states.empty()) candidates.push_back(std::move(c));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    return prior.at(a.leaf, a.states.front()) < prior.at(b.leaf, b.states.front());
  });

  Evidence ev;
  for (const auto& c : candidates) {
    if (ev.size() == config.evidence_count) break;
    for (auto s : c.states) {
      Evidence trial_ev = ev;
      trial_ev.add({c.leaf, s});
      if (feasible(trial_ev)) {
        ev = std::move(trial_ev);
        break;
      }
    }
  }
  if (ev.size() < config.evidence_count) {
    throw TooFewLeaves("only " + std::to_string(ev.size()) + " leaves admit jointly possible evidence");
  }
  return ev;
}

}  // namespace anybn
