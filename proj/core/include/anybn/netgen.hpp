#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "anybn/error.hpp"
#include "anybn/exact.hpp"
#include "anybn/network.hpp"
#include "anybn/rng.hpp"
#include "anybn/trial.hpp"

namespace anybn {

struct NetGenConfig {
  std::size_t node_count = 32;
  std::size_t max_parents = 3;  // node i never gets more than i parents
  // Weights for cardinalities 2, 3, 4, ... (index 0 is cardinality 2).
  std::vector<double> cardinality_weights{0.5, 0.3, 0.2};
  double zero_cell_prob = 0.5;
  std::size_t evidence_count = 4;
  std::uint64_t seed = 1;
  // Prior marginals come from enumeration within this budget, otherwise
  // from prior_samples logic-sampling trials.
  double oracle_budget = kDefaultOracleBudget;
  std::size_t prior_samples = 100000;

  /// Throws ConfigError.
  void validate() const;
};

/// Raised when a network has fewer usable leaves than evidence_count.
/// Callers retry with another seed.
class TooFewLeaves : public Error {
 public:
  using Error::Error;
};

/// Random DAG with parents drawn from lower-indexed nodes. Each CPT cell is
/// zero with probability zero_cell_prob, otherwise uniform in (0, 1); rows are
/// renormalized, and an all-zero row is redrawn up to 100 times before
/// falling back to uniform.
Network generate_network(const NetGenConfig& config, Rng& rng);

/// Convenience overload seeded from config.seed.
Network generate_network(const NetGenConfig& config);

/// Picks evidence_count leaves whose smallest positive-prior state is
/// least likely, each observed in that state. A (leaf, state) pair that
/// would make the joint evidence impossible is skipped in favor of the leaf's
/// next state, then the next leaf. Returned in selection order.
Evidence select_low_prior_evidence(const Network& net, const NetGenConfig& config, Rng& rng);

/// Nodes without children, ascending.
std::vector<NodeId> leaves(const Network& net);

}  // namespace anybn
