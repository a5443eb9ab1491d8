#pragma once

#include <cstdint>

#include "anybn/belief.hpp"
#include "anybn/network.hpp"
#include "anybn/trial.hpp"

namespace anybn {

inline constexpr double kDefaultOracleBudget = 16777216.0;  // 2^24 joint states

struct ExactSolution {
  BeliefTable posterior;            // undefined when evidence_probability == 0
  double evidence_probability = 0;  // P(X_E)
  std::uint64_t enumerated_trials = 0;  // conforming joint states visited
};

/// Brute-force posterior by enumerating every conforming joint state in
/// mixed-radix order (lowest free node index varying fastest). Throws BudgetExceeded when the product of
/// cardinalities exceeds `budget`. Impossible evidence is not an error; it
/// yields an undefined posterior with zero evidence probability.
ExactSolution exact_posterior(const Network& net, const Evidence& ev, double budget = kDefaultOracleBudget);

/// Prior marginals (empty evidence) under the same budget.
inline BeliefTable exact_prior(const Network& net, double budget = kDefaultOracleBudget) {
  return exact_posterior(net, Evidence{}, budget).posterior;
}

inline bool enumerable(const Network& net, double budget = kDefaultOracleBudget) {
  return net.joint_state_count() <= budget;
}

}  // namespace anybn
