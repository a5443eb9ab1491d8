#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "anybn/belief.hpp"
#include "anybn/network.hpp"
#include "anybn/rng.hpp"
#include "anybn/trial.hpp"

namespace anybn {

/// A generated trial with its likelihood weight z and the probability the
/// generator assigned to it (P^S). For forward and backward samples,
/// weight * proposal equals the trial's joint probability.
struct WeightedTrial {
  Trial trial;
  double weight = 0.0;
  double proposal = 0.0;
};

/// Prior sample: every node drawn from its link matrix in precedence order.
Trial logic_sample(const Network& net, Rng& rng);

struct LogicEstimate {
  BeliefTable table;  // undefined when nothing was accepted
  std::uint64_t accepted = 0;
  std::uint64_t trials = 0;
};

/// Rejection estimate: relative state frequencies among the prior samples
/// that conform to `ev`.
LogicEstimate logic_sampling_estimate(const Network& net, const Evidence& ev, std::uint64_t trials, Rng& rng);

/// Likelihood weighting. Evidence nodes are clamped, the rest drawn from their
/// link matrices; weight is the product of the clamped nodes' CPT factors.
WeightedTrial forward_sample(const Network& net, const Evidence& ev, Rng& rng);

/// Node ordering and bookkeeping for backward simulation.
///
/// The ordering places evidence first, then the remaining ancestors of the
/// evidence (children before parents), then everything else (parents before
/// children). Ties go to the lower node index. When an evidence node is itself
/// the parent of a non-evidence ancestor, evidence-first wins; evidence values
/// are fixed, so the relative order has no effect on sampling.
struct BackwardPlan {
  std::vector<NodeId> ordering;
  std::vector<NodeId> ancestor_set;  // A(E), ascending, evidence included
  std::vector<bool> in_ancestors;    // indexed by node
  /// For each node in A(E)\E, the child whose Bayes inversion assigns it:
  /// the child inside A(E) that comes earliest in `ordering`.
  std::vector<std::optional<NodeId>> inversion_child;
};

/// Throws InvalidEvidence for empty evidence (use forward sampling instead)
/// and PlanningError if some ancestor has no usable child.
BackwardPlan backward_plan(const Network& net, const Evidence& ev);

/// Trial under construction: which nodes already hold a state.
struct PartialTrial {
  Trial trial;
  std::vector<bool> assigned;

  explicit PartialTrial(std::size_t n) : trial(n), assigned(n, false) {}

  void set(NodeId n, State s) {
    trial[n] = s;
    assigned[n.index] = true;
  }
};

struct InverseDraw {
  std::vector<Observation> assignment;  // the unassigned parents of the child
  double kappa = 0.0;                   // 1 / sum of P(child | parents) over the draws
};

/// Jointly samples every unassigned parent of `child` with probability
/// proportional to P(child state | parents), given the assigned parents.
/// Throws ZeroSupport when no parent assignment can produce the child state.
InverseDraw bayes_inverse_sample(const Network& net, NodeId child, const PartialTrial& partial, Rng& rng);

/// One backward-simulation trial. A zero-support inversion yields weight 0.
WeightedTrial backward_sample(const Network& net, const Evidence& ev, const BackwardPlan& plan, Rng& rng);

/// Running weighted tally Z^T over (node, state) cells.
class FrequencyTally {
 public:
  FrequencyTally() = default;
  explicit FrequencyTally(const Network& net);

  void add(const Trial& trial, double weight);
  void add(const WeightedTrial& wt) { add(wt.trial, wt.weight); }
  void reset();
  void merge(const FrequencyTally& other);

  std::uint64_t trials() const noexcept { return trials_; }
  double total_weight() const noexcept { return total_weight_; }
  const BeliefTable& sums() const noexcept { return sums_; }

 private:
  BeliefTable sums_;
  std::uint64_t trials_ = 0;
  double total_weight_ = 0.0;
};

/// Normalized tally; undefined when the total weight is zero.
BeliefTable frequency_estimate(const FrequencyTally& tally);

enum class SamplingMethod { logic, forward, backward };

std::string_view to_string(SamplingMethod m);
std::optional<SamplingMethod> parse_sampling_method(std::string_view text);

/// Binds a method to (network, evidence) and produces weighted trials.
/// Logic sampling reports weight 1 for conforming trials and 0 otherwise.
/// Backward with empty evidence falls back to forward sampling, which is the
/// same distribution.
class Simulator {
 public:
  Simulator(const Network& net, Evidence ev, SamplingMethod method);

  WeightedTrial draw(Rng& rng) const;

  SamplingMethod method() const noexcept { return method_; }
  const Evidence& evidence() const noexcept { return ev_; }
  const Network& network() const noexcept { return *net_; }

 private:
  const Network* net_;
  Evidence ev_;
  SamplingMethod method_;
  std::optional<BackwardPlan> plan_;
};

}  // namespace anybn
