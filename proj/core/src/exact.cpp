#include "anybn/exact.hpp"

#include <vector>

#include "anybn/error.hpp"

namespace anybn {

ExactSolution exact_posterior(const Network& net, const Evidence& ev, double budget) {
  ev.validate(net);
  const double required = net.joint_state_count();
  if (required > budget) throw BudgetExceeded(required, budget);

  const std::size_t n = net.size();
  ExactSolution out{BeliefTable(net), 0.0, 0};
  // Evidence nodes stay clamped; the counter runs over the free nodes only.
  std::vector<State> states(n, 0);
  std::vector<std::size_t> free_nodes;
  for (const auto& obs : ev.observations()) states[obs.node.index] = obs.state;
  for (std::size_t i = 0; i < n; ++i) {
    if (!ev.contains(NodeId{i})) free_nodes.push_back(i);
  }

  auto& post = out.posterior;
  while (true) {
    ++out.enumerated_trials;
    double p = 1.0;
    for (std::size_t i = 0; i < n && p > 0.0; ++i) p *= net.conditional(NodeId{i}, states);
    if (p > 0.0) {
      out.evidence_probability += p;
      for (std::size_t i = 0; i < n; ++i) post.at(NodeId{i}, states[i]) += p;
    }

    std::size_t k = 0;
    for (; k < free_nodes.size(); ++k) {
      const auto i = free_nodes[k];
      if (++states[i] < net.cardinality(NodeId{i})) break;
      states[i] = 0;
    }
    if (k == free_nodes.size()) break;
  }

  post.normalize_by(out.evidence_probability);
  return out;
}

}  // namespace anybn
