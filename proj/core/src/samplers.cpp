#include "anybn/samplers.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "anybn/error.hpp"
#include "anybn/graph.hpp"

namespace anybn {

namespace {

State draw_from_row(const Network& net, NodeId n, std::span<const State> states, Rng& rng, double& prob) {
  const auto row = net.cpt_row(n, net.parent_row(n, states));
  const auto s = sample_categorical(rng, row, 1.0);
  prob = row[s];
  return static_cast<State>(s);
}

// Kahn's algorithm restricted to `block`. With `reverse`, a node becomes
// ready once all of its in-block children are placed; otherwise once all of
// its in-block parents are.
void order_block(const Network& net, const std::vector<bool>& in_block, bool reverse, std::vector<NodeId>& out) {
  const std::size_t n = net.size();
  std::vector<std::size_t> pending(n, 0);
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_block[i]) continue;
    const auto deps = reverse ? net.children(NodeId{i}) : net.parents(NodeId{i});
    for (auto d : deps) pending[i] += in_block[d.index] ? 1 : 0;
    if (pending[i] == 0) ready.push(i);
  }
  while (!ready.empty()) {
    const auto i = ready.top();
    ready.pop();
    out.emplace_back(i);
    const auto next = reverse ? net.parents(NodeId{i}) : net.children(NodeId{i});
    for (auto m : next) {
      if (in_block[m.index] && --pending[m.index] == 0) ready.push(m.index);
    }
  }
}

}  // namespace

Trial logic_sample(const Network& net, Rng& rng) {
  Trial t(net.size());
  double p;
  for (auto n : net.precedence()) t[n] = draw_from_row(net, n, t.states(), rng, p);
  return t;
}

LogicEstimate logic_sampling_estimate(const Network& net, const Evidence& ev, std::uint64_t trials, Rng& rng) {
  ev.validate(net);
  FrequencyTally tally(net);
  LogicEstimate out;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto trial = logic_sample(net, rng);
    if (conforms(trial, ev)) {
      tally.add(trial, 1.0);
      ++out.accepted;
    }
  }
  out.trials = trials;
  out.table = frequency_estimate(tally);
  return out;
}

WeightedTrial forward_sample(const Network& net, const Evidence& ev, Rng& rng) {
  WeightedTrial out{Trial(net.size()), 1.0, 1.0};
  auto& t = out.trial;
  for (auto n : net.precedence()) {
    if (auto clamped = ev.state_of(n)) {
      t[n] = *clamped;
      out.weight *= net.conditional(n, t.states());
    } else {
      double p;
      t[n] = draw_from_row(net, n, t.states(), rng, p);
      out.proposal *= p;
    }
  }
  return out;
}

BackwardPlan backward_plan(const Network& net, const Evidence& ev) {
  if (ev.empty()) throw InvalidEvidence("backward simulation requires evidence; use forward sampling");
  ev.validate(net);

  const std::size_t n = net.size();
  BackwardPlan plan;
  std::vector<NodeId> seeds;
  for (const auto& obs : ev.observations()) seeds.push_back(obs.node);
  plan.ancestor_set = ancestors(net, seeds);
  plan.in_ancestors.assign(n, false);
  for (auto a : plan.ancestor_set) plan.in_ancestors[a.index] = true;

  std::vector<bool> evidence_block(n, false), ancestor_block(n, false), rest_block(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (ev.contains(NodeId{i})) {
      evidence_block[i] = true;
    } else if (plan.in_ancestors[i]) {
      ancestor_block[i] = true;
    } else {
      rest_block[i] = true;
    }
  }
  plan.ordering.reserve(n);
  order_block(net, evidence_block, true, plan.ordering);
  order_block(net, ancestor_block, true, plan.ordering);
  order_block(net, rest_block, false, plan.ordering);

  std::vector<std::size_t> position(n);
  for (std::size_t k = 0; k < n; ++k) position[plan.ordering[k].index] = k;

  plan.inversion_child.assign(n, std::nullopt);
  for (std::size_t i = 0; i < n; ++i) {
    if (!ancestor_block[i]) continue;
    std::optional<NodeId> best;
    for (auto c : net.children(NodeId{i})) {
      if (!plan.in_ancestors[c.index] || position[c.index] > position[i]) continue;
      if (!best || position[c.index] < position[best->index]) best = c;
    }
    if (!best) {
      throw PlanningError("ancestor '" + net.node_name(NodeId{i}) + "' has no earlier child inside A(E)");
    }
    plan.inversion_child[i] = best;
  }
  return plan;
}

InverseDraw bayes_inverse_sample(const Network& net, NodeId child, const PartialTrial& partial, Rng& rng) {
  const auto parents = net.parents(child);
  std::vector<NodeId> free;
  for (auto p : parents) {
    if (!partial.assigned[p.index]) free.push_back(p);
  }

  std::vector<State> scratch(partial.trial.states().begin(), partial.trial.states().end());
  for (auto p : free) scratch[p.index] = 0;

  std::size_t combos = 1;
  for (auto p : free) combos *= net.cardinality(p);

  // Mixed-radix over the free parents, first free parent varying fastest.
  std::vector<double> weights(combos);
  double total = 0.0;
  for (std::size_t c = 0; c < combos; ++c) {
    weights[c] = net.conditional(child, scratch);
    total += weights[c];
    for (auto p : free) {
      if (++scratch[p.index] < net.cardinality(p)) break;
      scratch[p.index] = 0;
    }
  }
  if (!(total > 0.0)) {
    throw ZeroSupport("state of '" + net.node_name(child) + "' is unreachable from its assigned parents");
  }

  auto pick = sample_categorical(rng, weights, total);
  InverseDraw out;
  out.kappa = 1.0 / total;
  out.assignment.reserve(free.size());
  for (auto p : free) {
    const auto k = net.cardinality(p);
    out.assignment.push_back({p, static_cast<State>(pick % k)});
    pick /= k;
  }
  return out;
}

WeightedTrial backward_sample(const Network& net, const Evidence& ev, const BackwardPlan& plan, Rng& rng) {
  PartialTrial partial(net.size());
  for (const auto& obs : ev.observations()) partial.set(obs.node, obs.state);

  double proposal = 1.0;
  double inverse_factors = 1.0;  // product of kappa_b * P(x_b | parents) over B
  bool zero = false;

  for (auto a : plan.ordering) {
    if (partial.assigned[a.index]) continue;
    if (plan.in_ancestors[a.index]) {
      const auto child = *plan.inversion_child[a.index];
      try {
        const auto draw = bayes_inverse_sample(net, child, partial, rng);
        for (const auto& obs : draw.assignment) partial.set(obs.node, obs.state);
        const double factor = draw.kappa * net.conditional(child, partial.trial.states());
        inverse_factors *= factor;
        proposal *= factor;
      } catch (const ZeroSupport&) {
        // Any completion has zero joint probability; fill in and carry on.
        zero = true;
        for (auto p : net.parents(child)) {
          if (!partial.assigned[p.index]) partial.set(p, 0);
        }
      }
    } else {
      double p;
      partial.set(a, draw_from_row(net, a, partial.trial.states(), rng, p));
      proposal *= p;
    }
  }

  WeightedTrial out{std::move(partial.trial), 0.0, 0.0};
  if (zero) return out;

  double numerator = 1.0;
  for (auto a : plan.ancestor_set) numerator *= net.conditional(a, out.trial.states());
  out.weight = numerator / inverse_factors;
  out.proposal = proposal;
  return out;
}

FrequencyTally::FrequencyTally(const Network& net) : sums_(net) {}

void FrequencyTally::add(const Trial& trial, double weight) {
  ++trials_;
  if (weight == 0.0) return;
  total_weight_ += weight;
  for (std::size_t i = 0; i < trial.size(); ++i) sums_.at(NodeId{i}, trial.states()[i]) += weight;
}

void FrequencyTally::reset() {
  for (auto& c : sums_.cells()) c = 0.0;
  trials_ = 0;
  total_weight_ = 0.0;
}

void FrequencyTally::merge(const FrequencyTally& other) {
  auto dst = sums_.cells();
  auto src = other.sums_.cells();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  trials_ += other.trials_;
  total_weight_ += other.total_weight_;
}

BeliefTable frequency_estimate(const FrequencyTally& tally) {
  BeliefTable out = tally.sums();
  out.normalize_by(tally.total_weight());
  return out;
}

std::string_view to_string(SamplingMethod m) {
  switch (m) {
    case SamplingMethod::logic:
      return "logic";
    case SamplingMethod::forward:
      return "forward";
    case SamplingMethod::backward:
      return "backward";
  }
  return "?";
}

std::optional<SamplingMethod> parse_sampling_method(std::string_view text) {
  if (text == "logic") return SamplingMethod::logic;
  if (text == "forward" || text == "fwd") return SamplingMethod::forward;
  if (text == "backward" || text == "bwd") return SamplingMethod::backward;
  return std::nullopt;
}

Simulator::Simulator(const Network& net, Evidence ev, SamplingMethod method)
    : net_(&net), ev_(std::move(ev)), method_(method) {
  ev_.validate(net);
  if (method_ == SamplingMethod::backward && !ev_.empty()) plan_ = backward_plan(net, ev_);
}

WeightedTrial Simulator::draw(Rng& rng) const {
  switch (method_) {
    case SamplingMethod::logic: {
      WeightedTrial out{logic_sample(*net_, rng), 0.0, 0.0};
      out.proposal = joint_probability(*net_, out.trial);
      out.weight = conforms(out.trial, ev_) ? 1.0 : 0.0;
      return out;
    }
    case SamplingMethod::forward:
      return forward_sample(*net_, ev_, rng);
    case SamplingMethod::backward:
      return plan_ ? backward_sample(*net_, ev_, *plan_, rng) : forward_sample(*net_, ev_, rng);
  }
  return {};
}

}  // namespace anybn
