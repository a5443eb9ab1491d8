#include "anybn/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "anybn/error.hpp"
#include "anybn/trial.hpp"

namespace anybn {

namespace {

std::size_t bits_for(std::size_t cardinality) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < cardinality) ++bits;
  return bits;
}

std::string where(const std::string& name) { return "node '" + name + "': "; }

}  // namespace

Network::Network(std::string name, std::vector<NodeSpec> specs) : name_(std::move(name)) {
  const std::size_t n = specs.size();
  nodes_.reserve(n);

  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    auto& spec = specs[i];
    if (spec.name.empty()) throw InvalidNetwork("node " + std::to_string(i) + " has no name");
    if (!seen.emplace(spec.name, i).second) throw InvalidNetwork("duplicate node name '" + spec.name + "'");
    if (spec.cardinality < 2) throw InvalidNetwork(where(spec.name) + "cardinality must be at least 2");
    if (spec.cardinality > (std::size_t{1} << 31)) throw InvalidNetwork(where(spec.name) + "cardinality too large");

    Node node;
    node.name = std::move(spec.name);
    node.cardinality = spec.cardinality;
    node.parents = std::move(spec.parents);
    for (std::size_t j = 0; j < node.parents.size(); ++j) {
      const auto p = node.parents[j];
      if (p.index >= n) throw InvalidNetwork(where(node.name) + "parent index out of range");
      if (p.index == i) throw InvalidNetwork(where(node.name) + "node is its own parent");
      if (std::find(node.parents.begin(), node.parents.begin() + j, p) != node.parents.begin() + j) {
        throw InvalidNetwork(where(node.name) + "repeated parent");
      }
    }
    node.cpt = std::move(spec.cpt);
    nodes_.push_back(std::move(node));
  }

  // Strides and CPT shape need parent cardinalities, so a second pass.
  for (auto& node : nodes_) {
    node.strides.assign(node.parents.size(), 1);
    double rows = 1.0;
    for (std::size_t j = node.parents.size(); j-- > 0;) {
      node.strides[j] = static_cast<std::size_t>(rows);
      rows *= static_cast<double>(nodes_[node.parents[j].index].cardinality);
    }
    if (rows * static_cast<double>(node.cardinality) > 1e8) {
      throw InvalidNetwork(where(node.name) + "conditional table too large");
    }
    const auto expected = static_cast<std::size_t>(rows) * node.cardinality;
    if (node.cpt.size() != expected) {
      throw InvalidNetwork(where(node.name) + "expected " + std::to_string(expected) + " CPT entries, got " +
                           std::to_string(node.cpt.size()));
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r) {
      double sum = 0.0;
      for (std::size_t s = 0; s < node.cardinality; ++s) {
        const double p = node.cpt[r * node.cardinality + s];
        if (!(p >= 0.0 && p <= 1.0)) {
          throw InvalidNetwork(where(node.name) + "probability outside [0, 1] in row " + std::to_string(r));
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        throw InvalidNetwork(where(node.name) + "row " + std::to_string(r) + " sums to " + std::to_string(sum));
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (auto p : nodes_[i].parents) nodes_[p.index].children.emplace_back(i);
  }

  // Kahn's algorithm with a min-heap gives the index tie-break.
  std::vector<std::size_t> pending(n);
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = nodes_[i].parents.size();
    if (pending[i] == 0) ready.push(i);
  }
  precedence_.reserve(n);
  while (!ready.empty()) {
    const auto i = ready.top();
    ready.pop();
    precedence_.emplace_back(i);
    for (auto c : nodes_[i].children) {
      if (--pending[c.index] == 0) ready.push(c.index);
    }
  }
  if (precedence_.size() != n) throw InvalidNetwork("parent relation contains a cycle");

  for (std::size_t i = 0; i < n; ++i) {
    auto& node = nodes_[i];
    std::vector<NodeId> b(node.parents.begin(), node.parents.end());
    for (auto c : node.children) {
      b.push_back(c);
      for (auto cp : nodes_[c.index].parents) b.push_back(cp);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    b.erase(std::remove(b.begin(), b.end(), NodeId{i}), b.end());
    node.blanket = std::move(b);
  }

  std::size_t offset = 0;
  for (auto& node : nodes_) {
    node.bit_offset = offset;
    node.bit_width = bits_for(node.cardinality);
    offset += node.bit_width;
    joint_states_ *= static_cast<double>(node.cardinality);
  }
  id_bits_ = offset;
}

std::optional<NodeId> Network::find(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) return NodeId{i};
  }
  return std::nullopt;
}

std::size_t Network::parent_row(NodeId n, std::span<const State> states) const {
  const auto& node = nodes_[n.index];
  std::size_t row = 0;
  for (std::size_t j = 0; j < node.parents.size(); ++j) row += node.strides[j] * states[node.parents[j].index];
  return row;
}

std::vector<NodeSpec> Network::specs() const {
  std::vector<NodeSpec> out;
  out.reserve(nodes_.size());
  for (const auto& node : nodes_) out.push_back({node.name, node.cardinality, node.parents, node.cpt});
  return out;
}

double joint_probability(const Network& net, const Trial& trial) {
  validate_trial(net, trial);
  const auto states = trial.states();
  double p = 1.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    p *= net.conditional(NodeId{i}, states);
    if (p == 0.0) return 0.0;
  }
  return p;
}

double log_joint_probability(const Network& net, const Trial& trial) {
  validate_trial(net, trial);
  const auto states = trial.states();
  double lp = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) lp += std::log(net.conditional(NodeId{i}, states));
  return lp;
}

std::span<const NodeId> precedence_order(const Network& net) { return net.precedence(); }

}  // namespace anybn
