#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anybn {

/// Dense handle into a network's node list.
struct NodeId {
  std::size_t index = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::size_t i) : index(i) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

using State = std::uint32_t;

class Trial;

/// One node as handed to the Network constructor.
///
/// The CPT is row-major: one row of `cardinality` probabilities per parent
/// state combination. Rows are ordered mixed-radix over the parents in
/// declared order with the LAST parent varying fastest, so a root node has a
/// single row.
struct NodeSpec {
  std::string name;
  std::size_t cardinality = 2;
  std::vector<NodeId> parents;
  std::vector<double> cpt;
};

/// Immutable discrete Bayesian network.
///
/// Construction validates everything downstream code relies on: parent ids in
/// range and distinct, acyclicity, CPT shapes, entries in [0, 1] and rows
/// summing to 1 within 1e-9. A validated Network is safe to share across
/// threads.
class Network {
 public:
  static constexpr double kRowTolerance = 1e-9;

  Network(std::string name, std::vector<NodeSpec> nodes);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const std::string& node_name(NodeId n) const { return nodes_[n.index].name; }
  std::size_t cardinality(NodeId n) const { return nodes_[n.index].cardinality; }
  std::span<const NodeId> parents(NodeId n) const { return nodes_[n.index].parents; }
  /// Children in ascending index order.
  std::span<const NodeId> children(NodeId n) const { return nodes_[n.index].children; }
  /// Parents, children and co-parents, ascending, excluding n itself.
  std::span<const NodeId> blanket(NodeId n) const { return nodes_[n.index].blanket; }
  std::optional<NodeId> find(std::string_view name) const;

  /// Topological order, ties broken by ascending index.
  std::span<const NodeId> precedence() const noexcept { return precedence_; }

  std::size_t row_count(NodeId n) const { return nodes_[n.index].cpt.size() / cardinality(n); }
  /// Row index selected by the parent states found in `states` (one per node).
  std::size_t parent_row(NodeId n, std::span<const State> states) const;
  std::span<const double> cpt(NodeId n) const { return nodes_[n.index].cpt; }
  std::span<const double> cpt_row(NodeId n, std::size_t row) const {
    const auto k = cardinality(n);
    return std::span<const double>(nodes_[n.index].cpt).subspan(row * k, k);
  }
  /// Stride of each parent in the row index, aligned with parents(n).
  std::span<const std::size_t> parent_strides(NodeId n) const { return nodes_[n.index].strides; }

  /// P(states[n] | states of n's parents).
  double conditional(NodeId n, std::span<const State> states) const {
    return nodes_[n.index].cpt[parent_row(n, states) * cardinality(n) + states[n.index]];
  }

  /// Product of cardinalities; a double so large networks do not overflow.
  double joint_state_count() const noexcept { return joint_states_; }

  /// Trial id-code layout: each node owns ceil(log2(cardinality)) bits,
  /// packed in node-index order.
  std::size_t id_bits() const noexcept { return id_bits_; }
  std::size_t bit_offset(NodeId n) const { return nodes_[n.index].bit_offset; }
  std::size_t bit_width(NodeId n) const { return nodes_[n.index].bit_width; }

  /// Rebuilds the NodeSpec list (used by writers and tests).
  std::vector<NodeSpec> specs() const;

 private:
  struct Node {
    std::string name;
    std::size_t cardinality;
    std::vector<NodeId> parents;
    std::vector<std::size_t> strides;
    std::vector<double> cpt;
    std::vector<NodeId> children;
    std::vector<NodeId> blanket;
    std::size_t bit_offset = 0;
    std::size_t bit_width = 0;
  };

  std::string name_;
  std::vector<Node> nodes_;
  std::vector<NodeId> precedence_;
  double joint_states_ = 1.0;
  std::size_t id_bits_ = 0;
};

/// Product of the link matrices over all nodes, on a linear scale.
/// Throws InvalidTrial on a size or state-range mismatch.
double joint_probability(const Network& net, const Trial& trial);

/// Same product accumulated as a sum of logs; -inf when any factor is zero.
double log_joint_probability(const Network& net, const Trial& trial);

/// Cached parent-before-child ordering, ties by ascending index.
std::span<const NodeId> precedence_order(const Network& net);

inline std::vector<NodeId> all_nodes(const Network& net) {
  std::vector<NodeId> out;
  out.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) out.emplace_back(i);
  return out;
}

}  // namespace anybn

template <>
struct std::hash<anybn::NodeId> {
  std::size_t operator()(anybn::NodeId n) const noexcept { return std::hash<std::size_t>{}(n.index); }
};
