#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "anybn/network.hpp"

namespace anybn {

/// Per-node posterior vectors: the network "solution".
///
/// A table is either defined (each node's vector sums to 1) or flagged
/// undefined, which happens when no conforming mass or weight exists.
class BeliefTable {
 public:
  BeliefTable() = default;
  /// All-zero, defined table shaped like `net`.
  explicit BeliefTable(const Network& net);
  explicit BeliefTable(std::span<const std::size_t> cardinalities);

  static BeliefTable undefined(const Network& net);

  bool defined() const noexcept { return defined_; }
  void mark_undefined() noexcept { defined_ = false; }

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t cardinality(NodeId n) const { return offsets_[n.index + 1] - offsets_[n.index]; }

  std::span<const double> node(NodeId n) const {
    return std::span<const double>(cells_).subspan(offsets_[n.index], cardinality(n));
  }
  std::span<double> node(NodeId n) {
    return std::span<double>(cells_).subspan(offsets_[n.index], cardinality(n));
  }
  double at(NodeId n, State s) const { return cells_[offsets_[n.index] + s]; }
  double& at(NodeId n, State s) { return cells_[offsets_[n.index] + s]; }

  /// All (node, state) cells, node-major.
  std::span<const double> cells() const noexcept { return cells_; }
  std::span<double> cells() noexcept { return cells_; }

  /// Divides every cell by `total`; marks undefined when total <= 0.
  void normalize_by(double total);

  bool same_shape(const BeliefTable& other) const { return offsets_ == other.offsets_; }

 private:
  std::vector<double> cells_;
  std::vector<std::size_t> offsets_;
  bool defined_ = true;
};

}  // namespace anybn
