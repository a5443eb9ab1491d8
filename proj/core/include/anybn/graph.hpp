#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "anybn/network.hpp"

namespace anybn {

// Node sets are returned as ascending, duplicate-free vectors.

/// Parents, children and the children's other parents; excludes `node`.
std::vector<NodeId> markov_blanket(const Network& net, NodeId node);

/// M^0 = {center}; M^k = union of ({a} + blanket(a)) over a in M^{k-1}.
std::vector<NodeId> markov_neighborhood(const Network& net, NodeId center, std::size_t radius);

/// Every node reachable from a seed by following parent links, seeds included.
std::vector<NodeId> ancestors(const Network& net, std::span<const NodeId> seeds);

}  // namespace anybn
