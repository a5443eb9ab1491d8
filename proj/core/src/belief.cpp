#include "anybn/belief.hpp"

#include <algorithm>

namespace anybn {

BeliefTable::BeliefTable(const Network& net) {
  offsets_.reserve(net.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < net.size(); ++i) offsets_.push_back(offsets_.back() + net.cardinality(NodeId{i}));
  cells_.assign(offsets_.back(), 0.0);
}

BeliefTable::BeliefTable(std::span<const std::size_t> cardinalities) {
  offsets_.reserve(cardinalities.size() + 1);
  offsets_.push_back(0);
  for (auto k : cardinalities) offsets_.push_back(offsets_.back() + k);
  cells_.assign(offsets_.back(), 0.0);
}

BeliefTable BeliefTable::undefined(const Network& net) {
  BeliefTable t(net);
  t.defined_ = false;
  return t;
}

void BeliefTable::normalize_by(double total) {
  if (!(total > 0.0)) {
    std::fill(cells_.begin(), cells_.end(), 0.0);
    defined_ = false;
    return;
  }
  for (auto& c : cells_) c /= total;
}

}  // namespace anybn
