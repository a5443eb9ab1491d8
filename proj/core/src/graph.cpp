#include "anybn/graph.hpp"

#include <algorithm>

namespace anybn {

std::vector<NodeId> markov_blanket(const Network& net, NodeId node) {
  const auto b = net.blanket(node);
  return {b.begin(), b.end()};
}

std::vector<NodeId> markov_neighborhood(const Network& net, NodeId center, std::size_t radius) {
  std::vector<bool> in(net.size(), false);
  in[center.index] = true;
  std::vector<NodeId> frontier{center};
  for (std::size_t k = 0; k < radius && !frontier.empty(); ++k) {
    std::vector<NodeId> next;
    for (auto a : frontier) {
      for (auto b : net.blanket(a)) {
        if (!in[b.index]) {
          in[b.index] = true;
          next.push_back(b);
        }
      }
    }
    // Members already expanded contribute nothing new; only the frontier grows.
    frontier = std::move(next);
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (in[i]) out.emplace_back(i);
  }
  return out;
}

std::vector<NodeId> ancestors(const Network& net, std::span<const NodeId> seeds) {
  std::vector<bool> in(net.size(), false);
  std::vector<NodeId> stack;
  for (auto s : seeds) {
    if (!in[s.index]) {
      in[s.index] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const auto n = stack.back();
    stack.pop_back();
    for (auto p : net.parents(n)) {
      if (!in[p.index]) {
        in[p.index] = true;
        stack.push_back(p);
      }
    }
  }
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (in[i]) out.emplace_back(i);
  }
  return out;
}

}  // namespace anybn
