#pragma once

/// \file oracle.hpp
/// Explicit-state breadth-first search over the operation graph. This is
/// the independent reference for the SAT encoding on small instances.

#include <gsynth/graph.hpp>
#include <gsynth/instance.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace gsynth {

/// 2^22 states.
inline constexpr std::size_t default_state_cap = std::size_t{1} << 22;

class cap_exceeded : public std::runtime_error {
 public:
  explicit cap_exceeded(std::size_t cap)
      : std::runtime_error("state cap of " + std::to_string(cap) + " exceeded"), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t cap_;
};

struct ReachabilityResult {
  bool reachable = false;
  std::size_t shortest_length = 0;  // meaningful when reachable
  std::vector<Operation> witness;
  std::size_t explored = 0;
};

namespace detail {

/// Every operation applicable to an n-vertex graph, in a fixed order:
/// LC_0..LC_{n-1}, then VD_0..VD_{n-1} (when allowed), then EF_0..EF_{|D|-1}.
inline std::vector<Operation> successor_ops(std::size_t n, bool allow_vd, std::size_t flips) {
  std::vector<Operation> ops;
  for (Vertex k = 0; k < n; ++k) {
    ops.push_back(Operation::lc(k));
  }
  if (allow_vd) {
    for (Vertex k = 0; k < n; ++k) {
      ops.push_back(Operation::vd(k));
    }
  }
  for (std::uint32_t i = 0; i < flips; ++i) {
    ops.push_back(Operation::ef(i));
  }
  return ops;
}

struct BfsNode {
  Graph graph;
  std::size_t parent;
  Operation via;
};

}  // namespace detail

/// Shortest operation sequence from source to target, or unreachable once
/// the whole reachable component has been explored.
inline ReachabilityResult reachable_bfs(const SynthesisInstance& inst,
                                        std::size_t state_cap = default_state_cap) {
  inst.validate();
  const auto ops = detail::successor_ops(inst.order(), true, inst.flips.size());
  constexpr auto kRoot = static_cast<std::size_t>(-1);

  std::vector<detail::BfsNode> nodes;
  std::unordered_map<Graph, std::size_t, GraphHash> index;
  nodes.push_back({inst.source, kRoot, Operation::id()});
  index.emplace(inst.source, 0);

  auto build = [&](std::size_t found) {
    ReachabilityResult r;
    r.reachable = true;
    for (std::size_t at = found; nodes[at].parent != kRoot; at = nodes[at].parent) {
      r.witness.push_back(nodes[at].via);
    }
    std::reverse(r.witness.begin(), r.witness.end());
    r.shortest_length = r.witness.size();
    r.explored = nodes.size();
    return r;
  };

  if (inst.source == inst.target) {
    return build(0);
  }
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    for (auto op : ops) {
      Graph next = apply_operation(nodes[head].graph, op, inst.flips);
      if (index.contains(next)) {
        continue;
      }
      if (nodes.size() >= state_cap) {
        throw cap_exceeded(state_cap);
      }
      const bool hit = next == inst.target;
      index.emplace(next, nodes.size());
      nodes.push_back({std::move(next), head, op});
      if (hit) {
        return build(nodes.size() - 1);
      }
    }
  }
  ReachabilityResult r;
  r.explored = nodes.size();
  return r;
}

/// All graphs reachable from g (g included), in BFS discovery order. With
/// allow_vd = false and no flips this is the local-complementation orbit.
inline std::vector<Graph> reachable_set(const Graph& g, bool allow_vd, const PairList& flips,
                                        std::size_t state_cap = default_state_cap) {
  const auto ops = detail::successor_ops(g.order(), allow_vd, flips.size());
  std::vector<Graph> order{g};
  std::unordered_set<Graph, GraphHash> seen{g};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (auto op : ops) {
      Graph next = apply_operation(order[head], op, flips);
      if (seen.contains(next)) {
        continue;
      }
      if (order.size() >= state_cap) {
        throw cap_exceeded(state_cap);
      }
      seen.insert(next);
      order.push_back(std::move(next));
    }
  }
  return order;
}

}  // namespace gsynth
