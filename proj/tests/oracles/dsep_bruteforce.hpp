#pragma once

// Path-enumeration d-separation, used only as an independent check on the
// reachability implementation.

#include "proxtext/dag.hpp"

#include <functional>
#include <vector>

namespace oracle {

inline bool path_blocked(const proxtext::dag::CausalDag& g, const std::vector<std::size_t>& path,
                         const std::vector<bool>& in_z) {
  // Descendants-of-collider rule: a collider is open iff it or one of its
  // descendants is conditioned on. Computed by forward DFS per collider.
  auto has_conditioned_descendant = [&](std::size_t v) {
    std::vector<bool> seen(g.size(), false);
    std::vector<std::size_t> stack{v};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      if (seen[cur]) continue;
      seen[cur] = true;
      if (in_z[cur]) return true;
      for (auto c : g.children(cur)) stack.push_back(c);
    }
    return false;
  };
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    const auto prev = path[k - 1], mid = path[k], next = path[k + 1];
    const bool collider = g.has_edge(prev, mid) && g.has_edge(next, mid);
    if (collider) {
      if (!has_conditioned_descendant(mid)) return true;
    } else if (in_z[mid]) {
      return true;
    }
  }
  return false;
}

/// Enumerates every simple path in the skeleton between x and y.
inline bool d_separated(const proxtext::dag::CausalDag& g, std::size_t x, std::size_t y,
                        const std::vector<bool>& in_z) {
  std::vector<bool> on_path(g.size(), false);
  std::vector<std::size_t> path{x};
  on_path[x] = true;
  bool open_found = false;
  std::function<void(std::size_t)> walk = [&](std::size_t v) {
    if (open_found) return;
    if (v == y) {
      if (!path_blocked(g, path, in_z)) open_found = true;
      return;
    }
    std::vector<std::size_t> nbrs = g.parents(v);
    nbrs.insert(nbrs.end(), g.children(v).begin(), g.children(v).end());
    for (auto n : nbrs) {
      if (on_path[n]) continue;
      on_path[n] = true;
      path.push_back(n);
      walk(n);
      path.pop_back();
      on_path[n] = false;
    }
  };
  walk(x);
  return !open_found;
}

/// Random DAG on `n` nodes named N0..N{n-1}; edges only go from lower to
/// higher positions of a random permutation.
template <typename Rng>
proxtext::dag::CausalDag random_dag(std::size_t n, double edge_prob, Rng& rng) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("N" + std::to_string(i));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  std::vector<proxtext::dag::Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < edge_prob) edges.emplace_back(names[order[i]], names[order[j]]);
  return proxtext::dag::CausalDag::from_edges(names, edges);
}

}  // namespace oracle
