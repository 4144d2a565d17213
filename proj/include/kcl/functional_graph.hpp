#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "kcl/measure_space.hpp"

namespace kcl {

// Atoms lying on a cycle of the functional graph x -> tau(x).
inline std::vector<bool> cycle_atoms(const Transformation& tau) {
  const std::size_t n = tau.size();
  // 0 = unvisited, 1 = on current walk, 2 = finished
  std::vector<int> state(n, 0);
  std::vector<bool> on_cycle(n, false);
  for (Atom start = 0; start < n; ++start) {
    if (state[start] != 0) continue;
    std::vector<Atom> walk;
    Atom x = start;
    while (state[x] == 0) {
      state[x] = 1;
      walk.push_back(x);
      x = tau(x);
    }
    if (state[x] == 1) {
      Atom y = x;
      do {
        on_cycle[y] = true;
        y = tau(y);
      } while (y != x);
    }
    for (Atom w : walk) state[w] = 2;
  }
  return on_cycle;
}

/// Maximum distance from any atom to the cycle set, by breadth-first search
/// backwards from the cycles.
inline std::size_t tail_height(const Transformation& tau) {
  const std::size_t n = tau.size();
  std::vector<std::vector<Atom>> preimages(n);
  for (Atom x = 0; x < n; ++x) preimages[tau(x)].push_back(x);
  auto on_cycle = cycle_atoms(tau);
  std::vector<std::size_t> dist(n, 0);
  std::vector<bool> seen(n, false);
  std::deque<Atom> queue;
  for (Atom x = 0; x < n; ++x)
    if (on_cycle[x]) {
      seen[x] = true;
      queue.push_back(x);
    }
  std::size_t height = 0;
  while (!queue.empty()) {
    Atom y = queue.front();
    queue.pop_front();
    for (Atom x : preimages[y]) {
      if (seen[x]) continue;
      seen[x] = true;
      dist[x] = dist[y] + 1;
      height = std::max(height, dist[x]);
      queue.push_back(x);
    }
  }
  return height;
}

}  // namespace kcl
