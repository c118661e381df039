#pragma once

#include <random>

#include "core.hpp"

namespace lct::testutil {

// Uniform-ish random tree with a degree cap: each new vertex attaches to a
// random earlier vertex that still has room.
inline Tree random_tree(int n, int delta, std::mt19937_64& rng, int n_inputs = 1) {
  Tree t;
  t.add_vertex(n_inputs > 1 ? static_cast<int>(rng() % n_inputs) : 0);
  for (int i = 1; i < n; i++) {
    int v = t.add_vertex(n_inputs > 1 ? static_cast<int>(rng() % n_inputs) : 0);
    int u;
    do {
      u = static_cast<int>(rng() % v);
    } while (t.degree(u) >= delta);
    t.add_edge(u, v);
  }
  return t;
}

inline Tree path_tree(int n) {
  Tree t;
  t.add_vertex();
  for (int i = 1; i < n; i++) {
    t.add_vertex();
    t.add_edge(i - 1, i);
  }
  return t;
}

}  // namespace lct::testutil
