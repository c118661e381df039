#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core.hpp"
#include "decomp.hpp"

namespace lct {

struct Network {
  Tree tree;
  std::vector<long long> id;
  long long n_claimed = 0;
};

// What a vertex sees after t rounds: its radius-t neighborhood, re-indexed with
// the center at position 0. Vertices appear in a deterministic BFS order.
struct View {
  Tree ball;
  int center = 0;
  std::vector<long long> ids;
  std::vector<long long> state;  // per-vertex public state, if the caller passed any
  long long n_claimed = 0;
};

std::vector<long long> assign_ids(const Tree& t, uint64_t seed);

View materialize_view(const Network& net, int v, int t,
                      const std::vector<long long>* state = nullptr);

// One t-round algorithm execution: every vertex maps its view to an output.
// Adds t to *rounds_used when given.
std::vector<long long> run_alg(const Network& net, int t,
                               const std::function<long long(const View&)>& f,
                               long long* rounds_used = nullptr);

// OpenMP path over the same per-vertex loop; run_alg stays the serial
// reference and both produce identical outputs. `f` must be thread-safe.
// Falls back to the serial loop when built without OpenMP.
std::vector<long long> run_alg_parallel(const Network& net, int t,
                                        const std::function<long long(const View&)>& f,
                                        long long* rounds_used = nullptr);

// Deterministic ids on a centered subtree, depending only on its canonical
// form; distinct, in [0, |ball|) so within O(log n_virtual) bits.
std::vector<long long> assign_partial_ids(const Tree& ball, int center, long long n_virtual);

// Distributed construction of the (gamma, ell)-decomposition. Layer tags are
// bit-identical to decompose(net.tree, gamma, ell, net.id).
std::pair<Decomposition, long long> simulate_decomposition(const Network& net, int gamma,
                                                           int ell);

int log_star(long long n);

}  // namespace lct
