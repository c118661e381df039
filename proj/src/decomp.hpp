#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"

namespace lct {

// Layer tags: R_1, C_1, R_2, C_2, ... encoded as 0, 1, 2, 3, ...
struct Decomposition {
  int gamma = 1;
  int ell = 1;
  int L = 0;
  std::vector<int> layer;  // per vertex

  static int tag_R(int i) { return 2 * (i - 1); }
  static int tag_C(int i) { return 2 * i - 1; }
  static bool tag_is_R(int tag) { return tag % 2 == 0; }
  static int tag_index(int tag) { return tag / 2 + 1; }
};

struct IterationStats {
  long long alive_before = 0;
  // shrinkage diagnostics for the tracked component chain
  long long A = 0;  // surviving degree-2 vertices at compress time
  long long B = 0;  // non-degree-2 vertices at compress time
  long long S = 0;  // tracked component size at iteration start
};

struct DecompositionStats {
  std::vector<IterationStats> iters;
  // all (parent component size, child component size) pairs between
  // consecutive iteration starts; used for the shrinkage inequality
  std::vector<std::vector<std::pair<long long, long long>>> shrink_pairs;
};

std::vector<int> rake_step(const Tree& t, const std::vector<char>& alive,
                           const std::vector<long long>& ids);
// Returns the removed maximal degree-2 runs as ordered paths (each of size >= ell),
// each oriented from its smaller-ID endpoint.
std::vector<std::vector<int>> compress_step(const Tree& t, const std::vector<char>& alive,
                                            int ell, const std::vector<long long>& ids);
// Cut positions (0-based) of an (ell, 2*ell)-independent set of a path with m vertices.
std::vector<int> path_independent_set(int m, int ell);

Decomposition decompose(const Tree& t, int gamma, int ell, const std::vector<long long>& ids,
                        DecompositionStats* stats = nullptr);

std::vector<std::string> verify_decomposition(const Tree& t, const Decomposition& d);

int gamma_for(long long n, int k, int ell);

// Connected components of the vertex subset {v : keep(v)}; each component sorted.
std::vector<std::vector<int>> induced_components(const Tree& t, const std::vector<char>& keep);

}  // namespace lct
