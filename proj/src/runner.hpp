#pragma once

#include <map>

#include "decomp.hpp"
#include "gap.hpp"
#include "localsim.hpp"

namespace lct {

// A virtual graph in the R_R^1, R_C^1, ..., R_R^k sequence: a forest whose
// vertices either track an underlying tree vertex (orig >= 0, the real part)
// or are imaginary (orig == -1). Pinned outputs live in tree.output.
struct VirtualGraph {
  Tree tree;
  std::vector<int> orig;
};

// R -> C step: components without a C-layer vertex are dropped; every other
// vertex belongs to exactly one T_v, which is swapped for its class
// representative.
struct TvStep {
  int v_r = -1;                // T_v root in the R graph
  int attach_r = -1;           // one neighbor of v_r outside T_v, -1 if none
  std::vector<int> region_r;   // T_v vertices in the R graph
  int root_c = -1;             // representative root in the C graph
};
struct RtoC {
  int level = 0;
  std::vector<int> r_to_c;                 // T_v roots -> their C index, else -1
  std::vector<std::vector<int>> dropped;   // R components left out of the C graph
  std::vector<TvStep> tv;
};

// C -> R step: each C-layer path (with its hanging trees) H_P is swapped for
// the processed image of its type, then duplicated and cut at the hosts.
struct PathStep {
  int u_c = -1, v_c = -1;      // hosts of the path in the C graph, -1 if absent
  int s_c = -1, t_c = -1;      // path endpoints (the poles)
  std::vector<int> region_c;   // H_P vertices in the C graph
  TypeId ty = -1;
  std::vector<int> copy_u;     // image index -> new index, copy kept by u
  std::vector<int> copy_v;     // image index -> new index, copy kept by v
};
struct CtoR {
  int level = 0;
  std::vector<int> c_to_r;     // surviving C vertices -> new index, -1 inside a region
  std::vector<PathStep> paths;
  // materialized processed images by type: tree + core vertex positions
  std::map<TypeId, std::pair<Tree, std::vector<int>>> images;
};

struct VirtualSequence {
  // graphs[0] = R_R^1 (the input tree), then alternating C/R up to R_R^k
  std::vector<VirtualGraph> graphs;
  std::vector<RtoC> rc;  // rc[i]: graphs[2i] -> graphs[2i+1]
  std::vector<CtoR> cr;  // cr[i]: graphs[2i+1] -> graphs[2i+2]
};

VirtualSequence build_virtual_sequence(ClassMachine& m, const Hierarchy& h, const Tree& tree,
                                       const Decomposition& d);

// Complete legal labeling of the top graph, extending all pinned outputs.
std::vector<Label> solve_top(const LclProblem& p, const VirtualGraph& rk);

// Undo one C -> R step: labels for the C graph from labels of the R graph.
std::vector<Label> pull_back_R_to_C(ClassMachine& m, const CtoR& st, const VirtualGraph& c_graph,
                                    const std::vector<Label>& labels_r);

// Undo one R -> C step: labels for the R graph from labels of the C graph;
// dropped components get fresh legal labelings.
std::vector<Label> pull_back_C_to_R(ClassMachine& m, const RtoC& st, const VirtualGraph& r_graph,
                                    const VirtualGraph& c_graph,
                                    const std::vector<Label>& labels_c);

struct RunResult {
  std::vector<Label> labeling;
  long long rounds_used = 0;
  Decomposition decomp;
  Hierarchy hierarchy;
};

// The full canonical pipeline: decompose, build the virtual sequence, solve
// the top graph, pull labels back down. Throws DomainError when f is not
// feasible for (problem, k).
RunResult run_canonical(const LclProblem& p, const Tree& tree, int k, const LabelingFunction& f,
                        const GapOptions& opts = {});

}  // namespace lct
