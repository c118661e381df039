#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"

namespace lct {

// Space-bounded alternating machine over the binary tape alphabet. Both
// transition tables are total; halting states carry dummy entries.
enum class StateType { Exists, Forall, Accept, Reject };

struct TmMove {
  int state = 0;
  int write = 0;
  int dir = +1;  // +1 right, -1 left
};

struct AlternatingTM {
  std::vector<std::string> state_names;
  std::vector<StateType> state_type;
  // delta1[q][read], delta2[q][read]
  std::vector<std::array<TmMove, 2>> delta1, delta2;
  int q0 = 0;
  int s = 1;  // tape length

  int state_index(const std::string& name) const;
  bool halting(int q) const {
    return state_type[q] == StateType::Accept || state_type[q] == StateType::Reject;
  }
  // lowest-index reject state, -1 if none
  int reject_state() const;
  void validate() const;
};

// head is 1-based in [1, s]
struct Configuration {
  std::vector<int> tape;
  int head = 1;
  int state = 0;
  bool operator==(const Configuration&) const = default;
};

Configuration initial_configuration(const AlternatingTM& m, const std::vector<int>& x);

// One move via delta1 (which == 1) or delta2 (which == 2). A move off either
// tape end writes normally, keeps the head clamped at the boundary cell, and
// enters the machine's canonical reject state.
Configuration step(const AlternatingTM& m, const Configuration& c, int which);

// Acceptance of the configuration game: least fixed point over the reachable
// configuration set, capped at s * 2^(s + |Q|) rounds so non-halting machines
// come out rejecting.
bool evaluate(const AlternatingTM& m, const Configuration& c);
bool accepts(const AlternatingTM& m, const std::vector<int>& x);

// The execution tree: every configuration contributes an s-vertex path whose
// vertices carry (a = tape cell, q, b = head here, y = accept/reject, z = which
// transition spawned the configuration); branching configurations attach the
// two successor trees under the path's last vertex.
struct ConfigTreeNode {
  int a = 0, q = 0, b = 0, y = 0, z = 1;  // y: 1 accept, 0 reject
};
struct ConfigTree {
  Tree tree;  // inputs unused; shape only
  std::vector<ConfigTreeNode> node;
  int root = 0;
};
struct ConfigTreeOptions {
  long long max_nodes = 200000;
};
ConfigTree build_config_tree(const AlternatingTM& m, const std::vector<int>& x,
                             const ConfigTreeOptions& opts = {});
// Structural validator: path lengths, head marks, sibling z labels, y values
// against evaluate. Returns human-readable issues; empty means valid.
std::vector<std::string> check_config_tree(const AlternatingTM& m, const std::vector<int>& x,
                                           const ConfigTree& ct);

// Output-label layout of a compiled problem: one discard symbol, the renamed
// base-problem labels for marked/unmarked main vertices, then auxiliary tuples
// (ell component, one chain symbol, error bit) in a fixed enumeration.
struct AuxOut {
  int lt = 0;   // 0 = none, else ell_lt
  int fam = 0;  // 0 none, 1 p, 2 relay-b, 3 relay-a, 4 relay-q
  int t = 0;    // p index or relay hop count
  int pa = 0;   // relay payload value (b / a / state index)
  int pz = 1;   // relay payload z
  int err = 0;
};

struct HardnessLcl {
  LclProblem problem;  // radius-1, predicate-backed
  AlternatingTM tm;
  std::vector<int> x;
  LclProblem p1, p2;
  bool machine_accepts = false;

  // alphabet layout
  int i1 = 0, i2 = 0, o1 = 0, o2 = 0;
  int main_inputs = 0;  // i1 * i2; aux inputs follow
  std::vector<AuxOut> aux_outs;  // output id = 1 + o1 + o2 + index

  int main_input_id(int l1, int l2) const { return l1 * i2 + l2; }
  int aux_input_id(int a, int q, int b, int y, int z, int d) const;
  bool is_main_input(int id) const { return id < main_inputs; }
  int sun() const { return 0; }
  int star_out(int l1) const { return 1 + l1; }
  int p2_out(int l2) const { return 1 + o1 + l2; }
  int aux_out_base() const { return 1 + o1 + o2; }
};

// Emit the single radius-1 problem: partition and orientation enforcement with
// the discard fallback, the star-granting rules, the error rule families, and
// the base problems p1 (marked vertices) / p2 (unmarked) on the main part.
HardnessLcl compile_lcl(const AlternatingTM& m, const std::vector<int>& x, const LclProblem& p1,
                        const LclProblem& p2);

// Closed-form alphabet sizes of a compiled problem.
int hardness_output_count(int s, int nq, int o1, int o2);
int hardness_input_count(int s, int nq, int i1, int i2);
// Chain-symbol family sizes: ell, p, and the three relay families.
struct SymbolFamilies {
  int ell = 0, p = 0, relay_b = 0, relay_a = 0, relay_q = 0;
};
SymbolFamilies hardness_symbol_families(int s, int nq);

// The execution tree as an input-labeled instance fragment (root index 0);
// inputs carry the 5-tuples plus the depth-mod-3 orientation component.
Tree exact_auxiliary_tree(const HardnessLcl& h, const ConfigTreeOptions& opts = {});

enum class Attach { None, Exact, Corrupted };
// Host vertices keep indices 0..host.n-1 and must carry main input ids;
// Corrupted applies one seeded defect (flipped label component, stretched
// path, or extra child) to its copy of the exact tree.
Tree make_instance(const HardnessLcl& h, const Tree& host, const std::vector<Attach>& attach,
                   std::uint64_t seed);

// Per main vertex: semantic verdict (tree absent, tree differs, or machine
// accepts) versus mark achievability under the exact solver.
struct MarkingRow {
  int v = -1;
  bool good = false;
  bool star = false;
};
struct MarkingReport {
  std::vector<MarkingRow> rows;
  bool ok = false;  // every row has good == star
};
MarkingReport check_marking_semantics(const HardnessLcl& h, const Tree& instance);

}  // namespace lct
