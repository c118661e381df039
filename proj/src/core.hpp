#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace lct {

using Label = int;                 // index into an alphabet; -1 marks "no output yet"
constexpr Label kUnlabeled = -1;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Undirected tree (or forest) with per-vertex input labels and partial output labels.
struct Tree {
  int n = 0;
  std::vector<std::vector<int>> adj;
  std::vector<int> input;     // index into LclProblem::inputs
  std::vector<Label> output;  // kUnlabeled where not yet assigned

  int add_vertex(int input_label = 0);
  void add_edge(int u, int v);
  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  bool has_edge(int u, int v) const;
  bool is_forest() const;
  bool is_connected_tree() const;
  bool completely_labeled() const;

  // Vertices within distance `radius` of `center`, sorted, center first.
  std::vector<int> ball(int center, int radius) const;
  std::vector<int> distances_from(int v) const;  // -1 for unreachable
};

// One allowed radius-1 configuration: center labels plus the sorted multiset of
// neighbor (input, output) pairs.
struct ConfigR1 {
  int center_in = 0;
  Label center_out = 0;
  std::vector<std::pair<int, Label>> nbrs;  // kept sorted

  void normalize();
  bool operator==(const ConfigR1& o) const = default;
  std::string key() const;
};

struct LclProblem {
  int radius = 1;
  int delta = 2;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  bool allow_all = false;
  // radius-1 compact truth table, keyed by ConfigR1::key()
  std::unordered_set<std::string> table_r1;
  // general-radius truth table: canonical serializations of allowed centered balls
  std::unordered_set<std::string> table_ball;
  // optional fast-path predicate over radius-1 configurations; when set it is the
  // source of truth and table_r1 acts as an exported enumeration
  std::function<bool(const ConfigR1&)> pred_r1;

  int input_index(const std::string& name) const;
  int output_index(const std::string& name) const;
  bool allowed_r1(const ConfigR1& c) const;
};

// Canonical serialization of the subtree hanging from `v` away from `parent`,
// truncated at `depth` edges below v (depth < 0 means unbounded). Children are
// ordered by their own serializations, so isomorphic labeled trees agree.
std::string canonical_serial(const Tree& t, int v, int parent = -1, int depth = -1);
// Canonical form of a centered ball: the radius-r view around `center`.
std::string canonical_ball(const Tree& t, int center, int radius);
// Canonical form of the whole (unrooted) tree: minimum over all roots.
std::string canonical_unrooted(const Tree& t);

bool is_locally_consistent(const LclProblem& p, const Tree& t, int v);
bool is_legal(const LclProblem& p, const Tree& t);

struct CompletionOptions {
  // When non-empty, consistency is only enforced at vertices with check[v] != 0.
  std::vector<char> check;
};

// Exact solver: returns a complete legal output assignment extending t.output,
// or nullopt iff none exists. Deterministic: the same input always yields the
// same labeling (lowest-index labels preferred in a fixed vertex order).
std::optional<std::vector<Label>> complete_labeling(const LclProblem& p, const Tree& t,
                                                    const CompletionOptions& opts = {});

// Brute-force reference used by tests: enumerate all |outputs|^n completions.
std::optional<std::vector<Label>> complete_labeling_bruteforce(const LclProblem& p, const Tree& t,
                                                               const CompletionOptions& opts = {});

// Orientation encoding: each oriented edge u->v becomes the path
// (u, x_{e,u}, x_{e,v}, v) with both midpoints input-labeled `e_input` and
// outputs pinned to phi(x_{e,u}) = out0, phi(x_{e,v}) = out1.
struct OrientedEdge {
  int u, v;  // orientation u -> v
};
struct OrientationEncoding {
  Tree tree;
  std::vector<int> orig_vertex;   // encoded vertex -> original vertex, or -1 for midpoints
  std::vector<int> midpoint_of;   // encoded vertex -> index into edges, or -1
};
OrientationEncoding encode_orientation(const Tree& t, const std::vector<OrientedEdge>& edges,
                                       int e_input, Label out0, Label out1);
std::vector<OrientedEdge> decode_orientation(const OrientationEncoding& enc, Label out1);

// (1 + |inputs|*|outputs|)^(1 + delta^radius) as a decimal string.
std::string description_length_bound(const LclProblem& p);

// Built-in problems used throughout the tests and the CLI.
LclProblem make_trivial_problem(int delta);                  // every labeling legal
LclProblem make_coloring_problem(int colors, int delta);     // proper vertex coloring
// Enumerate table_r1 from pred_r1 (all center labels x all neighbor multisets
// of size <= delta). Needed before serializing a predicate-backed problem.
void materialize_table_r1(LclProblem& p);

}  // namespace lct
