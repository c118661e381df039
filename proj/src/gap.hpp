#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "classes.hpp"
#include "surgery.hpp"

namespace lct {

struct GapOptions {
  int w = -1;                       // default: max(ell, 2r+2)
  long long build_budget = 100000;  // hierarchy (re)builds during the search
  long long class_budget = 200000;  // interner cap
};

// The level-indexed class/type sets with representative stores. Representative
// and processed-image stores are cumulative over levels.
struct Hierarchy {
  int k = 0;
  int w = 0;
  int ell_pump = 0;

  struct Level {
    std::vector<ClassId> classes;        // classes of the level's rooted-tree set
    int h0 = 0;                          // closure iterations to the fixed point
    std::vector<ClassId> core_alphabet;  // classes of eligible core trees
    std::vector<TypeId> h_types;         // types realized with core length in [ell, 2*ell]
  };
  std::vector<Level> levels;  // levels[i-1] = level i; H data only for i < k

  std::map<ClassId, RootedTree> class_rep;   // representative store (Change for rooted trees)
  std::map<ClassId, RootedTree> atom_rep;    // pole-rooted processed images, by class
  std::map<ClassId, RootedTree> core_rep;    // representative core trees, by class

  struct Processed {
    TypeId ty = -1;
    BipolarTree source;  // the type's representative
    BipolarTree image;   // middle labeled, wings pumped
  };
  std::map<TypeId, Processed> hplus;  // Change + processing for bipolar trees
};

// f-entry key: the type handed to the labeling step plus the middle-ball shape
using FKey = std::pair<TypeId, std::string>;

struct BuildResult {
  std::optional<Hierarchy> hier;  // always set; partial unless complete
  bool complete = false;
  std::optional<FKey> missing;  // first f entry the build needs but lacks
  bool infeasible = false;      // a built class is unsatisfiable
  ClassId bad_class = -1;       // witness for infeasible
  int bad_level = 0;
  int need_ell_pump = 0;  // >0: rebuild with at least this pumping constant
};

// A class is satisfiable when some feasible border labeling is also consistent
// at the root with no outside neighbor.
bool class_satisfiable(const ClassMachine& m, ClassId c);

// Build levels 1..k (H data for i < k) with the given partial f. Stops at the
// first unsatisfiable class or missing f entry. Uses m's current ell_pump.
BuildResult build_hierarchy(ClassMachine& m, int k, const LabelingFunction& f,
                            const GapOptions& opts = {});

bool is_feasible(ClassMachine& m, int k, const LabelingFunction& f, const GapOptions& opts = {});

// Backtracking search over middle labelings, one entry per requested type, with
// partial-hierarchy pruning. `searched` counts refuted assignments.
std::optional<LabelingFunction> find_feasible_function(ClassMachine& m, int k,
                                                       const GapOptions& opts = {},
                                                       long long* searched = nullptr,
                                                       Hierarchy* out_hier = nullptr);

struct GapVerdict {
  int k = 0;
  bool upper = false;  // true: O(n^{1/k}); false: Omega(n^{1/(k-1)})
  LabelingFunction witness;       // when upper
  long long searched = 0;         // refuted assignments (lower)
  int entry_slots = 0;            // distinct f entries requested anywhere in the search
  int candidates_per_slot = 0;
  std::string certificate;
};

GapVerdict decide_gap(const LclProblem& p, int k, const GapOptions& opts = {});

}  // namespace lct
