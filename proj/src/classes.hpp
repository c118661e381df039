#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "core.hpp"

namespace lct {

struct RootedTree {
  Tree tree;
  int root = 0;
  std::string serial() const { return canonical_serial(tree, root); }
  int height() const;
};

// A bipolar tree as its core-path sequence of rooted trees; pole s is the root
// of seq.front(), pole t the root of seq.back().
struct BipolarTree {
  std::vector<RootedTree> seq;
  int core_length() const { return static_cast<int>(seq.size()); }
  // Single tree with consecutive core roots linked; core_pos receives the
  // materialized index of each core vertex.
  Tree materialize(std::vector<int>* core_pos = nullptr) const;
  std::string serial() const;
};

BipolarTree bipolar_from_tree(const Tree& t, int s, int t_pole);

// One feasible border labeling around a pole: the pole's output plus the
// (input, output) multiset of its inside-the-tree neighbors.
struct PoleEntry {
  Label out = 0;
  std::vector<std::pair<int, Label>> nbrs;  // sorted
  auto operator<=>(const PoleEntry&) const = default;
  std::string key() const;
};

struct ClassSignature {
  int root_input = 0;
  int root_degree = 0;  // inside the tree; a free host slot exists iff < delta
  std::vector<PoleEntry> feasible;  // sorted, unique
  std::string key() const;
};

struct TypeSignature {
  bool single = false;  // s == t (core length 1)
  int in_s = 0, in_t = 0;
  int deg_s = 0, deg_t = 0;  // inside-the-tree degrees of the poles
  std::vector<std::pair<PoleEntry, PoleEntry>> feasible;  // (s side, t side), sorted
  std::string key() const;
};

using ClassId = int;
using TypeId = int;

// Middle labels per bipolar type: the assignment Label writes on N^{r-1}(e).
struct LabelingFunction {
  // key: (type id, middle-ball shape key) -> labels for the middle vertices in
  // core order
  std::map<std::pair<TypeId, std::string>, std::vector<Label>> entries;
};

// Per-problem context: interned class/type signatures and the transition table.
// Radius-1 problems only.
class ClassMachine {
 public:
  explicit ClassMachine(const LclProblem& p);

  const LclProblem& problem() const { return *p_; }

  ClassId class_of(const RootedTree& t);
  ClassId class_combine(int root_input, Label pinned_out, const std::vector<ClassId>& children);
  TypeId type_of(const BipolarTree& h);
  TypeId type_of_single(ClassId c);
  TypeId type_transition(TypeId q, ClassId c);
  // whether a core vertex of class c may be appended after a tree of type q
  // without breaking the degree bound
  bool can_append(TypeId q, ClassId c) const;

  const ClassSignature& cls(ClassId id) const { return classes_[id]; }
  const TypeSignature& type(TypeId id) const { return types_[id]; }
  int class_count() const { return static_cast<int>(classes_.size()); }
  int type_count() const { return static_cast<int>(types_.size()); }

  // |types reachable by words over the universe| + 1
  int ell_pump(const std::vector<ClassId>& class_universe);

  // module-wide pumping parameters; ell = 2*(r + ell_pump)
  void set_ell_pump(int lp) { ell_pump_ = lp; }
  int ell_pump_value() const { return ell_pump_; }
  int ell() const { return 2 * (p_->radius + ell_pump_); }

  bool allowed(int in, Label out, std::vector<std::pair<int, Label>> nbrs) const;

  // exact signatures recomputed by brute force; used to cross-check the
  // compositional computation (small trees only)
  ClassSignature class_signature_direct(const RootedTree& t) const;
  TypeSignature type_signature_direct(const BipolarTree& h) const;

  ClassId intern_class(const ClassSignature& s);
  TypeId intern_type(const TypeSignature& s);

  long long budget_classes = 20000;

 private:
  const LclProblem* p_;
  int ell_pump_ = 1;
  std::vector<ClassSignature> classes_;
  std::unordered_map<std::string, ClassId> class_ids_;
  std::vector<TypeSignature> types_;
  std::unordered_map<std::string, TypeId> type_ids_;
  std::map<std::pair<TypeId, ClassId>, TypeId> transition_;
  std::map<std::pair<int, std::string>, ClassId> combine_memo_;
};

}  // namespace lct
