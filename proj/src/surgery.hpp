#pragma once

#include "classes.hpp"

namespace lct {

// Core-length adjustment: repeat or drop a type-preserving segment until the
// core length lands in [w, w + ell_pump]. Requires core length >= ell_pump and
// w >= ell_pump.
BipolarTree pump(ClassMachine& m, const BipolarTree& h, int w);

// Pin the outputs of the two middle core vertices (positions floor(x/2) and
// floor(x/2)+1, 1-based). Requires x >= ell() and unlabeled middles.
BipolarTree label_op(ClassMachine& m, const BipolarTree& h, const std::vector<Label>& middle);

// Pump both wings around the (already labeled) middle; x must be in [ell, 2*ell].
BipolarTree extend_op(ClassMachine& m, const BipolarTree& h, int w);

// Swap the hanging subtree rooted at sub_root (entered from attach; attach = -1
// replaces a whole component) for `repl`.
struct RootedReplace {
  Tree tree;
  std::vector<int> host_map;  // g index -> new index, -1 for removed vertices
  std::vector<int> repl_map;  // repl index -> new index
  int new_root = -1;
};
RootedReplace replace_rooted(const Tree& g, int attach, int sub_root, const RootedTree& repl);

// Swap the subtree spanned between poles s and t (attached to the rest of g by
// the edges {u,s} and {v,t}; u or v may be -1 when that side has no host) for
// the bipolar tree `repl`.
struct BipolarReplace {
  Tree tree;
  std::vector<int> host_map;
  std::vector<int> repl_map;   // index in repl.materialize() -> new index
  std::vector<int> repl_core;  // new indices of repl's core vertices
};
BipolarReplace replace_bipolar(const Tree& g, int u, int s, int v, int t_pole,
                               const BipolarTree& repl);

// Duplicate the subtree between poles s,t together with its two attachment
// edges, then cut: u keeps one copy, v the other.
struct DuplicateCut {
  Tree tree;
  std::vector<int> host_map;
  std::vector<int> copy_u;  // subtree g index -> new index in the copy kept by u
  std::vector<int> copy_v;  //                                 ... kept by v
};
DuplicateCut duplicate_cut(const Tree& g, int u, int s, int v, int t_pole);

// Find output labels for the subtree of `g` hanging at z (entered from attach)
// realizing `entry` at z: z and its subtree children get the entry's labels and
// everything strictly below z is locally consistent. Returns the full labeling
// of g's subtree vertices written into a copy of g, or throws DomainError when
// the entry is not feasible for the subtree.
std::vector<Label> realize_rooted_entry(ClassMachine& m, const Tree& g, int attach, int z,
                                        const PoleEntry& entry);
// Same between two poles; es/et describe the borders at s and t.
std::vector<Label> realize_bipolar_entry(ClassMachine& m, const Tree& g, int u, int s, int v,
                                         int t_pole, const PoleEntry& es, const PoleEntry& et);

// Transfer a legal labeling across a same-class (resp. same-type) replacement:
// given a complete labeling of rep.tree, produce one of g agreeing with it on
// the host part.
std::vector<Label> recover_from_replace_rooted(ClassMachine& m, const Tree& g, int attach, int z,
                                               const RootedReplace& rep,
                                               const std::vector<Label>& labels);
std::vector<Label> recover_from_replace_bipolar(ClassMachine& m, const Tree& g, int u, int s,
                                                int v, int t_pole, const BipolarReplace& rep,
                                                const std::vector<Label>& labels);

// Undo a duplicate-cut: glue a labeling of dc.tree back onto g, taking the
// (mid_a-side) half from u's copy and the rest from v's copy. mid_a/mid_b is
// the middle core edge whose endpoints carry pinned outputs.
std::vector<Label> recover_from_duplicate_cut(const Tree& g, int u, int s, int v, int t_pole,
                                              int mid_a, int mid_b, const DuplicateCut& dc,
                                              const std::vector<Label>& labels);

// Vertices of the subtree cut off by removing edges {u,s} (and {v,t} if v>=0):
// the component containing s (and t).
std::vector<int> enclosed_subtree(const Tree& g, int u, int s, int v, int t_pole);

}  // namespace lct
