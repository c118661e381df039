#include "classes.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace lct {

int RootedTree::height() const {
  auto dist = tree.distances_from(root);
  int h = 0;
  for (int x : dist) h = std::max(h, x);
  return h;
}

Tree BipolarTree::materialize(std::vector<int>* core_pos) const {
  Tree g;
  std::vector<int> roots;
  for (const auto& rt : seq) {
    int off = g.n;
    for (int v = 0; v < rt.tree.n; v++) {
      int nv = g.add_vertex(rt.tree.input[v]);
      g.output[nv] = rt.tree.output[v];
    }
    for (int v = 0; v < rt.tree.n; v++)
      for (int u : rt.tree.adj[v])
        if (u > v) g.add_edge(off + v, off + u);
    roots.push_back(off + rt.root);
  }
  for (size_t j = 1; j < roots.size(); j++) g.add_edge(roots[j - 1], roots[j]);
  if (core_pos) *core_pos = roots;
  return g;
}

std::string BipolarTree::serial() const {
  std::string s = "[";
  for (const auto& rt : seq) {
    s += rt.serial();
    s += "|";
  }
  s += "]";
  return s;
}

BipolarTree bipolar_from_tree(const Tree& t, int s, int t_pole) {
  if (!t.is_connected_tree()) throw DomainError("bipolar_from_tree: not a tree");
  // s-t core path
  std::vector<int> par(t.n, -2);
  std::deque<int> q{s};
  par[s] = -1;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int u : t.adj[x])
      if (par[u] == -2) {
        par[u] = x;
        q.push_back(u);
      }
  }
  std::vector<int> path;
  for (int v = t_pole; v != -1; v = par[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  std::vector<char> on_path(t.n, 0);
  for (int v : path) on_path[v] = 1;

  BipolarTree h;
  for (int v : path) {
    RootedTree rt;
    // collect v's hanging subtree (everything reachable without core vertices)
    std::vector<int> verts{v};
    std::vector<int> local(t.n, -1);
    local[v] = 0;
    for (size_t i = 0; i < verts.size(); i++)
      for (int u : t.adj[verts[i]])
        if (local[u] < 0 && !on_path[u]) {
          local[u] = static_cast<int>(verts.size());
          verts.push_back(u);
        }
    for (int x : verts) {
      int nv = rt.tree.add_vertex(t.input[x]);
      rt.tree.output[nv] = t.output[x];
    }
    for (int x : verts)
      for (int u : t.adj[x])
        if (local[u] >= 0 && local[u] > local[x]) rt.tree.add_edge(local[x], local[u]);
    rt.root = 0;
    h.seq.push_back(std::move(rt));
  }
  return h;
}

std::string PoleEntry::key() const {
  std::ostringstream os;
  os << out << "<";
  for (auto& [i, o] : nbrs) os << i << "." << o << ",";
  os << ">";
  return os.str();
}

std::string ClassSignature::key() const {
  std::ostringstream os;
  os << "C i" << root_input << " d" << root_degree << " {";
  for (const auto& e : feasible) os << e.key() << ";";
  os << "}";
  return os.str();
}

std::string TypeSignature::key() const {
  std::ostringstream os;
  os << "T" << (single ? "1" : "2") << " i" << in_s << "," << in_t << " d" << deg_s << ","
     << deg_t << " {";
  for (const auto& [a, b] : feasible) os << a.key() << "/" << b.key() << ";";
  os << "}";
  return os.str();
}

ClassMachine::ClassMachine(const LclProblem& p) : p_(&p) {
  if (p.radius != 1) throw DomainError("class machinery requires a radius-1 problem");
}

bool ClassMachine::allowed(int in, Label out, std::vector<std::pair<int, Label>> nbrs) const {
  ConfigR1 c;
  c.center_in = in;
  c.center_out = out;
  c.nbrs = std::move(nbrs);
  c.normalize();
  return p_->allowed_r1(c);
}

ClassId ClassMachine::intern_class(const ClassSignature& s) {
  ClassSignature norm = s;
  std::sort(norm.feasible.begin(), norm.feasible.end());
  norm.feasible.erase(std::unique(norm.feasible.begin(), norm.feasible.end()),
                      norm.feasible.end());
  std::string k = norm.key();
  auto it = class_ids_.find(k);
  if (it != class_ids_.end()) return it->second;
  if (static_cast<long long>(classes_.size()) >= budget_classes)
    throw BudgetError("class universe exceeded budget");
  ClassId id = static_cast<ClassId>(classes_.size());
  classes_.push_back(std::move(norm));
  class_ids_.emplace(std::move(k), id);
  return id;
}

TypeId ClassMachine::intern_type(const TypeSignature& s) {
  TypeSignature norm = s;
  std::sort(norm.feasible.begin(), norm.feasible.end());
  norm.feasible.erase(std::unique(norm.feasible.begin(), norm.feasible.end()),
                      norm.feasible.end());
  std::string k = norm.key();
  auto it = type_ids_.find(k);
  if (it != type_ids_.end()) return it->second;
  if (static_cast<long long>(types_.size()) >= budget_classes)
    throw BudgetError("type universe exceeded budget");
  TypeId id = static_cast<TypeId>(types_.size());
  types_.push_back(std::move(norm));
  type_ids_.emplace(std::move(k), id);
  return id;
}

ClassId ClassMachine::class_combine(int root_input, Label pinned_out,
                                    const std::vector<ClassId>& children) {
  if (static_cast<int>(children.size()) > p_->delta)
    throw DomainError("class_combine: too many children");
  for (ClassId c : children)
    if (cls(c).root_degree >= p_->delta)
      throw DomainError("class_combine: child root has no free slot");
  std::vector<ClassId> kids = children;
  std::sort(kids.begin(), kids.end());
  std::ostringstream mk;
  mk << pinned_out << ":";
  for (ClassId c : kids) mk << c << ",";
  auto memo_key = std::make_pair(root_input, mk.str());
  if (auto it = combine_memo_.find(memo_key); it != combine_memo_.end()) return it->second;

  ClassSignature sig;
  sig.root_input = root_input;
  sig.root_degree = static_cast<int>(kids.size());
  int n_out = static_cast<int>(p_->outputs.size());
  std::set<PoleEntry> entries;
  for (Label oz = 0; oz < n_out; oz++) {
    if (pinned_out != kUnlabeled && oz != pinned_out) continue;
    // per child, the outputs its root can carry next to (root_input, oz)
    std::vector<std::vector<Label>> valid(kids.size());
    bool ok = true;
    for (size_t i = 0; i < kids.size() && ok; i++) {
      const ClassSignature& c = cls(kids[i]);
      std::set<Label> outs;
      for (const auto& e : c.feasible) {
        if (outs.count(e.out)) continue;
        auto nb = e.nbrs;
        nb.emplace_back(root_input, oz);
        if (allowed(c.root_input, e.out, std::move(nb))) outs.insert(e.out);
      }
      valid[i].assign(outs.begin(), outs.end());
      ok = !valid[i].empty();
    }
    if (!ok) continue;
    // all child-output combinations, recorded as multisets
    std::vector<size_t> idx(kids.size(), 0);
    for (;;) {
      PoleEntry e;
      e.out = oz;
      for (size_t i = 0; i < kids.size(); i++)
        e.nbrs.emplace_back(cls(kids[i]).root_input, valid[i][idx[i]]);
      std::sort(e.nbrs.begin(), e.nbrs.end());
      entries.insert(std::move(e));
      size_t i = 0;
      while (i < kids.size() && ++idx[i] == valid[i].size()) idx[i++] = 0;
      if (i == kids.size()) break;
    }
  }
  sig.feasible.assign(entries.begin(), entries.end());
  ClassId id = intern_class(sig);
  combine_memo_.emplace(std::move(memo_key), id);
  return id;
}

ClassId ClassMachine::class_of(const RootedTree& rt) {
  const Tree& t = rt.tree;
  std::function<ClassId(int, int)> fold = [&](int v, int parent) -> ClassId {
    std::vector<ClassId> kids;
    for (int u : t.adj[v])
      if (u != parent) kids.push_back(fold(u, v));
    return class_combine(t.input[v], t.output[v], kids);
  };
  return fold(rt.root, -1);
}

TypeId ClassMachine::type_of_single(ClassId c) {
  const ClassSignature& C = cls(c);
  TypeSignature sig;
  sig.single = true;
  sig.in_s = sig.in_t = C.root_input;
  sig.deg_s = sig.deg_t = C.root_degree;
  for (const auto& e : C.feasible) sig.feasible.emplace_back(e, e);
  return intern_type(sig);
}

bool ClassMachine::can_append(TypeId q, ClassId c) const {
  const TypeSignature& Q = types_[q];
  const ClassSignature& C = classes_[c];
  if (C.root_degree + 1 > p_->delta) return false;
  if (Q.single) return Q.deg_s + 1 <= p_->delta;
  return Q.deg_t + 1 <= p_->delta;
}

TypeId ClassMachine::type_transition(TypeId q, ClassId c) {
  auto memo_key = std::make_pair(q, c);
  if (auto it = transition_.find(memo_key); it != transition_.end()) return it->second;
  if (!can_append(q, c)) throw DomainError("type_transition: degree bound violated");
  const TypeSignature& Q = type(q);
  const ClassSignature& C = cls(c);
  TypeSignature sig;
  sig.single = false;
  sig.in_s = Q.in_s;
  sig.in_t = C.root_input;
  sig.deg_s = Q.single ? Q.deg_s + 1 : Q.deg_s;
  sig.deg_t = C.root_degree + 1;
  std::set<std::pair<PoleEntry, PoleEntry>> entries;
  for (const auto& [S, T] : Q.feasible) {
    for (const auto& F : C.feasible) {
      if (!Q.single) {
        // the old t pole becomes internal and must satisfy its constraint now
        auto nb = T.nbrs;
        nb.emplace_back(C.root_input, F.out);
        if (!allowed(Q.in_t, T.out, std::move(nb))) continue;
      }
      PoleEntry ns = S;
      if (Q.single) {
        ns.nbrs.emplace_back(C.root_input, F.out);
        std::sort(ns.nbrs.begin(), ns.nbrs.end());
      }
      PoleEntry nt;
      nt.out = F.out;
      nt.nbrs = F.nbrs;
      nt.nbrs.emplace_back(Q.in_t, T.out);
      std::sort(nt.nbrs.begin(), nt.nbrs.end());
      entries.emplace(std::move(ns), std::move(nt));
    }
  }
  sig.feasible.assign(entries.begin(), entries.end());
  TypeId id = intern_type(sig);
  transition_.emplace(memo_key, id);
  return id;
}

TypeId ClassMachine::type_of(const BipolarTree& h) {
  if (h.seq.empty()) throw DomainError("type_of: empty core");
  TypeId q = type_of_single(class_of(h.seq[0]));
  for (size_t j = 1; j < h.seq.size(); j++) q = type_transition(q, class_of(h.seq[j]));
  return q;
}

int ClassMachine::ell_pump(const std::vector<ClassId>& class_universe) {
  std::set<TypeId> seen;
  std::deque<TypeId> frontier;
  for (ClassId c : class_universe) {
    TypeId q = type_of_single(c);
    if (seen.insert(q).second) frontier.push_back(q);
  }
  while (!frontier.empty()) {
    TypeId q = frontier.front();
    frontier.pop_front();
    for (ClassId c : class_universe) {
      if (!can_append(q, c)) continue;
      TypeId nq = type_transition(q, c);
      if (seen.insert(nq).second) frontier.push_back(nq);
    }
  }
  return static_cast<int>(seen.size()) + 1;
}

namespace {
// enumerate output assignments for `slots` (respecting pins already in t),
// invoking f for each
void for_each_assignment(const Tree& base, const std::vector<int>& slots, int n_out,
                         const std::function<void(Tree&)>& f) {
  Tree t = base;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == slots.size()) {
      f(t);
      return;
    }
    int v = slots[i];
    if (base.output[v] != kUnlabeled) {
      rec(i + 1);
      return;
    }
    for (Label o = 0; o < n_out; o++) {
      t.output[v] = o;
      rec(i + 1);
    }
    t.output[v] = kUnlabeled;
  };
  rec(0);
}
}  // namespace

ClassSignature ClassMachine::class_signature_direct(const RootedTree& rt) const {
  const Tree& t0 = rt.tree;
  ClassSignature sig;
  sig.root_input = t0.input[rt.root];
  sig.root_degree = t0.degree(rt.root);
  std::vector<int> slots{rt.root};
  for (int u : t0.adj[rt.root]) slots.push_back(u);
  std::set<PoleEntry> entries;
  int n_out = static_cast<int>(p_->outputs.size());
  for_each_assignment(t0, slots, n_out, [&](Tree& t) {
    CompletionOptions opts;
    opts.check.assign(t.n, 1);
    opts.check[rt.root] = 0;
    if (!complete_labeling(*p_, t, opts)) return;
    PoleEntry e;
    e.out = t.output[rt.root];
    for (int u : t0.adj[rt.root]) e.nbrs.emplace_back(t.input[u], t.output[u]);
    std::sort(e.nbrs.begin(), e.nbrs.end());
    entries.insert(std::move(e));
  });
  sig.feasible.assign(entries.begin(), entries.end());
  return sig;
}

TypeSignature ClassMachine::type_signature_direct(const BipolarTree& h) const {
  std::vector<int> core;
  Tree t0 = h.materialize(&core);
  int s = core.front(), tp = core.back();
  TypeSignature sig;
  sig.single = (h.core_length() == 1);
  sig.in_s = t0.input[s];
  sig.in_t = t0.input[tp];
  sig.deg_s = t0.degree(s);
  sig.deg_t = t0.degree(tp);
  std::vector<int> slots{s};
  if (tp != s) slots.push_back(tp);
  for (int u : t0.adj[s])
    if (std::find(slots.begin(), slots.end(), u) == slots.end()) slots.push_back(u);
  for (int u : t0.adj[tp])
    if (std::find(slots.begin(), slots.end(), u) == slots.end()) slots.push_back(u);
  std::set<std::pair<PoleEntry, PoleEntry>> entries;
  int n_out = static_cast<int>(p_->outputs.size());
  for_each_assignment(t0, slots, n_out, [&](Tree& t) {
    CompletionOptions opts;
    opts.check.assign(t.n, 1);
    opts.check[s] = 0;
    opts.check[tp] = 0;
    if (!complete_labeling(*p_, t, opts)) return;
    PoleEntry es, et;
    es.out = t.output[s];
    for (int u : t0.adj[s]) es.nbrs.emplace_back(t.input[u], t.output[u]);
    std::sort(es.nbrs.begin(), es.nbrs.end());
    et.out = t.output[tp];
    for (int u : t0.adj[tp]) et.nbrs.emplace_back(t.input[u], t.output[u]);
    std::sort(et.nbrs.begin(), et.nbrs.end());
    entries.emplace(std::move(es), std::move(et));
  });
  sig.feasible.assign(entries.begin(), entries.end());
  return sig;
}

}  // namespace lct
