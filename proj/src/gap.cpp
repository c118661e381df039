#include "gap.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace lct {

bool class_satisfiable(const ClassMachine& m, ClassId c) {
  const ClassSignature& sig = m.cls(c);
  for (const auto& e : sig.feasible)
    if (m.allowed(sig.root_input, e.out, e.nbrs)) return true;
  return false;
}

namespace {

RootedTree join_under_root(int input, const std::vector<const RootedTree*>& kids) {
  RootedTree rt;
  rt.root = rt.tree.add_vertex(input);
  for (const RootedTree* kid : kids) {
    int off = rt.tree.n;
    for (int v = 0; v < kid->tree.n; v++) {
      int nv = rt.tree.add_vertex(kid->tree.input[v]);
      rt.tree.output[nv] = kid->tree.output[v];
    }
    for (int v = 0; v < kid->tree.n; v++)
      for (int u : kid->tree.adj[v])
        if (u > v) rt.tree.add_edge(off + v, off + u);
    rt.tree.add_edge(rt.root, off + kid->root);
  }
  return rt;
}

const RootedTree& rep_of(const Hierarchy& H, ClassId c) {
  auto it = H.class_rep.find(c);
  if (it != H.class_rep.end()) return it->second;
  return H.atom_rep.at(c);
}

struct ClosureOut {
  std::vector<ClassId> classes;
  int h0 = 0;
};

// The level's rooted-tree class set: close "new root + up to delta children
// drawn from known classes and processed-image pole classes" until no new class
// appears. Newly found classes get representatives in H.class_rep (smallest
// canonical serialization among the earliest closure round).
ClosureOut run_closure(ClassMachine& m, Hierarchy& H) {
  const LclProblem& p = m.problem();
  int delta = p.delta;
  int n_in = static_cast<int>(p.inputs.size());
  std::vector<ClassId> pool;
  std::set<ClassId> in_pool;
  auto add_pool = [&](ClassId c) {
    if (m.cls(c).root_degree < delta && in_pool.insert(c).second) pool.push_back(c);
  };
  std::set<ClassId> result;
  for (auto& [c, r] : H.class_rep) {
    result.insert(c);
    add_pool(c);
  }
  for (auto& [c, r] : H.atom_rep) add_pool(c);

  ClosureOut out;
  int frontier = 0;
  for (bool first = true;; first = false) {
    std::map<ClassId, std::pair<std::string, RootedTree>> fresh;
    std::vector<int> idx;
    std::function<void(int)> rec = [&](int start) {
      bool has_frontier = first;
      for (int i : idx) has_frontier |= i >= frontier;
      if (has_frontier) {
        std::vector<ClassId> kids;
        kids.reserve(idx.size());
        for (int i : idx) kids.push_back(pool[i]);
        for (int in = 0; in < n_in; in++) {
          ClassId id = m.class_combine(in, kUnlabeled, kids);
          if (!result.count(id)) {
            std::vector<const RootedTree*> reps;
            for (ClassId c : kids) reps.push_back(&rep_of(H, c));
            RootedTree rep = join_under_root(in, reps);
            std::string ser = rep.serial();
            auto it = fresh.find(id);
            if (it == fresh.end())
              fresh.emplace(id, std::make_pair(std::move(ser), std::move(rep)));
            else if (ser < it->second.first)
              it->second = {std::move(ser), std::move(rep)};
          }
        }
      }
      if (static_cast<int>(idx.size()) == delta) return;
      for (int i = start; i < static_cast<int>(pool.size()); i++) {
        idx.push_back(i);
        rec(i);
        idx.pop_back();
      }
    };
    rec(0);
    if (fresh.empty()) break;
    out.h0++;
    int old_pool = static_cast<int>(pool.size());
    for (auto& [id, pr] : fresh) {
      result.insert(id);
      H.class_rep.emplace(id, pr.second);
      add_pool(id);
    }
    frontier = old_pool;
  }
  out.classes.assign(result.begin(), result.end());
  return out;
}

// The classes a core vertex of a level-i bipolar tree may carry: any class of
// the level's set whose root has two slots left for the core path.
std::vector<ClassId> build_core_alphabet(ClassMachine& m, Hierarchy& H,
                                         const std::vector<ClassId>& level_classes) {
  int delta = m.problem().delta;
  std::vector<ClassId> out;
  for (ClassId c : level_classes)
    if (m.cls(c).root_degree <= delta - 2) {
      out.push_back(c);
      if (!H.core_rep.count(c)) H.core_rep.emplace(c, H.class_rep.at(c));
    }
  return out;
}

bool check_satisfiable(ClassMachine& m, const std::vector<ClassId>& classes, int level,
                       BuildResult& out) {
  for (ClassId c : classes)
    if (!class_satisfiable(m, c)) {
      out.infeasible = true;
      out.bad_class = c;
      out.bad_level = level;
      return false;
    }
  return true;
}

std::string middle_shape(const BipolarTree& src) {
  int x = src.core_length();
  const RootedTree& a = src.seq[x / 2 - 1];
  const RootedTree& b = src.seq[x / 2];
  return std::to_string(a.tree.input[a.root]) + "," + std::to_string(b.tree.input[b.root]);
}

using LpCache = std::map<std::vector<ClassId>, int>;

int ell_pump_cached(ClassMachine& m, const std::vector<ClassId>& alphabet, LpCache* cache) {
  if (cache) {
    auto it = cache->find(alphabet);
    if (it != cache->end()) return it->second;
  }
  int lp = m.ell_pump(alphabet);
  if (cache) cache->emplace(alphabet, lp);
  return lp;
}

BuildResult build_impl(ClassMachine& m, int k, const LabelingFunction& f, const GapOptions& opts,
                       LpCache* lp_cache) {
  BuildResult out;
  Hierarchy H;
  H.k = k;
  H.ell_pump = m.ell_pump_value();
  int ell = m.ell();
  H.w = opts.w > 0 ? opts.w : std::max(ell, 2 * m.problem().radius + 2);

  for (int li = 1; li <= k; li++) {
    Hierarchy::Level lv;
    ClosureOut cl = run_closure(m, H);
    lv.classes = cl.classes;
    lv.h0 = cl.h0;
    if (!check_satisfiable(m, lv.classes, li, out)) {
      H.levels.push_back(std::move(lv));
      out.hier = std::move(H);
      return out;
    }
    if (li == k) {
      H.levels.push_back(std::move(lv));
      break;
    }

    lv.core_alphabet = build_core_alphabet(m, H, lv.classes);
    int need = ell_pump_cached(m, lv.core_alphabet, lp_cache);
    if (need > m.ell_pump_value()) {
      out.need_ell_pump = need;
      H.levels.push_back(std::move(lv));
      out.hier = std::move(H);
      return out;
    }

    // reachable types with core length in [ell, 2*ell], with representative words
    std::map<TypeId, std::vector<ClassId>> cur, chosen;
    std::vector<TypeId> order;
    for (int x = 1; x <= 2 * ell; x++) {
      if (x == 1) {
        for (ClassId c : lv.core_alphabet) cur.try_emplace(m.type_of_single(c), std::vector<ClassId>{c});
      } else {
        std::map<TypeId, std::vector<ClassId>> nxt;
        for (auto& [q, wd] : cur)
          for (ClassId c : lv.core_alphabet) {
            if (!m.can_append(q, c)) continue;
            TypeId nq = m.type_transition(q, c);
            if (!nxt.count(nq)) {
              auto w2 = wd;
              w2.push_back(c);
              nxt.emplace(nq, std::move(w2));
            }
          }
        cur = std::move(nxt);
      }
      if (x >= ell)
        for (auto& [q, wd] : cur)
          if (chosen.try_emplace(q, wd).second) order.push_back(q);
    }
    lv.h_types = order;

    for (TypeId q : order) {
      if (H.hplus.count(q)) continue;
      BipolarTree src;
      for (ClassId c : chosen.at(q)) src.seq.push_back(H.core_rep.at(c));
      FKey key{q, middle_shape(src)};
      auto it = f.entries.find(key);
      if (it == f.entries.end()) {
        // before asking for a new entry, check whether the images built so far
        // already doom the next level
        ClosureOut probe = run_closure(m, H);
        if (!check_satisfiable(m, probe.classes, li + 1, out)) {
          H.levels.push_back(std::move(lv));
          out.hier = std::move(H);
          return out;
        }
        out.missing = key;
        H.levels.push_back(std::move(lv));
        out.hier = std::move(H);
        return out;
      }
      Hierarchy::Processed pr;
      pr.ty = q;
      pr.source = src;
      pr.image = extend_op(m, label_op(m, src, it->second), H.w);
      std::vector<int> core;
      Tree mt = pr.image.materialize(&core);
      for (int pole : {core.front(), core.back()}) {
        RootedTree rt;
        rt.tree = mt;
        rt.root = pole;
        ClassId pc = m.class_of(rt);
        H.atom_rep.try_emplace(pc, std::move(rt));
      }
      H.hplus.emplace(q, std::move(pr));
    }
    H.levels.push_back(std::move(lv));
  }
  out.hier = std::move(H);
  out.complete = true;
  return out;
}

int candidate_count(const ClassMachine& m) {
  int o = static_cast<int>(m.problem().outputs.size());
  return o * o;  // radius 1: two middle vertices
}

std::vector<Label> candidate(const ClassMachine& m, int idx) {
  int o = static_cast<int>(m.problem().outputs.size());
  return {idx / o, idx % o};
}

struct Search {
  ClassMachine& m;
  int k;
  GapOptions opts;
  LpCache lp_cache;
  long long builds = 0;
  long long refuted = 0;
  std::set<FKey> slots_seen;
  std::optional<Hierarchy> final_hier;

  std::optional<LabelingFunction> run() {
    int lp = std::max(2, m.ell_pump_value());
    for (;;) {  // restarts when ell_pump grows
      m.set_ell_pump(lp);
      LabelingFunction f;
      std::vector<std::pair<FKey, int>> stack;
      for (;;) {
        if (++builds > opts.build_budget) throw BudgetError("hierarchy build budget exceeded");
        BuildResult res = build_impl(m, k, f, opts, &lp_cache);
        if (res.need_ell_pump > lp) {
          lp = res.need_ell_pump;
          break;  // restart with the larger pumping constant
        }
        if (res.complete) {
          final_hier = std::move(res.hier);
          return f;
        }
        if (res.missing) {
          slots_seen.insert(*res.missing);
          stack.emplace_back(*res.missing, 0);
          f.entries[*res.missing] = candidate(m, 0);
          continue;
        }
        // infeasible: advance the deepest entry
        refuted++;
        bool exhausted = false;
        for (;;) {
          if (stack.empty()) {
            exhausted = true;
            break;
          }
          auto& top = stack.back();
          top.second++;
          if (top.second < candidate_count(m)) {
            f.entries[top.first] = candidate(m, top.second);
            break;
          }
          f.entries.erase(top.first);
          stack.pop_back();
        }
        if (exhausted) return std::nullopt;
      }
    }
  }
};

}  // namespace

BuildResult build_hierarchy(ClassMachine& m, int k, const LabelingFunction& f,
                            const GapOptions& opts) {
  return build_impl(m, k, f, opts, nullptr);
}

bool is_feasible(ClassMachine& m, int k, const LabelingFunction& f, const GapOptions& opts) {
  LpCache cache;
  for (int guard = 0; guard < 64; guard++) {
    BuildResult res = build_impl(m, k, f, opts, &cache);
    if (res.need_ell_pump > m.ell_pump_value()) {
      m.set_ell_pump(res.need_ell_pump);
      continue;
    }
    if (res.missing) throw DomainError("labeling function undefined on a needed type");
    return res.complete;
  }
  throw BudgetError("pumping constant failed to stabilize");
}

std::optional<LabelingFunction> find_feasible_function(ClassMachine& m, int k,
                                                       const GapOptions& opts,
                                                       long long* searched, Hierarchy* out_hier) {
  if (k < 2) throw DomainError("k must be at least 2");
  Search s{m, k, opts};
  auto f = s.run();
  if (searched) *searched = s.refuted;
  if (out_hier && s.final_hier) *out_hier = *s.final_hier;
  return f;
}

GapVerdict decide_gap(const LclProblem& p, int k, const GapOptions& opts) {
  if (k < 2) throw DomainError("k must be at least 2");
  ClassMachine m(p);
  m.budget_classes = opts.class_budget;
  Search s{m, k, opts};
  auto f = s.run();
  GapVerdict v;
  v.k = k;
  v.entry_slots = static_cast<int>(s.slots_seen.size());
  v.candidates_per_slot = candidate_count(m);
  if (f) {
    v.upper = true;
    v.witness = *f;
    std::ostringstream os;
    os << "feasible labeling function with " << f->entries.size() << " entries";
    v.certificate = os.str();
  } else {
    v.upper = false;
    v.searched = s.refuted;
    std::ostringstream os;
    os << "exhausted search: " << s.refuted << " refuted assignments over " << v.entry_slots
       << " entry slots with " << v.candidates_per_slot
       << " candidates each; every partial assignment reaches an unsatisfiable class";
    v.certificate = os.str();
  }
  return v;
}

}  // namespace lct
