#include "runner.hpp"

#include <algorithm>

namespace lct {

namespace {

struct SubTree {
  Tree tree;
  std::vector<int> to_local;  // host index -> local index, -1 outside
};

SubTree induced(const Tree& g, const std::vector<int>& verts) {
  SubTree s;
  s.to_local.assign(g.n, -1);
  for (int v : verts) {
    s.to_local[v] = s.tree.add_vertex(g.input[v]);
    s.tree.output[s.to_local[v]] = g.output[v];
  }
  for (int v : verts)
    for (int u : g.adj[v])
      if (u > v && s.to_local[u] >= 0) s.tree.add_edge(s.to_local[v], s.to_local[u]);
  return s;
}

// diameter of the real part of a vertex set (imaginary vertices are held
// locally and cost nothing)
int real_diameter(const VirtualGraph& g, const std::vector<int>& verts) {
  std::vector<int> reals;
  for (int v : verts)
    if (g.orig[v] >= 0) reals.push_back(v);
  if (reals.empty()) return 0;
  std::vector<char> in(g.tree.n, 0);
  for (int v : reals) in[v] = 1;
  auto far = [&](int from) {
    std::vector<int> dist(g.tree.n, -1);
    std::vector<int> q{from};
    dist[from] = 0;
    std::pair<int, int> best{0, from};
    for (size_t i = 0; i < q.size(); i++) {
      int x = q[i];
      best = std::max(best, {dist[x], x});
      for (int y : g.tree.adj[x])
        if (in[y] && dist[y] < 0) {
          dist[y] = dist[x] + 1;
          q.push_back(y);
        }
    }
    return best;
  };
  auto [d1, a] = far(reals[0]);
  auto [d2, b] = far(a);
  return d2;
}

std::vector<std::vector<int>> all_components(const Tree& g) {
  return induced_components(g, std::vector<char>(g.n, 1));
}

int layer_of(const VirtualGraph& g, const Decomposition& d, int v) {
  return g.orig[v] >= 0 ? d.layer[g.orig[v]] : -1;
}

RtoC to_C(ClassMachine& m, const Hierarchy& h, const Decomposition& d, const VirtualGraph& R,
          int level, VirtualGraph& C) {
  RtoC st;
  st.level = level;
  int n = R.tree.n;
  int c_tag = Decomposition::tag_C(level);
  auto in_c = [&](int v) { return layer_of(R, d, v) >= c_tag; };

  st.r_to_c.assign(n, -1);
  std::vector<char> kept(n, 0);
  for (const auto& comp : all_components(R.tree)) {
    bool keep = false;
    for (int v : comp) keep |= in_c(v);
    if (keep)
      for (int v : comp) kept[v] = 1;
    else
      st.dropped.push_back(comp);
  }

  std::vector<char> claimed(n, 0);
  for (int v = 0; v < n; v++) {
    if (!kept[v] || !in_c(v)) continue;
    TvStep tv;
    tv.v_r = v;
    tv.region_r = {v};
    claimed[v] = 1;
    for (size_t i = 0; i < tv.region_r.size(); i++) {
      int x = tv.region_r[i];
      for (int y : R.tree.adj[x]) {
        if (in_c(y)) {
          if (x == v) tv.attach_r = y;
          continue;
        }
        if (claimed[y]) {
          if (std::find(tv.region_r.begin(), tv.region_r.end(), y) == tv.region_r.end())
            throw DomainError("hanging tree touches two C-layer vertices");
          continue;
        }
        claimed[y] = 1;
        tv.region_r.push_back(y);
      }
    }
    std::sort(tv.region_r.begin(), tv.region_r.end());

    SubTree sub = induced(R.tree, tv.region_r);
    RootedTree rt{sub.tree, sub.to_local[v]};
    ClassId c = m.class_of(rt);
    auto it = h.class_rep.find(c);
    if (it == h.class_rep.end()) throw DomainError("hanging tree class outside the hierarchy");
    const RootedTree& rep = it->second;

    int off = C.tree.n;
    for (int w = 0; w < rep.tree.n; w++) {
      int nw = C.tree.add_vertex(rep.tree.input[w]);
      C.tree.output[nw] = rep.tree.output[w];
      C.orig.push_back(w == rep.root ? R.orig[v] : -1);
    }
    for (int w = 0; w < rep.tree.n; w++)
      for (int x : rep.tree.adj[w])
        if (x > w) C.tree.add_edge(off + w, off + x);
    tv.root_c = off + rep.root;
    st.r_to_c[v] = tv.root_c;
    st.tv.push_back(std::move(tv));
  }
  for (int v = 0; v < n; v++) {
    if (!kept[v] || claimed[v]) continue;
    throw DomainError("vertex not covered by any hanging tree");
  }
  for (int v = 0; v < n; v++) {
    if (st.r_to_c[v] < 0) continue;
    for (int u : R.tree.adj[v])
      if (u > v && st.r_to_c[u] >= 0) C.tree.add_edge(st.r_to_c[v], st.r_to_c[u]);
  }
  return st;
}

CtoR to_R(ClassMachine& m, const Hierarchy& h, const Decomposition& d, const VirtualGraph& C,
          int level, VirtualGraph& R) {
  CtoR st;
  st.level = level;
  int n = C.tree.n;
  int c_tag = Decomposition::tag_C(level);
  auto on_path = [&](int v) { return layer_of(C, d, v) == c_tag; };

  // order each C-layer path from its smaller-index endpoint
  std::vector<char> seen(n, 0);
  std::vector<char> in_region(n, 0);
  for (int v0 = 0; v0 < n; v0++) {
    if (!on_path(v0) || seen[v0]) continue;
    std::vector<int> member{v0};
    seen[v0] = 1;
    for (size_t i = 0; i < member.size(); i++)
      for (int y : C.tree.adj[member[i]])
        if (on_path(y) && !seen[y]) {
          seen[y] = 1;
          member.push_back(y);
        }
    std::vector<int> ends;
    for (int v : member) {
      int deg = 0;
      for (int y : C.tree.adj[v]) deg += on_path(y);
      if (deg <= 1) ends.push_back(v);
    }
    if (ends.size() != 2) throw DomainError("C layer component is not a path");
    int start = std::min(ends[0], ends[1]);
    std::vector<int> path{start};
    int prev = -1;
    while (true) {
      int cur = path.back(), nxt = -1;
      for (int y : C.tree.adj[cur])
        if (on_path(y) && y != prev) nxt = y;
      if (nxt < 0) break;
      prev = cur;
      path.push_back(nxt);
    }
    if (path.size() != member.size()) throw DomainError("C layer component is not a path");

    PathStep ps;
    ps.s_c = path.front();
    ps.t_c = path.back();
    auto host_of = [&](int pole) {
      for (int y : C.tree.adj[pole])
        if (layer_of(C, d, y) > c_tag) return y;
      return -1;
    };
    ps.u_c = host_of(ps.s_c);
    ps.v_c = host_of(ps.t_c);

    ps.region_c = path;
    std::vector<char> core(n, 0);
    for (int v : path) core[v] = 1;
    for (size_t i = 0; i < ps.region_c.size(); i++) {
      int x = ps.region_c[i];
      for (int y : C.tree.adj[x]) {
        if (y == ps.u_c || y == ps.v_c || core[y]) continue;
        if (!in_region[y]) {
          in_region[y] = 1;
          ps.region_c.push_back(y);
        }
      }
    }
    for (int v : path) in_region[v] = 1;
    std::sort(ps.region_c.begin(), ps.region_c.end());

    // the bipolar tree H_P: per core vertex, the core tree with its hangings
    BipolarTree hp;
    std::vector<char> used(n, 0);
    for (int v : path) used[v] = 1;
    for (int v : path) {
      std::vector<int> verts{v};
      for (size_t i = 0; i < verts.size(); i++)
        for (int y : C.tree.adj[verts[i]])
          if (!used[y] && in_region[y]) {
            used[y] = 1;
            verts.push_back(y);
          }
      std::sort(verts.begin(), verts.end());
      SubTree sub = induced(C.tree, verts);
      hp.seq.push_back(RootedTree{sub.tree, sub.to_local[v]});
    }
    ps.ty = m.type_of(hp);
    auto it = h.hplus.find(ps.ty);
    if (it == h.hplus.end()) throw DomainError("path type outside the hierarchy");
    if (!st.images.count(ps.ty)) {
      std::vector<int> core_pos;
      Tree img = it->second.image.materialize(&core_pos);
      st.images.emplace(ps.ty, std::make_pair(std::move(img), std::move(core_pos)));
    }
    st.paths.push_back(std::move(ps));
  }

  // survivors keep their vertices; each path contributes up to two image copies
  st.c_to_r.assign(n, -1);
  for (int v = 0; v < n; v++) {
    if (in_region[v]) continue;
    st.c_to_r[v] = R.tree.add_vertex(C.tree.input[v]);
    R.tree.output[st.c_to_r[v]] = C.tree.output[v];
    R.orig.push_back(C.orig[v]);
  }
  for (int v = 0; v < n; v++) {
    if (st.c_to_r[v] < 0) continue;
    for (int u : C.tree.adj[v])
      if (u > v && st.c_to_r[u] >= 0) R.tree.add_edge(st.c_to_r[v], st.c_to_r[u]);
  }
  for (auto& ps : st.paths) {
    const auto& [img, core_pos] = st.images.at(ps.ty);
    auto append_copy = [&](int host_new, int pole_img) {
      std::vector<int> map(img.n);
      for (int w = 0; w < img.n; w++) {
        map[w] = R.tree.add_vertex(img.input[w]);
        R.tree.output[map[w]] = img.output[w];
        R.orig.push_back(-1);
      }
      for (int w = 0; w < img.n; w++)
        for (int x : img.adj[w])
          if (x > w) R.tree.add_edge(map[w], map[x]);
      if (host_new >= 0) R.tree.add_edge(host_new, map[pole_img]);
      return map;
    };
    if (ps.u_c >= 0) ps.copy_u = append_copy(st.c_to_r[ps.u_c], core_pos.front());
    if (ps.v_c >= 0) ps.copy_v = append_copy(st.c_to_r[ps.v_c], core_pos.back());
    if (ps.u_c < 0 && ps.v_c < 0) ps.copy_u = append_copy(-1, core_pos.front());
  }
  return st;
}

PoleEntry entry_at(const Tree& img, const std::vector<int>& copy, int pole,
                   const std::vector<Label>& labels) {
  PoleEntry e;
  e.out = labels[copy[pole]];
  for (int y : img.adj[pole]) e.nbrs.emplace_back(img.input[y], labels[copy[y]]);
  std::sort(e.nbrs.begin(), e.nbrs.end());
  return e;
}

}  // namespace

VirtualSequence build_virtual_sequence(ClassMachine& m, const Hierarchy& h, const Tree& tree,
                                       const Decomposition& d) {
  VirtualSequence seq;
  VirtualGraph r1;
  r1.tree = tree;
  r1.orig.resize(tree.n);
  for (int v = 0; v < tree.n; v++) r1.orig[v] = v;
  seq.graphs.push_back(std::move(r1));
  for (int i = 1; i < h.k; i++) {
    VirtualGraph c;
    seq.rc.push_back(to_C(m, h, d, seq.graphs.back(), i, c));
    seq.graphs.push_back(std::move(c));
    VirtualGraph r;
    seq.cr.push_back(to_R(m, h, d, seq.graphs.back(), i, r));
    seq.graphs.push_back(std::move(r));
  }
  return seq;
}

std::vector<Label> solve_top(const LclProblem& p, const VirtualGraph& rk) {
  auto r = complete_labeling(p, rk.tree);
  if (!r) throw DomainError("top-level graph admits no legal labeling");
  return *r;
}

std::vector<Label> pull_back_R_to_C(ClassMachine& m, const CtoR& st, const VirtualGraph& c_graph,
                                    const std::vector<Label>& labels_r) {
  std::vector<Label> out = c_graph.tree.output;
  for (int v = 0; v < c_graph.tree.n; v++)
    if (st.c_to_r[v] >= 0) out[v] = labels_r[st.c_to_r[v]];
  for (const auto& ps : st.paths) {
    const auto& [img, core_pos] = st.images.at(ps.ty);
    const std::vector<int>& for_s = !ps.copy_u.empty() ? ps.copy_u : ps.copy_v;
    const std::vector<int>& for_t = !ps.copy_v.empty() ? ps.copy_v : ps.copy_u;
    PoleEntry es = entry_at(img, for_s, core_pos.front(), labels_r);
    PoleEntry et = entry_at(img, for_t, core_pos.back(), labels_r);
    auto res = realize_bipolar_entry(m, c_graph.tree, ps.u_c, ps.s_c, ps.v_c, ps.t_c, es, et);
    for (int w : ps.region_c) out[w] = res[w];
  }
  return out;
}

std::vector<Label> pull_back_C_to_R(ClassMachine& m, const RtoC& st, const VirtualGraph& r_graph,
                                    const VirtualGraph& c_graph,
                                    const std::vector<Label>& labels_c) {
  std::vector<Label> out = r_graph.tree.output;
  for (const auto& tv : st.tv) {
    PoleEntry e;
    e.out = labels_c[tv.root_c];
    for (int y : c_graph.tree.adj[tv.root_c])
      if (c_graph.orig[y] < 0) e.nbrs.emplace_back(c_graph.tree.input[y], labels_c[y]);
    std::sort(e.nbrs.begin(), e.nbrs.end());
    // realize inside T_v only: the root may have further neighbors outside the
    // region (other C-layer vertices), so cut the region out first
    SubTree sub = induced(r_graph.tree, tv.region_r);
    auto res = realize_rooted_entry(m, sub.tree, -1, sub.to_local[tv.v_r], e);
    for (int w : tv.region_r) out[w] = res[sub.to_local[w]];
  }
  for (const auto& comp : st.dropped) {
    SubTree sub = induced(r_graph.tree, comp);
    auto res = complete_labeling(m.problem(), sub.tree);
    if (!res) throw DomainError("dropped component admits no legal labeling");
    for (int v : comp) out[v] = (*res)[sub.to_local[v]];
  }
  return out;
}

RunResult run_canonical(const LclProblem& p, const Tree& tree, int k, const LabelingFunction& f,
                        const GapOptions& opts) {
  if (k < 2) throw DomainError("k must be at least 2");
  if (!tree.is_forest() || tree.n == 0) throw DomainError("input must be a nonempty forest");
  ClassMachine m(p);
  m.budget_classes = opts.class_budget;
  Hierarchy h;
  for (int guard = 0;; guard++) {
    if (guard >= 64) throw BudgetError("pumping constant failed to stabilize");
    BuildResult res = build_hierarchy(m, k, f, opts);
    if (res.need_ell_pump > m.ell_pump_value()) {
      m.set_ell_pump(res.need_ell_pump);
      continue;
    }
    if (res.missing) throw DomainError("labeling function lacks a needed entry");
    if (res.infeasible) throw DomainError("labeling function is not feasible");
    h = std::move(*res.hier);
    break;
  }

  RunResult rr;
  rr.hierarchy = h;
  Network net;
  net.tree = tree;
  net.id = assign_ids(tree, 0x1c1d2e3fULL);
  net.n_claimed = tree.n;
  int ell = m.ell();
  auto [d, dec_rounds] = simulate_decomposition(net, gamma_for(tree.n, k, ell), ell);
  rr.decomp = d;
  rr.rounds_used = dec_rounds;

  VirtualSequence seq = build_virtual_sequence(m, h, tree, d);

  // round charges: gathering a region costs the diameter of its real part,
  // once while building and once while pulling labels back
  long long build_cost = 0;
  for (size_t i = 0; i < seq.rc.size(); i++) {
    long long c = 0;
    for (const auto& tv : seq.rc[i].tv)
      c = std::max<long long>(c, real_diameter(seq.graphs[2 * i], tv.region_r));
    for (const auto& ps : seq.cr[i].paths)
      c = std::max<long long>(c, real_diameter(seq.graphs[2 * i + 1], ps.region_c));
    build_cost += c;
  }
  const VirtualGraph& top = seq.graphs.back();
  long long top_cost = 0;
  for (const auto& comp : all_components(top.tree))
    top_cost = std::max(top_cost, (long long)real_diameter(top, comp));

  std::vector<Label> labels = solve_top(p, top);
  for (int i = static_cast<int>(seq.cr.size()) - 1; i >= 0; i--) {
    labels = pull_back_R_to_C(m, seq.cr[i], seq.graphs[2 * i + 1], labels);
    labels = pull_back_C_to_R(m, seq.rc[i], seq.graphs[2 * i], seq.graphs[2 * i + 1], labels);
  }
  rr.rounds_used += 2 * build_cost + top_cost;
  rr.labeling = std::move(labels);
  return rr;
}

}  // namespace lct
