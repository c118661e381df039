#include "surgery.hpp"

#include <algorithm>
#include <deque>

namespace lct {

std::vector<int> enclosed_subtree(const Tree& g, int u, int s, int v, int t_pole) {
  std::vector<int> verts;
  std::vector<char> seen(g.n, 0);
  seen[s] = 1;
  verts.push_back(s);
  for (size_t i = 0; i < verts.size(); i++) {
    int x = verts[i];
    for (int y : g.adj[x]) {
      if (x == s && y == u) continue;
      if (x == t_pole && y == v) continue;
      if (!seen[y]) {
        seen[y] = 1;
        verts.push_back(y);
      }
    }
  }
  if (t_pole >= 0 && !seen[t_pole]) throw DomainError("poles lie in different components");
  if ((u >= 0 && seen[u]) || (v >= 0 && seen[v]))
    throw DomainError("attachment vertex inside the removed subtree");
  std::sort(verts.begin(), verts.end());
  return verts;
}

namespace {

// prefix types of b, lengths 1..lim
std::vector<TypeId> prefix_types(ClassMachine& m, const BipolarTree& b, int lim) {
  std::vector<TypeId> pref;
  TypeId q = m.type_of_single(m.class_of(b.seq[0]));
  pref.push_back(q);
  for (int j = 1; j < lim; j++) {
    q = m.type_transition(q, m.class_of(b.seq[j]));
    pref.push_back(q);
  }
  return pref;
}

// first pair of equal prefix types among lengths 1..min(len, lp); returns
// segment bounds [lo, hi) in sequence indices
bool find_repeat(ClassMachine& m, const BipolarTree& b, int lp, int& lo, int& hi) {
  int lim = std::min(b.core_length(), lp);
  auto pref = prefix_types(m, b, lim);
  for (int bb = 1; bb < lim; bb++)
    for (int aa = 0; aa < bb; aa++)
      if (pref[aa] == pref[bb]) {
        lo = aa + 1;
        hi = bb + 1;
        return true;
      }
  return false;
}

}  // namespace

BipolarTree pump(ClassMachine& m, const BipolarTree& h, int w) {
  int lp = m.ell_pump_value();
  if (h.core_length() < lp) throw DomainError("pump: core shorter than ell_pump");
  if (w < lp) throw DomainError("pump: target width below ell_pump");
  BipolarTree cur = h;
  while (cur.core_length() < w) {
    int lo, hi;
    if (!find_repeat(m, cur, lp, lo, hi)) throw DomainError("pump: no repeated prefix type");
    std::vector<RootedTree> seg(cur.seq.begin() + lo, cur.seq.begin() + hi);
    cur.seq.insert(cur.seq.begin() + hi, seg.begin(), seg.end());
  }
  while (cur.core_length() > w + lp) {
    int lo, hi;
    if (!find_repeat(m, cur, lp, lo, hi)) throw DomainError("pump: no repeated prefix type");
    cur.seq.erase(cur.seq.begin() + lo, cur.seq.begin() + hi);
  }
  return cur;
}

BipolarTree label_op(ClassMachine& m, const BipolarTree& h, const std::vector<Label>& middle) {
  int x = h.core_length();
  if (x < m.ell()) throw DomainError("label_op: core shorter than ell");
  if (static_cast<int>(middle.size()) != 2) throw DomainError("label_op: need two middle labels");
  int m0 = x / 2 - 1, m1 = x / 2;
  BipolarTree out = h;
  for (int j : {m0, m1}) {
    RootedTree& rt = out.seq[j];
    if (rt.tree.output[rt.root] != kUnlabeled) throw DomainError("label_op: middle already labeled");
  }
  out.seq[m0].tree.output[out.seq[m0].root] = middle[0];
  out.seq[m1].tree.output[out.seq[m1].root] = middle[1];
  return out;
}

BipolarTree extend_op(ClassMachine& m, const BipolarTree& h, int w) {
  int x = h.core_length();
  int ell = m.ell();
  if (x < ell || x > 2 * ell) throw DomainError("extend_op: core length out of [ell, 2*ell]");
  int m0 = x / 2 - 1, m1 = x / 2;
  BipolarTree wing_x{std::vector<RootedTree>(h.seq.begin(), h.seq.begin() + m0)};
  BipolarTree wing_z{std::vector<RootedTree>(h.seq.begin() + m1 + 1, h.seq.end())};
  BipolarTree px = pump(m, wing_x, w);
  BipolarTree pz = pump(m, wing_z, w);
  BipolarTree out;
  out.seq = std::move(px.seq);
  out.seq.push_back(h.seq[m0]);
  out.seq.push_back(h.seq[m1]);
  out.seq.insert(out.seq.end(), pz.seq.begin(), pz.seq.end());
  return out;
}

namespace {

// append a copy of `src` restricted to `verts`; map[srcv] = new index
void append_induced(Tree& dst, const Tree& src, const std::vector<int>& verts,
                    std::vector<int>& map) {
  for (int x : verts) {
    int nv = dst.add_vertex(src.input[x]);
    dst.output[nv] = src.output[x];
    map[x] = nv;
  }
  for (int x : verts)
    for (int y : src.adj[x])
      if (map[y] >= 0 && map[y] > map[x] && std::binary_search(verts.begin(), verts.end(), y))
        dst.add_edge(map[x], map[y]);
}

std::vector<int> host_vertices(const Tree& g, const std::vector<int>& sub) {
  std::vector<char> in_sub(g.n, 0);
  for (int x : sub) in_sub[x] = 1;
  std::vector<int> host;
  for (int v = 0; v < g.n; v++)
    if (!in_sub[v]) host.push_back(v);
  return host;
}

}  // namespace

RootedReplace replace_rooted(const Tree& g, int attach, int sub_root, const RootedTree& repl) {
  auto sub = enclosed_subtree(g, attach, sub_root, -1, -1);
  auto host = host_vertices(g, sub);
  RootedReplace res;
  res.host_map.assign(g.n, -1);
  append_induced(res.tree, g, host, res.host_map);
  res.repl_map.assign(repl.tree.n, -1);
  std::vector<int> all(repl.tree.n);
  for (int i = 0; i < repl.tree.n; i++) all[i] = i;
  append_induced(res.tree, repl.tree, all, res.repl_map);
  res.new_root = res.repl_map[repl.root];
  if (attach >= 0) res.tree.add_edge(res.host_map[attach], res.new_root);
  return res;
}

BipolarReplace replace_bipolar(const Tree& g, int u, int s, int v, int t_pole,
                               const BipolarTree& repl) {
  auto sub = enclosed_subtree(g, u, s, v, t_pole);
  auto host = host_vertices(g, sub);
  BipolarReplace res;
  res.host_map.assign(g.n, -1);
  append_induced(res.tree, g, host, res.host_map);
  std::vector<int> core;
  Tree rt = repl.materialize(&core);
  res.repl_map.assign(rt.n, -1);
  std::vector<int> all(rt.n);
  for (int i = 0; i < rt.n; i++) all[i] = i;
  append_induced(res.tree, rt, all, res.repl_map);
  for (int c : core) res.repl_core.push_back(res.repl_map[c]);
  if (u >= 0) res.tree.add_edge(res.host_map[u], res.repl_core.front());
  if (v >= 0) res.tree.add_edge(res.host_map[v], res.repl_core.back());
  return res;
}

DuplicateCut duplicate_cut(const Tree& g, int u, int s, int v, int t_pole) {
  if (u < 0 || v < 0) throw DomainError("duplicate_cut: both attachments required");
  auto sub = enclosed_subtree(g, u, s, v, t_pole);
  auto host = host_vertices(g, sub);
  DuplicateCut res;
  res.host_map.assign(g.n, -1);
  append_induced(res.tree, g, host, res.host_map);
  res.copy_u.assign(g.n, -1);
  append_induced(res.tree, g, sub, res.copy_u);
  res.copy_v.assign(g.n, -1);
  append_induced(res.tree, g, sub, res.copy_v);
  res.tree.add_edge(res.host_map[u], res.copy_u[s]);
  res.tree.add_edge(res.host_map[v], res.copy_v[t_pole]);
  return res;
}

namespace {

// assign the items of `entries` (one per listed neighbor slot) so inputs match
// and existing pins are respected; on a full assignment call f; stop when f
// returns true
bool match_items(Tree& sub, const std::vector<int>& slots,
                 std::vector<std::pair<int, Label>> items, size_t pos,
                 const std::function<bool()>& f) {
  if (pos == slots.size()) return f();
  int v = slots[pos];
  Label pinned = sub.output[v];
  std::pair<int, Label> last{-1, -1};
  for (size_t i = 0; i < items.size(); i++) {
    if (items[i].first == -2) continue;  // used
    if (items[i] == last) continue;
    if (items[i].first != sub.input[v]) continue;
    if (pinned != kUnlabeled && items[i].second != pinned) continue;
    last = items[i];
    auto saved = items[i];
    sub.output[v] = saved.second;
    items[i].first = -2;
    if (match_items(sub, slots, items, pos + 1, f)) return true;
    items[i] = saved;
    sub.output[v] = pinned;
  }
  return false;
}

struct SubExtract {
  Tree sub;
  std::vector<int> verts;      // sub index -> g index
  std::vector<int> local;      // g index -> sub index or -1
};

SubExtract extract(const Tree& g, int u, int s, int v, int t_pole) {
  SubExtract e;
  e.verts = enclosed_subtree(g, u, s, v, t_pole);
  e.local.assign(g.n, -1);
  append_induced(e.sub, g, e.verts, e.local);
  return e;
}

std::vector<Label> write_back(const Tree& g, const SubExtract& e, const Tree& solved) {
  std::vector<Label> res = g.output;
  for (size_t i = 0; i < e.verts.size(); i++) res[e.verts[i]] = solved.output[i];
  return res;
}

}  // namespace

namespace {

// single-pole case: z may hang from up to two host vertices
std::vector<Label> realize_single(ClassMachine& m, const Tree& g, int u, int v, int z,
                                  const PoleEntry& entry) {
  SubExtract e = extract(g, u, z, v, z);
  Tree& sub = e.sub;
  int lz = e.local[z];
  if (sub.output[lz] != kUnlabeled && sub.output[lz] != entry.out)
    throw DomainError("realize: root pin conflicts with the entry");
  Label saved = sub.output[lz];
  sub.output[lz] = entry.out;
  std::vector<int> slots = sub.adj[lz];
  if (slots.size() != entry.nbrs.size())
    throw DomainError("realize: neighbor count mismatch");
  auto items = entry.nbrs;
  std::sort(items.begin(), items.end());
  std::optional<std::vector<Label>> found;
  match_items(sub, slots, items, 0, [&]() {
    CompletionOptions opts;
    opts.check.assign(sub.n, 1);
    opts.check[lz] = 0;
    auto r = complete_labeling(m.problem(), sub, opts);
    if (r) found = r;
    return r.has_value();
  });
  sub.output[lz] = saved;
  if (!found) throw DomainError("realize: entry not feasible for the subtree");
  Tree solved = sub;
  solved.output = *found;
  return write_back(g, e, solved);
}

}  // namespace

std::vector<Label> realize_rooted_entry(ClassMachine& m, const Tree& g, int attach, int z,
                                        const PoleEntry& entry) {
  return realize_single(m, g, attach, -1, z, entry);
}

std::vector<Label> realize_bipolar_entry(ClassMachine& m, const Tree& g, int u, int s, int v,
                                         int t_pole, const PoleEntry& es, const PoleEntry& et) {
  if (s == t_pole) {
    if (!(es == et)) throw DomainError("realize: single pole needs matching entries");
    return realize_single(m, g, u, v, s, es);
  }
  SubExtract e = extract(g, u, s, v, t_pole);
  Tree& sub = e.sub;
  int ls = e.local[s], lt = e.local[t_pole];
  if ((sub.output[ls] != kUnlabeled && sub.output[ls] != es.out) ||
      (sub.output[lt] != kUnlabeled && sub.output[lt] != et.out))
    throw DomainError("realize: pole pin conflicts with the entry");
  Label sv_s = sub.output[ls], sv_t = sub.output[lt];
  sub.output[ls] = es.out;
  sub.output[lt] = et.out;
  std::vector<int> slots_s = sub.adj[ls], slots_t = sub.adj[lt];
  if (slots_s.size() != es.nbrs.size() || slots_t.size() != et.nbrs.size())
    throw DomainError("realize: neighbor count mismatch");
  auto items_s = es.nbrs, items_t = et.nbrs;
  std::sort(items_s.begin(), items_s.end());
  std::sort(items_t.begin(), items_t.end());
  std::optional<std::vector<Label>> found;
  match_items(sub, slots_s, items_s, 0, [&]() {
    return match_items(sub, slots_t, items_t, 0, [&]() {
      CompletionOptions opts;
      opts.check.assign(sub.n, 1);
      opts.check[ls] = 0;
      opts.check[lt] = 0;
      auto r = complete_labeling(m.problem(), sub, opts);
      if (r) found = r;
      return r.has_value();
    });
  });
  sub.output[ls] = sv_s;
  sub.output[lt] = sv_t;
  if (!found) throw DomainError("realize: entries not feasible for the subtree");
  Tree solved = sub;
  solved.output = *found;
  return write_back(g, e, solved);
}

std::vector<Label> recover_from_replace_rooted(ClassMachine& m, const Tree& g, int attach, int z,
                                               const RootedReplace& rep,
                                               const std::vector<Label>& labels) {
  PoleEntry entry;
  entry.out = labels[rep.new_root];
  int host_attach = attach >= 0 ? rep.host_map[attach] : -1;
  for (int y : rep.tree.adj[rep.new_root])
    if (y != host_attach) entry.nbrs.emplace_back(rep.tree.input[y], labels[y]);
  std::sort(entry.nbrs.begin(), entry.nbrs.end());
  auto res = realize_rooted_entry(m, g, attach, z, entry);
  for (int w = 0; w < g.n; w++)
    if (rep.host_map[w] >= 0) res[w] = labels[rep.host_map[w]];
  return res;
}

std::vector<Label> recover_from_replace_bipolar(ClassMachine& m, const Tree& g, int u, int s,
                                                int v, int t_pole, const BipolarReplace& rep,
                                                const std::vector<Label>& labels) {
  int ns = rep.repl_core.front(), nt = rep.repl_core.back();
  int hu = u >= 0 ? rep.host_map[u] : -1, hv = v >= 0 ? rep.host_map[v] : -1;
  PoleEntry es, et;
  es.out = labels[ns];
  for (int y : rep.tree.adj[ns])
    if (y != hu && y != hv) es.nbrs.emplace_back(rep.tree.input[y], labels[y]);
  std::sort(es.nbrs.begin(), es.nbrs.end());
  et.out = labels[nt];
  for (int y : rep.tree.adj[nt])
    if (y != hu && y != hv) et.nbrs.emplace_back(rep.tree.input[y], labels[y]);
  std::sort(et.nbrs.begin(), et.nbrs.end());
  auto res = realize_bipolar_entry(m, g, u, s, v, t_pole, es, et);
  for (int w = 0; w < g.n; w++)
    if (rep.host_map[w] >= 0) res[w] = labels[rep.host_map[w]];
  return res;
}

std::vector<Label> recover_from_duplicate_cut(const Tree& g, int u, int s, int v, int t_pole,
                                              int mid_a, int mid_b, const DuplicateCut& dc,
                                              const std::vector<Label>& labels) {
  auto sub = enclosed_subtree(g, u, s, v, t_pole);
  // split at the middle edge; the s side takes u's copy
  std::vector<char> in_sub(g.n, 0);
  for (int x : sub) in_sub[x] = 1;
  if (!in_sub[mid_a] || !in_sub[mid_b] || !g.has_edge(mid_a, mid_b))
    throw DomainError("recover: bad middle edge");
  std::vector<char> s_side(g.n, 0);
  std::vector<int> stack{s};
  s_side[s] = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : g.adj[x]) {
      if ((x == mid_a && y == mid_b) || (x == mid_b && y == mid_a)) continue;
      if (in_sub[y] && !s_side[y]) {
        s_side[y] = 1;
        stack.push_back(y);
      }
    }
  }
  if (labels[dc.copy_u[mid_a]] != labels[dc.copy_v[mid_a]] ||
      labels[dc.copy_u[mid_b]] != labels[dc.copy_v[mid_b]])
    throw DomainError("recover: middle labels disagree between the copies");
  std::vector<Label> res = g.output;
  for (int w = 0; w < g.n; w++) {
    if (dc.host_map[w] >= 0)
      res[w] = labels[dc.host_map[w]];
    else if (in_sub[w])
      res[w] = labels[s_side[w] ? dc.copy_u[w] : dc.copy_v[w]];
  }
  return res;
}

}  // namespace lct
