#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lct {

int Tree::add_vertex(int input_label) {
  adj.emplace_back();
  input.push_back(input_label);
  output.push_back(kUnlabeled);
  return n++;
}

void Tree::add_edge(int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n || v >= n) throw DomainError("bad edge endpoints");
  if (has_edge(u, v)) throw DomainError("duplicate edge");
  adj[u].push_back(v);
  adj[v].push_back(u);
}

bool Tree::has_edge(int u, int v) const {
  return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
}

bool Tree::is_forest() const {
  long long m = 0;
  for (int v = 0; v < n; v++) m += degree(v);
  m /= 2;
  // acyclic <=> every component has (vertices - 1) edges <=> m == n - #components
  std::vector<char> seen(n, 0);
  int comps = 0;
  for (int s = 0; s < n; s++) {
    if (seen[s]) continue;
    comps++;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int u : adj[v])
        if (!seen[u]) {
          seen[u] = 1;
          q.push_back(u);
        }
    }
  }
  return m == n - comps;
}

bool Tree::is_connected_tree() const {
  if (n == 0) return false;
  if (!is_forest()) return false;
  return static_cast<int>(ball(0, n).size()) == n;
}

bool Tree::completely_labeled() const {
  for (int v = 0; v < n; v++)
    if (output[v] == kUnlabeled) return false;
  return true;
}

std::vector<int> Tree::ball(int center, int radius) const {
  std::vector<int> dist(n, -1), out;
  std::deque<int> q{center};
  dist[center] = 0;
  out.push_back(center);
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (dist[v] == radius) continue;
    for (int u : adj[v])
      if (dist[u] < 0) {
        dist[u] = dist[v] + 1;
        out.push_back(u);
        q.push_back(u);
      }
  }
  std::sort(out.begin() + 1, out.end());
  return out;
}

std::vector<int> Tree::distances_from(int v) const {
  std::vector<int> dist(n, -1);
  std::deque<int> q{v};
  dist[v] = 0;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int u : adj[x])
      if (dist[u] < 0) {
        dist[u] = dist[x] + 1;
        q.push_back(u);
      }
  }
  return dist;
}

void ConfigR1::normalize() { std::sort(nbrs.begin(), nbrs.end()); }

std::string ConfigR1::key() const {
  std::string s = std::to_string(center_in) + "." + std::to_string(center_out) + "|";
  for (auto& [i, o] : nbrs) s += std::to_string(i) + "." + std::to_string(o) + ",";
  return s;
}

int LclProblem::input_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(inputs.size()); i++)
    if (inputs[i] == name) return i;
  throw DomainError("unknown input label: " + name);
}

int LclProblem::output_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(outputs.size()); i++)
    if (outputs[i] == name) return i;
  throw DomainError("unknown output label: " + name);
}

bool LclProblem::allowed_r1(const ConfigR1& c) const {
  if (static_cast<int>(c.nbrs.size()) > delta) return false;
  if (allow_all) return true;
  if (pred_r1) return pred_r1(c);
  return table_r1.count(c.key()) > 0;
}

std::string canonical_serial(const Tree& t, int v, int parent, int depth) {
  std::string s = "(" + std::to_string(t.input[v]) + "." + std::to_string(t.output[v]);
  if (depth != 0) {
    std::vector<std::string> kids;
    for (int u : t.adj[v])
      if (u != parent) kids.push_back(canonical_serial(t, u, v, depth < 0 ? -1 : depth - 1));
    std::sort(kids.begin(), kids.end());
    for (auto& k : kids) s += k;
  }
  return s + ")";
}

std::string canonical_ball(const Tree& t, int center, int radius) {
  return canonical_serial(t, center, -1, radius);
}

std::string canonical_unrooted(const Tree& t) {
  std::string best;
  for (int v = 0; v < t.n; v++) {
    std::string s = canonical_serial(t, v);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

static ConfigR1 config_at(const Tree& t, int v) {
  ConfigR1 c;
  c.center_in = t.input[v];
  c.center_out = t.output[v];
  for (int u : t.adj[v]) c.nbrs.emplace_back(t.input[u], t.output[u]);
  c.normalize();
  return c;
}

bool is_locally_consistent(const LclProblem& p, const Tree& t, int v) {
  for (int u : t.ball(v, p.radius))
    if (t.output[u] == kUnlabeled) throw DomainError("incomplete neighborhood");
  if (t.degree(v) > p.delta) throw DomainError("degree exceeds bound");
  if (p.allow_all) return true;
  if (p.radius == 1) return p.allowed_r1(config_at(t, v));
  return p.table_ball.count(canonical_ball(t, v, p.radius)) > 0;
}

bool is_legal(const LclProblem& p, const Tree& t) {
  if (!t.is_forest()) throw DomainError("input is not acyclic");
  if (!t.completely_labeled()) throw DomainError("incomplete labeling");
  for (int v = 0; v < t.n; v++)
    if (!is_locally_consistent(p, t, v)) return false;
  return true;
}

namespace {

bool check_enabled(const CompletionOptions& o, int v) {
  return o.check.empty() || o.check[v] != 0;
}

// Radius-1 exact completion: per-component rooted DP over states
// (output of v, output of parent), then lexicographically-least reconstruction.
struct DpSolver {
  const LclProblem& p;
  const Tree& t;
  const CompletionOptions& opts;
  int O;
  // feas[v][ov * (O+1) + op], op == O meaning "no parent"
  std::vector<std::vector<char>> feas;
  std::vector<int> parent, order;
  long long steps = 0;

  DpSolver(const LclProblem& p_, const Tree& t_, const CompletionOptions& o_)
      : p(p_), t(t_), opts(o_), O(static_cast<int>(p_.outputs.size())), feas(t_.n),
        parent(t_.n, -2) {}

  void bump() {
    if (++steps > 400'000'000LL) throw BudgetError("completion search budget exceeded");
  }

  bool label_ok(int v, Label o) const {
    return t.output[v] == kUnlabeled || t.output[v] == o;
  }

  // children of v with outputs chosen so far in `picked`; returns true if the
  // remaining children can be assigned outputs completing a valid configuration.
  bool combo(int v, Label ov, Label op, size_t ci, std::vector<std::pair<int, Label>>& picked) {
    const_cast<DpSolver*>(this)->bump();
    std::vector<int> kids;
    for (int u : t.adj[v])
      if (u != parent[v]) kids.push_back(u);
    if (ci == kids.size()) {
      if (!check_enabled(opts, v)) return true;
      ConfigR1 c;
      c.center_in = t.input[v];
      c.center_out = ov;
      c.nbrs = picked;
      if (parent[v] >= 0) c.nbrs.emplace_back(t.input[parent[v]], op);
      c.normalize();
      return p.allowed_r1(c);
    }
    int u = kids[ci];
    for (Label o = 0; o < O; o++) {
      if (!feas[u][o * (O + 1) + ov]) continue;
      picked.emplace_back(t.input[u], o);
      bool ok = combo(v, ov, op, ci + 1, picked);
      picked.pop_back();
      if (ok) return true;
    }
    return false;
  }

  void compute(int root) {
    // iterative post-order
    order.clear();
    std::vector<int> stk{root};
    parent[root] = -1;
    while (!stk.empty()) {
      int v = stk.back();
      stk.pop_back();
      order.push_back(v);
      for (int u : t.adj[v])
        if (u != parent[v]) {
          parent[u] = v;
          stk.push_back(u);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      feas[v].assign(static_cast<size_t>(O) * (O + 1), 0);
      int np = parent[v] >= 0 ? O : 0;  // root only needs the no-parent column
      for (Label ov = 0; ov < O; ov++) {
        if (!label_ok(v, ov)) continue;
        for (Label op = (parent[v] >= 0 ? 0 : O); op <= (parent[v] >= 0 ? O - 1 : O); op++) {
          std::vector<std::pair<int, Label>> picked;
          if (combo(v, ov, op, 0, picked)) feas[v][ov * (O + 1) + op] = 1;
        }
      }
      (void)np;
    }
  }

  // assumes feasibility; writes labels for the subtree of v
  void reconstruct(int v, Label ov, Label op, std::vector<Label>& out) {
    out[v] = ov;
    std::vector<int> kids;
    for (int u : t.adj[v])
      if (u != parent[v]) kids.push_back(u);
    std::vector<Label> choice(kids.size(), kUnlabeled);
    std::function<bool(size_t, std::vector<std::pair<int, Label>>&)> pick =
        [&](size_t ci, std::vector<std::pair<int, Label>>& picked) -> bool {
      bump();
      if (ci == kids.size()) {
        if (!check_enabled(opts, v)) return true;
        ConfigR1 c;
        c.center_in = t.input[v];
        c.center_out = ov;
        c.nbrs = picked;
        if (parent[v] >= 0) c.nbrs.emplace_back(t.input[parent[v]], op);
        c.normalize();
        return p.allowed_r1(c);
      }
      int u = kids[ci];
      for (Label o = 0; o < O; o++) {
        if (!feas[u][o * (O + 1) + ov]) continue;
        picked.emplace_back(t.input[u], o);
        choice[ci] = o;
        if (pick(ci + 1, picked)) {
          picked.pop_back();
          return true;
        }
        picked.pop_back();
      }
      return false;
    };
    std::vector<std::pair<int, Label>> picked;
    if (!pick(0, picked)) throw DomainError("internal: reconstruction failed");
    for (size_t i = 0; i < kids.size(); i++) reconstruct(kids[i], choice[i], ov, out);
  }
};

std::optional<std::vector<Label>> complete_r1(const LclProblem& p, const Tree& t,
                                              const CompletionOptions& opts) {
  int O = static_cast<int>(p.outputs.size());
  std::vector<Label> result(t.n, kUnlabeled);
  std::vector<char> seen(t.n, 0);
  for (int s = 0; s < t.n; s++) {
    if (seen[s]) continue;
    for (int v : t.ball(s, t.n)) seen[v] = 1;
    DpSolver dp(p, t, opts);
    dp.compute(s);
    Label pick = kUnlabeled;
    for (Label o = 0; o < O; o++)
      if (dp.feas[s][o * (O + 1) + O]) {
        pick = o;
        break;
      }
    if (pick == kUnlabeled) return std::nullopt;
    dp.reconstruct(s, pick, kUnlabeled, result);
  }
  return result;
}

// General radius: backtracking in vertex order, checking a vertex's ball as soon
// as all of it is assigned.
std::optional<std::vector<Label>> complete_general(const LclProblem& p, const Tree& t,
                                                   const CompletionOptions& opts) {
  int O = static_cast<int>(p.outputs.size());
  std::vector<std::vector<int>> check_after(t.n);
  for (int u = 0; u < t.n; u++) {
    if (!check_enabled(opts, u)) continue;
    int last = 0;
    for (int x : t.ball(u, p.radius)) last = std::max(last, x);
    check_after[last].push_back(u);
  }
  Tree work = t;
  long long steps = 0;
  std::function<bool(int)> go = [&](int v) -> bool {
    if (++steps > 200'000'000LL) throw BudgetError("completion search budget exceeded");
    if (v == t.n) return true;
    Label lo = 0, hi = O - 1;
    if (t.output[v] != kUnlabeled) lo = hi = t.output[v];
    for (Label o = lo; o <= hi; o++) {
      work.output[v] = o;
      bool ok = true;
      for (int u : check_after[v])
        if (!is_locally_consistent(p, work, u)) {
          ok = false;
          break;
        }
      if (ok && go(v + 1)) return true;
    }
    work.output[v] = kUnlabeled;
    return false;
  };
  if (!go(0)) return std::nullopt;
  return work.output;
}

}  // namespace

std::optional<std::vector<Label>> complete_labeling(const LclProblem& p, const Tree& t,
                                                    const CompletionOptions& opts) {
  if (!t.is_forest()) throw DomainError("input is not acyclic");
  for (int v = 0; v < t.n; v++)
    if (t.degree(v) > p.delta) throw DomainError("degree exceeds bound");
  if (p.outputs.empty()) throw DomainError("empty output alphabet");
  if (p.allow_all) {
    std::vector<Label> out = t.output;
    for (auto& o : out)
      if (o == kUnlabeled) o = 0;
    return out;
  }
  if (p.radius == 1) return complete_r1(p, t, opts);
  return complete_general(p, t, opts);
}

std::optional<std::vector<Label>> complete_labeling_bruteforce(const LclProblem& p, const Tree& t,
                                                               const CompletionOptions& opts) {
  int O = static_cast<int>(p.outputs.size());
  Tree work = t;
  std::function<bool(int)> go = [&](int v) -> bool {
    if (v == t.n) {
      for (int u = 0; u < t.n; u++)
        if (check_enabled(opts, u) && !is_locally_consistent(p, work, u)) return false;
      return true;
    }
    Label lo = 0, hi = O - 1;
    if (t.output[v] != kUnlabeled) lo = hi = t.output[v];
    for (Label o = lo; o <= hi; o++) {
      work.output[v] = o;
      if (go(v + 1)) return true;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return work.output;
}

OrientationEncoding encode_orientation(const Tree& t, const std::vector<OrientedEdge>& edges,
                                       int e_input, Label out0, Label out1) {
  if (!t.is_forest()) throw DomainError("input is not acyclic");
  OrientationEncoding enc;
  enc.tree = t;
  enc.orig_vertex.resize(t.n);
  enc.midpoint_of.assign(t.n, -1);
  for (int v = 0; v < t.n; v++) enc.orig_vertex[v] = v;
  int idx = 0;
  for (const auto& e : edges) {
    if (!enc.tree.has_edge(e.u, e.v)) throw DomainError("oriented edge not present in tree");
    // drop {u, v}
    auto& au = enc.tree.adj[e.u];
    auto& av = enc.tree.adj[e.v];
    au.erase(std::find(au.begin(), au.end(), e.v));
    av.erase(std::find(av.begin(), av.end(), e.u));
    int xu = enc.tree.add_vertex(e_input);
    int xv = enc.tree.add_vertex(e_input);
    enc.tree.output[xu] = out0;
    enc.tree.output[xv] = out1;
    enc.orig_vertex.push_back(-1);
    enc.orig_vertex.push_back(-1);
    enc.midpoint_of.push_back(idx);
    enc.midpoint_of.push_back(idx);
    enc.tree.add_edge(e.u, xu);
    enc.tree.add_edge(xu, xv);
    enc.tree.add_edge(xv, e.v);
    idx++;
  }
  return enc;
}

std::vector<OrientedEdge> decode_orientation(const OrientationEncoding& enc, Label out1) {
  // midpoints appear in pairs (xu, xv) appended in edge order
  std::vector<std::pair<int, int>> mids;  // (edge index, vertex)
  for (int v = 0; v < enc.tree.n; v++)
    if (enc.midpoint_of[v] >= 0) mids.emplace_back(enc.midpoint_of[v], v);
  std::sort(mids.begin(), mids.end());
  std::vector<OrientedEdge> out;
  for (size_t i = 0; i + 1 < mids.size(); i += 2) {
    int a = mids[i].second, b = mids[i + 1].second;
    int head_mid = enc.tree.output[a] == out1 ? a : b;
    int tail_mid = head_mid == a ? b : a;
    auto endpoint = [&](int mid) {
      for (int u : enc.tree.adj[mid])
        if (enc.orig_vertex[u] >= 0) return enc.orig_vertex[u];
      throw DomainError("midpoint without original endpoint");
    };
    out.push_back({endpoint(tail_mid), endpoint(head_mid)});
  }
  return out;
}

namespace {
// little-endian base-1e9 bignum; enough for an informational bound
std::string big_pow(unsigned long long base, unsigned long long exp) {
  std::vector<uint64_t> d{1};
  const uint64_t M = 1'000'000'000ULL;
  for (unsigned long long e = 0; e < exp; e++) {
    uint64_t carry = 0;
    for (auto& x : d) {
      uint64_t v = x * base + carry;
      x = v % M;
      carry = v / M;
    }
    while (carry) {
      d.push_back(carry % M);
      carry /= M;
    }
  }
  std::string s = std::to_string(d.back());
  for (auto it = d.rbegin() + 1; it != d.rend(); ++it) {
    std::string part = std::to_string(*it);
    s += std::string(9 - part.size(), '0') + part;
  }
  return s;
}
}  // namespace

std::string description_length_bound(const LclProblem& p) {
  unsigned long long base = 1 + static_cast<unsigned long long>(p.inputs.size()) * p.outputs.size();
  long double exp_ld = 1.0L + std::pow(static_cast<long double>(p.delta), p.radius);
  if (exp_ld > 1e6L) return "overflow";
  unsigned long long exp = 1;
  unsigned long long dr = 1;
  for (int i = 0; i < p.radius; i++) dr *= p.delta;
  exp = 1 + dr;
  return big_pow(base, exp);
}

LclProblem make_trivial_problem(int delta) {
  LclProblem p;
  p.radius = 1;
  p.delta = delta;
  p.inputs = {"-"};
  p.outputs = {"a"};
  p.allow_all = true;
  return p;
}

LclProblem make_coloring_problem(int colors, int delta) {
  LclProblem p;
  p.radius = 1;
  p.delta = delta;
  p.inputs = {"-"};
  static const char* names[] = {"c0", "c1", "c2", "c3", "c4", "c5"};
  if (colors < 1 || colors > 6) throw DomainError("unsupported color count");
  for (int i = 0; i < colors; i++) p.outputs.push_back(names[i]);
  p.pred_r1 = [](const ConfigR1& c) {
    for (auto& [in, out] : c.nbrs)
      if (out == c.center_out) return false;
    return true;
  };
  materialize_table_r1(p);
  return p;
}

void materialize_table_r1(LclProblem& p) {
  if (!p.pred_r1 || p.radius != 1) return;
  std::vector<std::pair<int, Label>> pairs;
  for (int i = 0; i < static_cast<int>(p.inputs.size()); i++)
    for (Label o = 0; o < static_cast<int>(p.outputs.size()); o++) pairs.emplace_back(i, o);
  p.table_r1.clear();
  ConfigR1 c;
  std::function<void(size_t)> rec = [&](size_t from) {
    if (p.pred_r1(c)) p.table_r1.insert(c.key());
    if (static_cast<int>(c.nbrs.size()) == p.delta) return;
    for (size_t i = from; i < pairs.size(); i++) {
      c.nbrs.push_back(pairs[i]);
      rec(i);
      c.nbrs.pop_back();
    }
  };
  for (int ci = 0; ci < static_cast<int>(p.inputs.size()); ci++)
    for (Label co = 0; co < static_cast<int>(p.outputs.size()); co++) {
      c.center_in = ci;
      c.center_out = co;
      c.nbrs.clear();
      rec(0);
    }
}

}  // namespace lct
