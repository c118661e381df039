#include "localsim.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace lct {

std::vector<long long> assign_ids(const Tree& t, uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (t.n == 1) return {0};
  std::vector<long long> ids;
  std::unordered_set<long long> used;
  const long long space = 1LL << 20;
  while (static_cast<int>(ids.size()) < t.n) {
    long long cand = static_cast<long long>(rng() % space);
    if (used.insert(cand).second) ids.push_back(cand);
  }
  return ids;
}

View materialize_view(const Network& net, int v, int t, const std::vector<long long>* state) {
  View view;
  view.n_claimed = net.n_claimed;
  const Tree& g = net.tree;
  std::vector<int> dist(g.n, -1), order;
  std::deque<int> q{v};
  dist[v] = 0;
  order.push_back(v);
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    if (dist[x] == t) continue;
    std::vector<int> nb = g.adj[x];
    std::sort(nb.begin(), nb.end());
    for (int u : nb)
      if (dist[u] < 0) {
        dist[u] = dist[x] + 1;
        order.push_back(u);
        q.push_back(u);
      }
  }
  std::vector<int> local(g.n, -1);
  for (size_t i = 0; i < order.size(); i++) local[order[i]] = static_cast<int>(i);
  for (int x : order) {
    int lx = view.ball.add_vertex(g.input[x]);
    view.ball.output[lx] = g.output[x];
    view.ids.push_back(net.id[x]);
    if (state) view.state.push_back((*state)[x]);
  }
  for (int x : order)
    for (int u : g.adj[x])
      if (local[u] >= 0 && local[u] > local[x]) view.ball.add_edge(local[x], local[u]);
  view.center = 0;
  return view;
}

std::vector<long long> run_alg(const Network& net, int t,
                               const std::function<long long(const View&)>& f,
                               long long* rounds_used) {
  if (t < 0) throw DomainError("negative round count");
  std::vector<long long> out(net.tree.n);
  for (int v = 0; v < net.tree.n; v++) out[v] = f(materialize_view(net, v, t));
  if (rounds_used) *rounds_used += t;
  return out;
}

std::vector<long long> run_alg_parallel(const Network& net, int t,
                                        const std::function<long long(const View&)>& f,
                                        long long* rounds_used) {
  if (t < 0) throw DomainError("negative round count");
  std::vector<long long> out(net.tree.n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
  for (int v = 0; v < net.tree.n; v++) out[v] = f(materialize_view(net, v, t));
  if (rounds_used) *rounds_used += t;
  return out;
}

namespace {
// canonical DFS order: children visited by ascending canonical serialization
void canonical_order(const Tree& t, int v, int parent, std::vector<int>& order) {
  order.push_back(v);
  std::vector<std::pair<std::string, int>> kids;
  for (int u : t.adj[v])
    if (u != parent) kids.emplace_back(canonical_serial(t, u, v), u);
  std::sort(kids.begin(), kids.end());
  for (auto& [s, u] : kids) canonical_order(t, u, v, order);
}
}  // namespace

std::vector<long long> assign_partial_ids(const Tree& ball, int center, long long n_virtual) {
  if (n_virtual < ball.n) throw DomainError("n_virtual smaller than the ball");
  std::vector<int> order;
  canonical_order(ball, center, -1, order);
  std::vector<long long> ids(ball.n);
  for (size_t i = 0; i < order.size(); i++) ids[order[i]] = static_cast<long long>(i);
  return ids;
}

int log_star(long long n) {
  int r = 0;
  long double x = static_cast<long double>(n);
  while (x > 1.0L) {
    x = std::log2(x);
    r++;
  }
  return r;
}

std::pair<Decomposition, long long> simulate_decomposition(const Network& net, int gamma,
                                                           int ell) {
  // Each phase below is a function of a bounded-radius neighborhood (radius 1
  // for a rake, radius ell for a compress); the views are charged to the round
  // count but evaluated in place instead of being materialized per vertex.
  const Tree& g = net.tree;
  long long rounds = 0;
  std::vector<char> alive(g.n, 1);
  long long alive_count = g.n;
  std::vector<int> removed_iter(g.n, -1);
  std::vector<char> by_compress(g.n, 0);

  auto alive_deg = [&](int v) {
    int d = 0;
    for (int u : g.adj[v]) d += alive[u];
    return d;
  };

  int iter = 1;
  while (alive_count > 0) {
    for (int gstep = 0; gstep < gamma && alive_count > 0; gstep++) {
      rounds += 1;
      std::vector<int> removed;
      for (int v = 0; v < g.n; v++) {
        if (!alive[v]) continue;
        int d = alive_deg(v);
        bool rm = false;
        if (d == 0) {
          rm = true;
        } else if (d == 1) {
          int u = -1;
          for (int x : g.adj[v])
            if (alive[x]) u = x;
          int du = alive_deg(u);
          rm = du > 1 || (du == 1 && net.id[v] > net.id[u]);
        }
        if (rm) removed.push_back(v);
      }
      for (int v : removed) {
        alive[v] = 0;
        removed_iter[v] = iter;
        alive_count--;
      }
    }
    // compress: each vertex walks its alive degree-2 run up to distance ell
    rounds += ell;
    std::vector<int> removed;
    for (int v = 0; v < g.n; v++) {
      if (!alive[v] || alive_deg(v) != 2) continue;
      int count = 1;
      for (int first : g.adj[v]) {
        if (!alive[first] || alive_deg(first) != 2) continue;
        int prev = v, cur = first;
        while (count < ell) {
          count++;
          int nxt = -1;
          for (int u : g.adj[cur])
            if (u != prev && alive[u] && alive_deg(u) == 2) nxt = u;
          if (nxt < 0) break;
          prev = cur;
          cur = nxt;
        }
        if (count >= ell) break;
      }
      if (count >= ell) removed.push_back(v);
    }
    for (int v : removed) {
      alive[v] = 0;
      removed_iter[v] = iter;
      by_compress[v] = 1;
      alive_count--;
    }
    iter++;
  }

  // post-processing: same promotion rule as the sequential code; charged as a
  // fixed ruling-set style cost
  rounds += 10LL * log_star(std::max<long long>(2, net.n_claimed));

  Decomposition d;
  d.gamma = gamma;
  d.ell = ell;
  d.layer.assign(g.n, 0);
  for (int v = 0; v < g.n; v++)
    if (!by_compress[v]) d.layer[v] = Decomposition::tag_R(removed_iter[v]);
  int max_iter = 0;
  for (int v = 0; v < g.n; v++) max_iter = std::max(max_iter, removed_iter[v]);
  for (int i = 1; i <= max_iter; i++) {
    std::vector<char> keep(g.n, 0);
    for (int v = 0; v < g.n; v++)
      if (by_compress[v] && removed_iter[v] == i) keep[v] = 1;
    for (auto& comp : induced_components(g, keep)) {
      // rebuild the path order, oriented from its smaller-ID endpoint
      std::vector<int> ends;
      for (int v : comp) {
        int dc = 0;
        for (int u : g.adj[v]) dc += keep[u];
        if (dc <= 1) ends.push_back(v);
      }
      int start = comp[0];
      if (ends.size() == 2)
        start = net.id[ends[0]] < net.id[ends[1]] ? ends[0] : ends[1];
      else if (ends.size() == 1)
        start = ends[0];
      std::vector<int> run{start};
      int prev = -1, cur = start;
      for (;;) {
        int nxt = -1;
        for (int u : g.adj[cur])
          if (keep[u] && u != prev) nxt = u;
        if (nxt < 0) break;
        prev = cur;
        cur = nxt;
        run.push_back(cur);
      }
      auto cuts = path_independent_set(static_cast<int>(run.size()), ell);
      std::vector<char> is_cut(run.size(), 0);
      for (int c : cuts) is_cut[c] = 1;
      for (size_t j = 0; j < run.size(); j++)
        d.layer[run[j]] = is_cut[j] ? Decomposition::tag_R(i + 1) : Decomposition::tag_C(i);
    }
  }
  d.L = 0;
  for (int v = 0; v < g.n; v++) d.L = std::max(d.L, Decomposition::tag_index(d.layer[v]));
  return {d, rounds};
}

}  // namespace lct
