#include "decomp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace lct {

namespace {
int alive_degree(const Tree& t, const std::vector<char>& alive, int v) {
  int d = 0;
  for (int u : t.adj[v]) d += alive[u];
  return d;
}
}  // namespace

std::vector<int> rake_step(const Tree& t, const std::vector<char>& alive,
                           const std::vector<long long>& ids) {
  std::vector<int> removed;
  for (int v = 0; v < t.n; v++) {
    if (!alive[v]) continue;
    int d = alive_degree(t, alive, v);
    if (d == 0) {
      removed.push_back(v);
    } else if (d == 1) {
      int u = -1;
      for (int w : t.adj[v])
        if (alive[w]) u = w;
      int du = alive_degree(t, alive, u);
      if (du > 1 || (du == 1 && ids[v] > ids[u])) removed.push_back(v);
    }
  }
  return removed;
}

std::vector<std::vector<int>> compress_step(const Tree& t, const std::vector<char>& alive,
                                            int ell, const std::vector<long long>& ids) {
  std::vector<char> deg2(t.n, 0);
  for (int v = 0; v < t.n; v++)
    if (alive[v] && alive_degree(t, alive, v) == 2) deg2[v] = 1;
  std::vector<char> seen(t.n, 0);
  std::vector<std::vector<int>> runs;
  for (int v = 0; v < t.n; v++) {
    if (!deg2[v] || seen[v]) continue;
    // walk to one end of the maximal degree-2 run containing v
    int end = v, prev = -1;
    for (;;) {
      int next = -1;
      for (int u : t.adj[end])
        if (deg2[u] && u != prev) next = u;
      if (next == -1 || next == v) break;  // (next == v cannot occur in a tree)
      prev = end;
      end = next;
    }
    std::vector<int> run{end};
    seen[end] = 1;
    prev = -1;
    int cur = end;
    for (;;) {
      int next = -1;
      for (int u : t.adj[cur])
        if (deg2[u] && u != prev) next = u;
      if (next == -1) break;
      prev = cur;
      cur = next;
      run.push_back(cur);
      seen[cur] = 1;
    }
    if (static_cast<int>(run.size()) < ell) continue;
    if (ids[run.back()] < ids[run.front()]) std::reverse(run.begin(), run.end());
    runs.push_back(std::move(run));
  }
  return runs;
}

std::vector<int> path_independent_set(int m, int ell) {
  std::vector<int> cuts;
  if (m < ell) return cuts;
  int start = 0;
  while (m - start > 2 * ell) {
    cuts.push_back(start + ell);
    start += ell + 1;
  }
  return cuts;
}

std::vector<std::vector<int>> induced_components(const Tree& t, const std::vector<char>& keep) {
  std::vector<char> seen(t.n, 0);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < t.n; s++) {
    if (!keep[s] || seen[s]) continue;
    std::vector<int> comp;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      comp.push_back(v);
      for (int u : t.adj[v])
        if (keep[u] && !seen[u]) {
          seen[u] = 1;
          q.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

Decomposition decompose(const Tree& t, int gamma, int ell, const std::vector<long long>& ids,
                        DecompositionStats* stats) {
  if (gamma < 1 || ell < 1) throw DomainError("gamma and ell must be positive");
  if (!t.is_forest()) throw DomainError("input is not acyclic");
  std::vector<char> alive(t.n, 1);
  long long alive_count = t.n;
  std::vector<int> removed_iter(t.n, -1);
  std::vector<char> removed_by_compress(t.n, 0);
  std::vector<std::vector<std::vector<int>>> runs_per_iter;  // C_i path components

  // component labeling at iteration start, used for shrinkage diagnostics
  auto comp_sizes = [&]() {
    std::vector<long long> comp_of(t.n, -1);
    std::vector<long long> sizes;
    for (int s = 0; s < t.n; s++) {
      if (!alive[s] || comp_of[s] >= 0) continue;
      long long c = static_cast<long long>(sizes.size());
      long long sz = 0;
      std::deque<int> q{s};
      comp_of[s] = c;
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        sz++;
        for (int u : t.adj[v])
          if (alive[u] && comp_of[u] < 0) {
            comp_of[u] = c;
            q.push_back(u);
          }
      }
      sizes.push_back(sz);
    }
    return std::make_pair(comp_of, sizes);
  };

  std::vector<long long> prev_comp_of;
  std::vector<long long> prev_sizes;
  int last_removed = -1;
  int iter = 1;
  while (alive_count > 0) {
    auto [comp_of, sizes] = comp_sizes();
    if (stats) {
      if (!prev_sizes.empty()) {
        std::vector<std::pair<long long, long long>> pairs;
        // each current component maps into exactly one previous component
        std::vector<char> done(sizes.size(), 0);
        for (int v = 0; v < t.n; v++)
          if (alive[v] && !done[comp_of[v]]) {
            done[comp_of[v]] = 1;
            pairs.emplace_back(prev_sizes[prev_comp_of[v]], sizes[comp_of[v]]);
          }
        stats->shrink_pairs.push_back(std::move(pairs));
      }
      IterationStats is;
      is.alive_before = alive_count;
      stats->iters.push_back(is);
    }
    for (int g = 0; g < gamma && alive_count > 0; g++) {
      auto rem = rake_step(t, alive, ids);
      for (int v : rem) {
        alive[v] = 0;
        removed_iter[v] = iter;
        last_removed = v;
      }
      alive_count -= static_cast<long long>(rem.size());
    }
    if (stats && alive_count > 0) {
      long long A = 0, B = 0;
      for (int v = 0; v < t.n; v++) {
        if (!alive[v]) continue;
        if (alive_degree(t, alive, v) != 2) B++;
      }
      // A is filled after the compress below
      stats->iters.back().B = B;
    }
    auto runs = compress_step(t, alive, ell, ids);
    for (auto& run : runs)
      for (int v : run) {
        alive[v] = 0;
        removed_iter[v] = iter;
        removed_by_compress[v] = 1;
        last_removed = v;
        alive_count--;
      }
    if (stats && !stats->iters.empty()) {
      long long A = 0;
      for (int v = 0; v < t.n; v++)
        if (alive[v] && alive_degree(t, alive, v) == 2) A++;
      stats->iters.back().A = A;
      stats->iters.back().S = stats->iters.back().alive_before;  // refined below for forests
    }
    runs_per_iter.push_back(std::move(runs));
    prev_comp_of = std::move(comp_of);
    prev_sizes = std::move(sizes);
    iter++;
  }
  (void)last_removed;

  Decomposition d;
  d.gamma = gamma;
  d.ell = ell;
  d.layer.assign(t.n, 0);
  for (int v = 0; v < t.n; v++)
    if (!removed_by_compress[v]) d.layer[v] = Decomposition::tag_R(removed_iter[v]);
  for (size_t i = 0; i < runs_per_iter.size(); i++) {
    int it_idx = static_cast<int>(i) + 1;
    for (const auto& run : runs_per_iter[i]) {
      auto cuts = path_independent_set(static_cast<int>(run.size()), ell);
      std::vector<char> is_cut(run.size(), 0);
      for (int c : cuts) is_cut[c] = 1;
      for (size_t j = 0; j < run.size(); j++)
        d.layer[run[j]] = is_cut[j] ? Decomposition::tag_R(it_idx + 1)
                                    : Decomposition::tag_C(it_idx);
    }
  }
  d.L = 0;
  for (int v = 0; v < t.n; v++)
    d.L = std::max(d.L, Decomposition::tag_index(d.layer[v]));
  return d;
}

std::vector<std::string> verify_decomposition(const Tree& t, const Decomposition& d) {
  std::vector<std::string> out;
  auto note = [&](const std::string& s) { out.push_back(s); };
  if (static_cast<int>(d.layer.size()) != t.n) {
    note("layer map size mismatch");
    return out;
  }
  int max_tag = 0;
  for (int v = 0; v < t.n; v++) max_tag = std::max(max_tag, d.layer[v]);
  if (t.n > 0 && Decomposition::tag_is_R(max_tag) == false)
    note("top layer is a C layer");
  if (t.n > 0 && Decomposition::tag_index(max_tag) != d.L) note("recorded L mismatch");

  for (int i = 1; i <= d.L; i++) {
    // R components
    std::vector<char> keep(t.n, 0);
    for (int v = 0; v < t.n; v++)
      if (d.layer[v] == Decomposition::tag_R(i)) keep[v] = 1;
    for (const auto& comp : induced_components(t, keep)) {
      // forced root: a vertex with a neighbor in a strictly higher layer
      std::vector<int> candidates;
      for (int v : comp) {
        int up = 0;
        for (int u : t.adj[v])
          if (d.layer[u] > Decomposition::tag_R(i)) up++;
        if (up > 1) note("R_" + std::to_string(i) + " vertex " + std::to_string(v) +
                         " has several neighbors above");
        if (up >= 1) candidates.push_back(v);
      }
      if (candidates.size() > 1) {
        note("R_" + std::to_string(i) + " component with multiple boundary vertices");
        continue;
      }
      // height <= gamma-1 from the root (or from the best root if unconstrained)
      // BFS within the component; returns the farthest vertex and its distance
      auto bfs_far = [&](int z) {
        std::vector<int> dist(t.n, -1);
        std::deque<int> q{z};
        dist[z] = 0;
        int ecc = 0, far = z;
        while (!q.empty()) {
          int v = q.front();
          q.pop_front();
          if (dist[v] > ecc) {
            ecc = dist[v];
            far = v;
          }
          for (int u : t.adj[v])
            if (keep[u] && dist[u] < 0) {
              dist[u] = dist[v] + 1;
              q.push_back(u);
            }
        }
        return std::pair<int, int>{far, ecc};
      };
      int height;
      if (candidates.size() == 1) {
        height = bfs_far(candidates[0]).second;
      } else {
        // unconstrained root: the best root is a center, at ceil(diameter/2)
        auto [u, e1] = bfs_far(comp[0]);
        height = (bfs_far(u).second + 1) / 2;
      }
      if (height > d.gamma - 1)
        note("R_" + std::to_string(i) + " component height " + std::to_string(height) +
             " exceeds gamma-1");
    }
    // C components
    if (i > d.L - 1) continue;
    std::vector<char> keepc(t.n, 0);
    for (int v = 0; v < t.n; v++)
      if (d.layer[v] == Decomposition::tag_C(i)) keepc[v] = 1;
    for (const auto& comp : induced_components(t, keepc)) {
      int x = static_cast<int>(comp.size());
      bool is_path = true;
      int ends = 0;
      for (int v : comp) {
        int dc = 0;
        for (int u : t.adj[v]) dc += keepc[u];
        if (dc > 2) is_path = false;
        if (dc <= 1) ends++;
      }
      if (!is_path) {
        note("C_" + std::to_string(i) + " component is not a path");
        continue;
      }
      if (x < d.ell || x > 2 * d.ell)
        note("C_" + std::to_string(i) + " path length " + std::to_string(x) +
             " out of [ell, 2*ell]");
      for (int v : comp) {
        int dc = 0, up = 0;
        for (int u : t.adj[v]) {
          dc += keepc[u];
          if (d.layer[u] > Decomposition::tag_C(i)) up++;
        }
        bool endpoint = (x == 1) || dc == 1;
        if (!endpoint && up != 0)
          note("C_" + std::to_string(i) + " interior vertex " + std::to_string(v) +
               " touches a higher layer");
        if (endpoint) {
          int want = (x == 1) ? 2 : 1;
          if (up != want)
            note("C_" + std::to_string(i) + " endpoint " + std::to_string(v) + " has " +
                 std::to_string(up) + " neighbors above, expected " + std::to_string(want));
        }
      }
    }
  }
  return out;
}

int gamma_for(long long n, int k, int ell) {
  if (k < 1 || n < 1 || ell < 1) throw DomainError("bad gamma_for arguments");
  long double v = std::pow(static_cast<long double>(n), 1.0L / k) *
                  std::pow(static_cast<long double>(ell) / 2.0L, 1.0L - 1.0L / k);
  long double r = std::round(v);
  if (std::fabs(v - r) < 1e-9L) return static_cast<int>(r);
  return static_cast<int>(std::ceil(v));
}

}  // namespace lct
