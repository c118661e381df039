// Compares the serial reference per-vertex loop against the OpenMP path on a
// view-hashing workload, checking that outputs stay bit-identical.
#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "localsim.hpp"

using namespace lct;

namespace {

Tree random_tree(int n, std::mt19937_64& rng) {
  Tree t;
  t.add_vertex(0);
  while (t.n < n) {
    std::uniform_int_distribution<int> pick(0, t.n - 1);
    int v = pick(rng);
    if (t.degree(v) >= 3) continue;
    int leaf = t.add_vertex(0);
    t.add_edge(v, leaf);
  }
  return t;
}

long long view_hash(const View& w) {
  long long h = 1469598103934665603LL;
  for (int v = 0; v < w.ball.n; v++) {
    h = (h ^ w.ids[v]) * 1099511628211LL;
    h = (h ^ w.ball.degree(v)) * 1099511628211LL;
  }
  return h;
}

double time_ms(const std::function<std::vector<long long>()>& fn,
               std::vector<long long>* out) {
  auto t0 = std::chrono::steady_clock::now();
  *out = fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main() {
  std::mt19937_64 rng(1);
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without openmp; parallel path falls back to serial\n");
#endif
  std::printf("%10s %6s %12s %12s %8s %6s\n", "n", "radius", "serial_ms", "parallel_ms",
              "speedup", "match");
  for (int n : {2000, 20000, 80000}) {
    Tree t = random_tree(n, rng);
    Network net;
    net.tree = t;
    net.id = assign_ids(t, 7);
    net.n_claimed = t.n;
    for (int radius : {2, 4}) {
      std::vector<long long> a, b;
      double ms_s = time_ms([&] { return run_alg(net, radius, view_hash); }, &a);
      double ms_p = time_ms([&] { return run_alg_parallel(net, radius, view_hash); }, &b);
      std::printf("%10d %6d %12.2f %12.2f %7.2fx %6s\n", n, radius, ms_s, ms_p, ms_s / ms_p,
                  a == b ? "yes" : "NO");
      if (a != b) return 1;
    }
  }
  return 0;
}
