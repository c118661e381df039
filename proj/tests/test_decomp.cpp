#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "decomp.hpp"
#include "helpers.hpp"

using namespace lct;
using testutil::path_tree;
using testutil::random_tree;

static std::vector<long long> iota_ids(int n) {
  std::vector<long long> ids(n);
  std::iota(ids.begin(), ids.end(), 0LL);
  return ids;
}

static std::vector<long long> shuffled_ids(int n, std::mt19937_64& rng) {
  auto ids = iota_ids(n);
  std::shuffle(ids.begin(), ids.end(), rng);
  return ids;
}

TEST_CASE("rake rules") {
  Tree lone;
  lone.add_vertex();
  std::vector<char> alive{1};
  CHECK(rake_step(lone, alive, iota_ids(1)) == std::vector<int>{0});

  Tree e = path_tree(2);
  alive = {1, 1};
  auto rem = rake_step(e, alive, iota_ids(2));
  CHECK(rem == std::vector<int>{1});  // larger id of the two leaves
  std::vector<long long> rev{5, 3};
  CHECK(rake_step(e, alive, rev) == std::vector<int>{0});

  Tree p3 = path_tree(3);
  alive = {1, 1, 1};
  auto r3 = rake_step(p3, alive, iota_ids(3));
  CHECK(r3 == std::vector<int>{0, 2});
  // removed set is independent
  for (size_t a = 0; a < r3.size(); a++)
    for (size_t b = a + 1; b < r3.size(); b++) CHECK_FALSE(p3.has_edge(r3[a], r3[b]));
}

TEST_CASE("compress rules") {
  // path of n: all interior vertices have degree 2
  for (int ell : {2, 3, 5}) {
    Tree t = path_tree(ell + 2);  // interior run of exactly ell
    std::vector<char> alive(t.n, 1);
    auto runs = compress_step(t, alive, ell, iota_ids(t.n));
    REQUIRE(runs.size() == 1);
    CHECK(static_cast<int>(runs[0].size()) == ell);
    CHECK(runs[0].front() == 1);  // oriented from the smaller-ID end

    Tree s = path_tree(ell + 1);  // interior run of ell-1
    std::vector<char> alive2(s.n, 1);
    CHECK(compress_step(s, alive2, ell, iota_ids(s.n)).empty());
  }
  Tree p20 = path_tree(20);
  std::vector<char> alive(20, 1);
  auto runs = compress_step(p20, alive, 3, iota_ids(20));
  REQUIRE(runs.size() == 1);
  CHECK(static_cast<int>(runs[0].size()) == 18);
  CHECK(std::find(runs[0].begin(), runs[0].end(), 0) == runs[0].end());
  CHECK(std::find(runs[0].begin(), runs[0].end(), 19) == runs[0].end());
}

TEST_CASE("path independent set") {
  for (int ell : {1, 2, 3, 4}) {
    CHECK(path_independent_set(ell - 1, ell).empty());
    CHECK(path_independent_set(2 * ell, ell).empty());
    for (int m : {5 * ell, 7 * ell + 1, 12 * ell + 3}) {
      auto cuts = path_independent_set(m, ell);
      // independent, no endpoints
      for (size_t i = 0; i < cuts.size(); i++) {
        CHECK(cuts[i] > 0);
        CHECK(cuts[i] < m - 1);
        if (i > 0) CHECK(cuts[i] - cuts[i - 1] >= 2);
      }
      // residual segment sizes in [ell, 2*ell]
      int prev = -1;
      std::vector<int> seg;
      for (int c : cuts) {
        seg.push_back(c - prev - 1);
        prev = c;
      }
      seg.push_back(m - prev - 1);
      for (int s : seg) {
        CHECK(s >= ell);
        CHECK(s <= 2 * ell);
      }
    }
  }
}

TEST_CASE("decompose small cases") {
  Tree lone;
  lone.add_vertex();
  auto d = decompose(lone, 3, 2, iota_ids(1));
  CHECK(d.L == 1);
  CHECK(d.layer[0] == Decomposition::tag_R(1));

  Tree p9 = path_tree(9);
  auto d9 = decompose(p9, 1, 2, iota_ids(9));
  CHECK(verify_decomposition(p9, d9).empty());

  // star: leaves raked, then the center, all inside one gamma-block
  Tree star;
  star.add_vertex();
  for (int i = 0; i < 3; i++) {
    star.add_vertex();
    star.add_edge(0, i + 1);
  }
  auto ds = decompose(star, 2, 2, iota_ids(4));
  CHECK(ds.L == 1);
  for (int v = 0; v < 4; v++) CHECK(ds.layer[v] == Decomposition::tag_R(1));
}

TEST_CASE("verifier flags planted defects") {
  Tree p3 = path_tree(3);
  Decomposition bad;
  bad.gamma = 1;
  bad.ell = 1;
  bad.L = 1;
  bad.layer = {0, 0, 0};
  auto rep = verify_decomposition(p3, bad);
  bool found = false;
  for (auto& s : rep) found |= s.find("height") != std::string::npos;
  CHECK(found);

  int ell = 2;
  Tree p = path_tree(2 * ell + 3);
  Decomposition badc;
  badc.gamma = 1;
  badc.ell = ell;
  badc.L = 2;
  badc.layer.assign(p.n, Decomposition::tag_C(1));
  badc.layer[0] = Decomposition::tag_R(2);
  badc.layer[p.n - 1] = Decomposition::tag_R(2);
  auto repc = verify_decomposition(p, badc);
  found = false;
  for (auto& s : repc) found |= s.find("out of [ell, 2*ell]") != std::string::npos;
  CHECK(found);
}

TEST_CASE("random trees: verified, deterministic, layer-bounded") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; trial++) {
    int n = 2 + static_cast<int>(rng() % 400);
    Tree t = random_tree(n, 3, rng);
    auto ids = shuffled_ids(n, rng);
    int ell = 2 + static_cast<int>(rng() % 3);
    int k = 2 + static_cast<int>(rng() % 3);
    int gamma = gamma_for(n, k, ell);
    DecompositionStats st;
    auto d = decompose(t, gamma, ell, ids, &st);
    CHECK(verify_decomposition(t, d).empty());
    CHECK(d.L <= k);
    // determinism
    auto d2 = decompose(t, gamma, ell, ids);
    CHECK(d.layer == d2.layer);
    // shrinkage inequality per surviving component: 2*gamma*|S_{i+1}| < ell*|S_i|
    for (auto& iter : st.shrink_pairs)
      for (auto& [parent, child] : iter)
        CHECK(2LL * gamma * child < static_cast<long long>(ell) * parent);
  }
}

TEST_CASE("gamma=1 regime stays logarithmic") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; trial++) {
    int n = 200 + static_cast<int>(rng() % 2000);
    Tree t = random_tree(n, 3, rng);
    auto d = decompose(t, 1, 2, shuffled_ids(n, rng));
    CHECK(verify_decomposition(t, d).empty());
    CHECK(d.L <= 4.0 * std::log2(static_cast<double>(n)));
  }
}

TEST_CASE("gamma_for") {
  CHECK(gamma_for(1024, 2, 2) == 32);
  CHECK(gamma_for(777, 1, 5) == 777);
  CHECK(gamma_for(1000000, 3, 8) == 252);
}
