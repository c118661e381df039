#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core.hpp"
#include "helpers.hpp"

using namespace lct;
using testutil::path_tree;
using testutil::random_tree;

static Tree labeled_path(std::initializer_list<Label> outs) {
  Tree t = path_tree(static_cast<int>(outs.size()));
  int i = 0;
  for (Label o : outs) t.output[i++] = o;
  return t;
}

TEST_CASE("local consistency on 2-coloring paths") {
  auto p = make_coloring_problem(2, 3);
  Tree bwb = labeled_path({0, 1, 0});
  CHECK(is_locally_consistent(p, bwb, 1));
  Tree bb = labeled_path({0, 0});
  CHECK_FALSE(is_locally_consistent(p, bb, 0));
  CHECK_FALSE(is_locally_consistent(p, bb, 1));
  Tree incomplete = labeled_path({0, kUnlabeled, 0});
  CHECK_THROWS_AS(is_locally_consistent(p, incomplete, 0), DomainError);
}

TEST_CASE("3-coloring the complete binary tree via the solver") {
  auto p = make_coloring_problem(3, 3);
  Tree t;
  for (int i = 0; i < 7; i++) t.add_vertex();
  for (int i = 1; i < 7; i++) t.add_edge((i - 1) / 2, i);
  auto lab = complete_labeling(p, t);
  REQUIRE(lab.has_value());
  t.output = *lab;
  for (int v = 0; v < 7; v++) CHECK(is_locally_consistent(p, t, v));
  CHECK(is_legal(p, t));
}

TEST_CASE("is_legal basics") {
  auto triv = make_trivial_problem(3);
  Tree one;
  one.add_vertex();
  one.output[0] = 0;
  CHECK(is_legal(triv, one));

  auto p = make_coloring_problem(2, 3);
  Tree cyc;
  for (int i = 0; i < 5; i++) cyc.add_vertex();
  for (int i = 0; i < 5; i++) cyc.add_edge(i, (i + 1) % 5);
  cyc.output.assign(5, 0);
  CHECK_THROWS_AS(is_legal(p, cyc), DomainError);

  Tree alt = labeled_path({0, 1, 0, 1, 0, 1});
  CHECK(is_legal(p, alt));
  Tree bad = labeled_path({0, 1, 1, 0, 1, 0});
  CHECK_FALSE(is_legal(p, bad));
}

TEST_CASE("complete_labeling pinned cases") {
  auto p = make_coloring_problem(2, 3);
  Tree edge = path_tree(2);
  edge.output[0] = edge.output[1] = 0;
  CHECK_FALSE(complete_labeling(p, edge).has_value());

  Tree p5 = path_tree(5);
  p5.output[0] = p5.output[4] = 0;
  auto lab = complete_labeling(p, p5);
  REQUIRE(lab.has_value());
  p5.output = *lab;
  CHECK(is_legal(p, p5));
  CHECK(p5.output[0] == 0);
  CHECK(p5.output[4] == 0);

  auto triv = make_trivial_problem(3);
  std::mt19937_64 rng(1);
  Tree rt = random_tree(9, 3, rng);
  CHECK(complete_labeling(triv, rt).has_value());
}

TEST_CASE("solver agrees with exhaustive enumeration on small trees") {
  std::mt19937_64 rng(42);
  std::vector<LclProblem> corpus = {make_trivial_problem(3), make_coloring_problem(2, 3),
                                    make_coloring_problem(3, 3)};
  for (int trial = 0; trial < 120; trial++) {
    const auto& p = corpus[trial % corpus.size()];
    int n = 1 + static_cast<int>(rng() % 12);
    Tree t = random_tree(n, p.delta, rng);
    // pin some labels at random
    for (int v = 0; v < n; v++)
      if (rng() % 3 == 0) t.output[v] = static_cast<Label>(rng() % p.outputs.size());
    auto fast = complete_labeling(p, t);
    auto slow = complete_labeling_bruteforce(p, t);
    REQUIRE(fast.has_value() == slow.has_value());
    if (fast) {
      Tree full = t;
      full.output = *fast;
      CHECK(is_legal(p, full));
      for (int v = 0; v < n; v++)
        if (t.output[v] != kUnlabeled) CHECK((*fast)[v] == t.output[v]);
    }
  }
}

TEST_CASE("solver honors the per-vertex check mask") {
  auto p = make_coloring_problem(2, 2);
  Tree bad = path_tree(3);
  bad.output[0] = bad.output[1] = 0;
  bad.output[2] = 1;
  // conflict sits on edge {0,1}; masking both endpoints of it hides it
  CompletionOptions skip_left;
  skip_left.check = {0, 0, 1};
  CHECK(complete_labeling(p, bad, skip_left).has_value());
  CompletionOptions all;
  CHECK_FALSE(complete_labeling(p, bad, all).has_value());
}

TEST_CASE("monotonicity: shrinking the truth table never legalizes a labeling") {
  auto full = make_coloring_problem(3, 3);
  full.pred_r1 = nullptr;  // force table lookups
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; trial++) {
    auto reduced = full;
    // drop a random entry
    auto it = reduced.table_r1.begin();
    std::advance(it, rng() % reduced.table_r1.size());
    reduced.table_r1.erase(it);
    Tree t = random_tree(1 + static_cast<int>(rng() % 8), 3, rng);
    for (int v = 0; v < t.n; v++) t.output[v] = static_cast<Label>(rng() % 3);
    if (is_legal(reduced, t)) CHECK(is_legal(full, t));
    if (!is_legal(full, t)) CHECK_FALSE(is_legal(reduced, t));
  }
}

TEST_CASE("orientation encoding") {
  auto p = make_coloring_problem(2, 3);
  Tree e = path_tree(2);
  auto enc = encode_orientation(e, {{0, 1}}, /*e_input=*/0, 0, 1);
  CHECK(enc.tree.n == 4);
  CHECK(enc.tree.degree(0) == 1);
  CHECK(enc.midpoint_of[2] == 0);
  CHECK(enc.midpoint_of[3] == 0);
  auto dec = decode_orientation(enc, 1);
  REQUIRE(dec.size() == 1);
  CHECK(dec[0].u == 0);
  CHECK(dec[0].v == 1);

  Tree t3 = path_tree(3);
  auto id = encode_orientation(t3, {}, 0, 0, 1);
  CHECK(id.tree.n == 3);
  CHECK(canonical_unrooted(id.tree) == canonical_unrooted(t3));

  auto enc3 = encode_orientation(t3, {{1, 0}, {1, 2}}, 0, 0, 1);
  CHECK(enc3.tree.n == 7);
  auto dec3 = decode_orientation(enc3, 1);
  REQUIRE(dec3.size() == 2);
  CHECK(dec3[0].u == 1);
  CHECK(dec3[0].v == 0);
  CHECK(dec3[1].u == 1);
  CHECK(dec3[1].v == 2);

  // round-trip over random trees with random orientations
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; trial++) {
    Tree t = random_tree(2 + static_cast<int>(rng() % 9), 3, rng);
    std::vector<OrientedEdge> dirs;
    for (int v = 0; v < t.n; v++)
      for (int u : t.adj[v])
        if (u > v) {
          if (rng() % 2)
            dirs.push_back({v, u});
          else
            dirs.push_back({u, v});
        }
    auto enc2 = encode_orientation(t, dirs, 0, 0, 1);
    auto dec2 = decode_orientation(enc2, 1);
    REQUIRE(dec2.size() == dirs.size());
    for (size_t i = 0; i < dirs.size(); i++) {
      CHECK(dec2[i].u == dirs[i].u);
      CHECK(dec2[i].v == dirs[i].v);
    }
  }
}

TEST_CASE("description length bound") {
  LclProblem p;
  p.inputs = {"-"};
  p.outputs = {"a", "b"};
  p.delta = 2;
  p.radius = 1;
  CHECK(description_length_bound(p) == "27");

  LclProblem q;
  q.inputs = {"-"};
  q.outputs = {"a"};
  q.delta = 3;
  q.radius = 2;  // 2^(1+9) = 1024
  CHECK(description_length_bound(q) == "1024");

  LclProblem r;
  r.inputs = {"x", "y"};
  r.outputs = {"a", "b", "c"};
  r.delta = 3;
  r.radius = 1;
  CHECK(description_length_bound(r) == "2401");
}

TEST_CASE("canonical serialization is isomorphism-invariant") {
  Tree a;
  for (int i = 0; i < 4; i++) a.add_vertex();
  a.add_edge(0, 1);
  a.add_edge(0, 2);
  a.add_edge(2, 3);
  Tree b;  // same shape, different vertex order
  for (int i = 0; i < 4; i++) b.add_vertex();
  b.add_edge(3, 2);
  b.add_edge(3, 1);
  b.add_edge(1, 0);
  CHECK(canonical_unrooted(a) == canonical_unrooted(b));
  CHECK(canonical_serial(a, 0) == canonical_serial(b, 3));
  CHECK(canonical_serial(a, 1) != canonical_serial(a, 0));
}
