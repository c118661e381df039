#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "gap.hpp"

using namespace lct;

namespace {

std::string dump_verdict(const GapVerdict& v) {
  std::ostringstream os;
  os << v.k << "|" << v.upper << "|" << v.searched << "|" << v.entry_slots << "|"
     << v.candidates_per_slot << "|" << v.certificate;
  for (const auto& [key, labels] : v.witness.entries) {
    os << "|" << key.first << ":" << key.second << "=";
    for (Label l : labels) os << l << ",";
  }
  return os.str();
}

}  // namespace

TEST_CASE("trivial problem has fast algorithms at every level") {
  LclProblem p = make_trivial_problem(3);
  for (int k : {2, 3}) {
    GapVerdict v = decide_gap(p, k);
    CAPTURE(k);
    CHECK(v.upper);
    CHECK(!v.witness.entries.empty());
  }
}

TEST_CASE("two-coloring is hard at k = 2") {
  LclProblem p = make_coloring_problem(2, 3);
  GapVerdict v = decide_gap(p, 2);
  CHECK(!v.upper);
  CHECK(v.searched > 0);
  CHECK(v.entry_slots >= 1);
  CHECK(v.candidates_per_slot == 4);
  CHECK(v.certificate.find("exhausted search") != std::string::npos);

  // same verdict with twice the search budget: the exhaustion was real
  GapOptions big;
  big.build_budget *= 2;
  GapVerdict v2 = decide_gap(p, 2, big);
  CHECK(!v2.upper);
  CHECK(v2.searched == v.searched);
}

TEST_CASE("three-coloring is easy at k = 2 and the witness checks out") {
  LclProblem p = make_coloring_problem(3, 3);
  GapVerdict v = decide_gap(p, 2);
  CHECK(v.upper);
  REQUIRE(!v.witness.entries.empty());

  // middles are never monochromatic
  for (const auto& [key, labels] : v.witness.entries) {
    REQUIRE(labels.size() == 2);
    CHECK(labels[0] != labels[1]);
  }

  ClassMachine m(p);
  CHECK(is_feasible(m, 2, v.witness));

  // corrupting one entry to a monochromatic middle kills feasibility
  LabelingFunction bad = v.witness;
  bad.entries.begin()->second = {0, 0};
  ClassMachine m2(p);
  CHECK(!is_feasible(m2, 2, bad));
}

TEST_CASE("verdicts do not depend on the window width") {
  for (int w : {60, 120}) {
    GapOptions o;
    o.w = w;
    CAPTURE(w);
    CHECK(!decide_gap(make_coloring_problem(2, 3), 2, o).upper);
    CHECK(decide_gap(make_coloring_problem(3, 3), 2, o).upper);
    CHECK(decide_gap(make_trivial_problem(3), 2, o).upper);
  }
}

TEST_CASE("deciding is deterministic") {
  LclProblem p2 = make_coloring_problem(2, 3);
  CHECK(dump_verdict(decide_gap(p2, 2)) == dump_verdict(decide_gap(p2, 2)));
  LclProblem p3 = make_coloring_problem(3, 3);
  CHECK(dump_verdict(decide_gap(p3, 2)) == dump_verdict(decide_gap(p3, 2)));
}

TEST_CASE("hierarchy structure invariants") {
  LclProblem p = make_coloring_problem(3, 3);
  ClassMachine m(p);
  long long searched = 0;
  Hierarchy h;
  auto f = find_feasible_function(m, 2, {}, &searched, &h);
  REQUIRE(f.has_value());
  REQUIRE(h.levels.size() == 2);
  CHECK(h.ell_pump == m.ell_pump_value());
  CHECK(h.w >= m.ell());

  const auto& l1 = h.levels[0];
  const auto& l2 = h.levels[1];
  CHECK(!l1.classes.empty());
  CHECK(l1.h0 >= 1);
  CHECK(!l1.core_alphabet.empty());
  CHECK(!l1.h_types.empty());
  // class sets grow with the level
  std::set<ClassId> s2(l2.classes.begin(), l2.classes.end());
  for (ClassId c : l1.classes) CHECK(s2.count(c));
  // every built class is satisfiable
  for (ClassId c : l2.classes) CHECK(class_satisfiable(m, c));
  // every window type got a processed image whose type survived the surgery
  for (TypeId q : l1.h_types) {
    auto it = h.hplus.find(q);
    REQUIRE(it != h.hplus.end());
    const auto& pr = it->second;
    CHECK(m.type_of(pr.source) == q);
    int x = pr.image.core_length();
    CHECK(x >= 2 * h.w + 2);
    CHECK(x <= 2 * (h.w + h.ell_pump) + 2);
    // the two middle cores carry the chosen labels, wings are unlabeled cores
    int pinned = 0;
    for (const auto& rt : pr.image.seq) pinned += rt.tree.output[rt.root] != kUnlabeled;
    CHECK(pinned == 2);
    CHECK(pr.image.seq[x / 2 - 1].tree.output[pr.image.seq[x / 2 - 1].root] != kUnlabeled);
    CHECK(pr.image.seq[x / 2].tree.output[pr.image.seq[x / 2].root] != kUnlabeled);
  }
  // representative stores cover everything the levels mention
  for (ClassId c : l2.classes) CHECK(h.class_rep.count(c));
  for (ClassId c : l1.core_alphabet) CHECK(h.core_rep.count(c));
}

TEST_CASE("partial builds report what they are missing") {
  LclProblem p = make_trivial_problem(3);
  ClassMachine m(p);
  LabelingFunction empty;
  CHECK_THROWS_AS(is_feasible(m, 2, empty), DomainError);

  ClassMachine m2(p);
  BuildResult res = build_hierarchy(m2, 2, empty);
  // either the pumping constant needs to grow or an f entry is requested
  CHECK((res.need_ell_pump > m2.ell_pump_value() || res.missing.has_value()));
  CHECK(!res.complete);
  REQUIRE(res.hier.has_value());

  CHECK_THROWS_AS(decide_gap(p, 1), DomainError);
}

TEST_CASE("three-coloring stays easy one level up") {
  GapVerdict v = decide_gap(make_coloring_problem(3, 3), 3);
  CHECK(v.upper);
}
