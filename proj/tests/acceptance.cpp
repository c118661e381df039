// Acceptance harness: one pass/fail line per criterion, exit code = number of
// failed criteria. Every check is oracle-style: recomputed from scratch or
// verified against an independent implementation.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "atm.hpp"
#include "decomp.hpp"
#include "gap.hpp"
#include "helpers.hpp"
#include "machines.hpp"
#include "runner.hpp"

using namespace lct;

namespace {

int failures = 0;

template <class F>
void criterion(const char* name, F body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = e.what();
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok) {
    std::printf("[PASS] %s (%.1fs)\n", name, sec);
  } else {
    std::printf("[FAIL] %s: %s\n", name, detail.empty() ? "check failed" : detail.c_str());
    failures++;
  }
  std::fflush(stdout);
}

bool fail(std::string& detail, std::string msg) {
  detail = std::move(msg);
  return false;
}

RootedTree leaf_tree() {
  RootedTree rt;
  rt.tree.add_vertex();
  return rt;
}

RootedTree random_rooted(int max_n, int delta, std::mt19937_64& rng) {
  RootedTree rt;
  rt.tree = testutil::random_tree(1 + static_cast<int>(rng() % max_n), delta, rng);
  rt.root = 0;
  return rt;
}

// long-backbone tree: diameter Theta(n), so every decomposition level compresses
Tree caterpillar(int n, std::mt19937_64& rng) {
  Tree t = testutil::path_tree((2 * n + 2) / 3);
  std::uniform_int_distribution<int> pick(0, t.n - 1);
  while (t.n < n) {
    int v = pick(rng);
    if (t.degree(v) >= 3) continue;
    int leaf = t.add_vertex(0);
    t.add_edge(v, leaf);
  }
  return t;
}

std::vector<LclProblem> problem_corpus() {
  return {make_trivial_problem(3), make_coloring_problem(2, 3), make_coloring_problem(3, 3)};
}

const int kSizes[] = {1000, 10000, 100000};
const int kLevels[] = {2, 3, 4};
const int kEll = 2;

std::mt19937_64 corpus_rng(int n, int k) { return std::mt19937_64(1000003ULL * k + 17ULL * n); }

// ---------------------------------------------------------------------------

bool layer_bound(std::string& detail) {
  for (int n : kSizes)
    for (int k : kLevels) {
      int gamma = gamma_for(n, k, kEll);
      std::mt19937_64 rng = corpus_rng(n, k);
      for (int trial = 0; trial < 100; trial++) {
        Tree t = testutil::random_tree(n, 3, rng);
        std::vector<long long> ids(n);
        std::iota(ids.begin(), ids.end(), 0LL);
        std::shuffle(ids.begin(), ids.end(), rng);
        DecompositionStats st;
        Decomposition d = decompose(t, gamma, kEll, ids, &st);
        std::ostringstream at;
        at << "n=" << n << " k=" << k << " trial=" << trial;
        if (d.L > k) return fail(detail, "L=" + std::to_string(d.L) + " > k at " + at.str());
        auto errs = verify_decomposition(t, d);
        if (!errs.empty()) return fail(detail, errs[0] + " at " + at.str());
        for (auto& iter : st.shrink_pairs)
          for (auto& [parent, child] : iter)
            if (2LL * gamma * child >= static_cast<long long>(kEll) * parent)
              return fail(detail, "shrinkage inequality violated at " + at.str());
      }
    }
  return true;
}

bool gamma_one_logarithmic(std::string& detail) {
  for (int n : kSizes)
    for (int k : kLevels) {
      std::mt19937_64 rng = corpus_rng(n, k);
      for (int trial = 0; trial < 100; trial++) {
        Tree t = testutil::random_tree(n, 3, rng);
        std::vector<long long> ids(n);
        std::iota(ids.begin(), ids.end(), 0LL);
        std::shuffle(ids.begin(), ids.end(), rng);
        Decomposition d = decompose(t, 1, kEll, ids);
        if (d.L > 4.0 * std::log2(static_cast<double>(n)))
          return fail(detail, "L=" + std::to_string(d.L) + " exceeds 4*log2(n) at n=" +
                                  std::to_string(n) + " trial=" + std::to_string(trial));
      }
    }
  return true;
}

bool replacement_soundness(std::string& detail) {
  int pidx = 0;
  for (const auto& p : problem_corpus()) {
    ClassMachine m(p);
    std::mt19937_64 rng(0xC3000 + pidx++);
    int done = 0;
    for (int attempt = 0; attempt < 40000 && done < 100; attempt++) {
      Tree host = testutil::random_tree(2 + static_cast<int>(rng() % 11), p.delta, rng);
      std::vector<int> spots;
      for (int v = 0; v < host.n; v++)
        if (host.degree(v) < p.delta) spots.push_back(v);
      if (spots.empty()) continue;
      int attach = spots[rng() % spots.size()];
      RootedTree a = random_rooted(4, p.delta - 1, rng);
      RootedTree b = random_rooted(4, p.delta - 1, rng);
      if (rng() % 4 == 0)
        a.tree.output[rng() % a.tree.n] = static_cast<Label>(rng() % p.outputs.size());
      if (m.class_of(a) != m.class_of(b)) continue;
      Tree g = host;
      int off = g.n;
      for (int v = 0; v < a.tree.n; v++) {
        int nv = g.add_vertex(a.tree.input[v]);
        g.output[nv] = a.tree.output[v];
      }
      for (int v = 0; v < a.tree.n; v++)
        for (int u : a.tree.adj[v])
          if (u > v) g.add_edge(off + v, off + u);
      int z = off + a.root;
      g.add_edge(attach, z);
      auto rep = replace_rooted(g, attach, z, b);
      auto lab = complete_labeling(p, rep.tree);
      if (!lab) continue;
      auto back = recover_from_replace_rooted(m, g, attach, z, rep, *lab);
      Tree gl = g;
      gl.output = back;
      if (!is_legal(p, gl))
        return fail(detail, "transferred labeling illegal, problem " + std::to_string(pidx - 1) +
                                " attempt " + std::to_string(attempt));
      for (int v = 0; v < g.n; v++)
        if (rep.host_map[v] >= 0 && back[v] != (*lab)[rep.host_map[v]])
          return fail(detail, "host label changed, problem " + std::to_string(pidx - 1) +
                                  " attempt " + std::to_string(attempt));
      done++;
    }
    if (done < 100)
      return fail(detail,
                  "assembled only " + std::to_string(done) + " same-class trials for problem " +
                      std::to_string(pidx - 1));
  }
  return true;
}

bool pumping_preserves_type(std::string& detail) {
  int pidx = 0, total = 0;
  for (const auto& p : problem_corpus()) {
    ClassMachine m(p);
    ClassId c_leaf = m.class_of(leaf_tree());
    ClassId c_two = m.class_of(RootedTree{testutil::path_tree(2), 0});
    std::mt19937_64 rng(0xC4000 + pidx++);
    int goal = pidx == 3 ? 166 : 167;
    for (int trial = 0; trial < goal; trial++, total++) {
      // grow a random word over the two classes until a prefix type repeats
      std::vector<ClassId> w;
      std::vector<TypeId> states;
      TypeId q = -1;
      int i = -1, j = -1;
      for (int len = 1; len <= 200 && j < 0; len++) {
        ClassId c = rng() % 2 ? c_leaf : c_two;
        w.push_back(c);
        q = len == 1 ? m.type_of_single(c) : m.type_transition(q, c);
        for (size_t a = 0; a < states.size(); a++)
          if (states[a] == q) {
            i = static_cast<int>(a);
            j = len - 1;
            break;
          }
        states.push_back(q);
      }
      if (j < 0) return fail(detail, "no type repeat within 200 cores");
      auto build = [&](int reps) {
        BipolarTree h;
        auto push = [&](ClassId c) {
          h.seq.push_back(c == c_leaf ? leaf_tree() : RootedTree{testutil::path_tree(2), 0});
        };
        for (int a = 0; a <= i; a++) push(w[a]);
        for (int r = 0; r < reps; r++)
          for (int a = i + 1; a <= j; a++) push(w[a]);
        for (int a = j + 1; a < static_cast<int>(w.size()); a++) push(w[a]);
        return h;
      };
      // equality is judged by brute-force signatures in a fresh context, never
      // by the transition table that produced the repeat
      ClassMachine fresh(p);
      TypeId base = fresh.intern_type(fresh.type_signature_direct(build(1)));
      for (int reps : {0, 2, 3})
        if (fresh.intern_type(fresh.type_signature_direct(build(reps))) != base)
          return fail(detail, "type changed at reps=" + std::to_string(reps) + ", problem " +
                                  std::to_string(pidx - 1) + " trial " + std::to_string(trial));
    }
  }
  return total == 500 ? true : fail(detail, "trial count " + std::to_string(total));
}

struct UpperCase {
  LclProblem p;
  int k = 0;
  LabelingFunction f;
};
std::vector<UpperCase> g_uppers;
std::string g_certificate;

bool gap_decisions(std::string& detail) {
  LclProblem triv = make_trivial_problem(3);
  LclProblem two = make_coloring_problem(2, 3);
  LclProblem three = make_coloring_problem(3, 3);
  for (int k : {2, 3}) {
    GapVerdict v = decide_gap(triv, k);
    if (!v.upper) return fail(detail, "trivial problem not upper at k=" + std::to_string(k));
    g_uppers.push_back({triv, k, v.witness});
  }
  GapVerdict v2 = decide_gap(two, 2);
  if (v2.upper) return fail(detail, "2-coloring not lower at k=2");
  if (v2.searched <= 0 || v2.certificate.find("exhausted search") == std::string::npos)
    return fail(detail, "2-coloring verdict lacks an exhaustion certificate");
  g_certificate = v2.certificate;
  GapVerdict v3 = decide_gap(three, 2);
  if (!v3.upper) return fail(detail, "3-coloring not upper at k=2");
  g_uppers.push_back({three, 2, v3.witness});
  // doubling the window width changes nothing
  for (int w : {60, 120}) {
    GapOptions o;
    o.w = w;
    if (decide_gap(two, 2, o).upper || !decide_gap(three, 2, o).upper ||
        !decide_gap(triv, 2, o).upper)
      return fail(detail, "verdict flipped at w=" + std::to_string(w));
  }
  // monotone in k: everything upper at k=2 stays upper one level higher
  GapVerdict v33 = decide_gap(three, 3);
  if (!v33.upper) return fail(detail, "3-coloring verdict not monotone from k=2 to k=3");
  g_uppers.push_back({three, 3, v33.witness});
  return true;
}

bool canonical_execution(std::string& detail) {
  if (g_uppers.empty()) return fail(detail, "no upper verdicts available");
  for (size_t uc = 0; uc < g_uppers.size(); uc++) {
    const auto& [p, k, f] = g_uppers[uc];
    std::mt19937_64 rng(0xC6000 + uc);
    double sum_small = 0, sum_big = 0;
    for (int n : {500, 1000, 1500, 2000, 2500, 3000, 3500, 4000, 4500, 5000})
      for (int seed = 0; seed < 5; seed++) {
        Tree t = caterpillar(n, rng);
        RunResult r = run_canonical(p, t, k, f);
        Tree labeled = t;
        labeled.output = r.labeling;
        if (!labeled.completely_labeled() || !is_legal(p, labeled))
          return fail(detail, "illegal labeling at verdict " + std::to_string(uc) +
                                  " n=" + std::to_string(n) + " seed=" + std::to_string(seed));
        double c = static_cast<double>(r.rounds_used) / std::pow(n, 1.0 / k);
        if (n == 500) sum_small += c;
        if (n == 5000) sum_big += c;
      }
    double ratio = sum_big / sum_small;
    if (ratio > 1.5 || ratio < 1.0 / 1.5)
      return fail(detail, "rounds/n^{1/k} drifted by " + std::to_string(ratio) + "x at verdict " +
                              std::to_string(uc));
  }
  return true;
}

bool hardness_reduction(std::string& detail) {
  // game evaluation against the dense value-iteration oracle, every configuration
  for (const AlternatingTM& m : testutil::machine_corpus()) {
    testutil::DenseOracle oracle(m);
    for (int id = 0; id < oracle.nconf; id++)
      if (evaluate(m, oracle.unpack(id)) != (oracle.acc[id] != 0))
        return fail(detail, "evaluate disagrees with the oracle at configuration " +
                                std::to_string(id));
  }
  // execution trees of every halting machine pass the structural validator
  std::vector<std::pair<AlternatingTM, std::vector<int>>> halting = {
      {testutil::m_accept(), {0, 1}},
      {testutil::m_reject(), {0, 0}},
      {testutil::m_boundary(), {0, 0, 0}},
      {testutil::m_first_bit(), {0, 0}},
      {testutil::m_first_bit(), {0, 1}},
      {testutil::m_first_bit(), {1, 0}},
      {testutil::m_first_bit(), {1, 1}}};
  for (const auto& [m, x] : halting) {
    auto errs = check_config_tree(m, x, build_config_tree(m, x));
    if (!errs.empty()) return fail(detail, "execution tree invalid: " + errs[0]);
  }
  // compiled alphabet sizes match the closed forms, per chain family
  for (const auto& [m, x] : halting) {
    HardnessLcl h = compile_lcl(m, x, make_trivial_problem(3), make_coloring_problem(2, 3));
    int nq = static_cast<int>(m.state_names.size());
    if (static_cast<int>(h.problem.inputs.size()) != hardness_input_count(m.s, nq, h.i1, h.i2) ||
        static_cast<int>(h.problem.outputs.size()) != hardness_output_count(m.s, nq, h.o1, h.o2))
      return fail(detail, "alphabet size differs from the closed form");
    SymbolFamilies fam = hardness_symbol_families(m.s, nq);
    std::vector<std::string> el, pl, rbl, ral, rql;
    for (const AuxOut& o : h.aux_outs) {
      std::ostringstream key;
      key << o.t << "|" << o.pa << "|" << o.pz;
      auto add = [&](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
      };
      if (o.lt > 0) add(el, std::to_string(o.lt));
      if (o.fam == 1) add(pl, std::to_string(o.t));
      if (o.fam == 2) add(rbl, key.str());
      if (o.fam == 3) add(ral, key.str());
      if (o.fam == 4) add(rql, key.str());
    }
    if (static_cast<int>(el.size()) != fam.ell || static_cast<int>(pl.size()) != fam.p ||
        static_cast<int>(rbl.size()) != fam.relay_b ||
        static_cast<int>(ral.size()) != fam.relay_a ||
        static_cast<int>(rql.size()) != fam.relay_q)
      return fail(detail, "chain family counts differ from the closed form");
  }
  // marking semantics: machine acceptance <-> mark achievability on instances
  // with every attachment kind, all at most 40 vertices
  struct Case {
    AlternatingTM m;
    std::vector<int> x;
    std::vector<Attach> attach;
    std::uint64_t seed;
  };
  std::vector<Case> cases;
  for (std::uint64_t seed : {1, 2, 3})
    cases.push_back({testutil::m_accept(), {0, 1},
                     {Attach::None, Attach::Exact, Attach::Corrupted}, seed});
  cases.push_back({testutil::m_first_bit(), {1, 0}, {Attach::Exact, Attach::None}, 1});
  cases.push_back({testutil::m_reject(), {0, 0}, {Attach::Exact}, 1});
  for (std::uint64_t seed : {1, 2, 3, 4, 5})
    cases.push_back({testutil::m_reject(), {0, 0}, {Attach::Corrupted, Attach::Exact}, seed});
  for (std::uint64_t seed : {7, 8, 9})
    cases.push_back({testutil::m_first_bit(), {0, 0}, {Attach::Exact, Attach::Corrupted}, seed});
  cases.push_back({testutil::m_boundary(), {0, 0, 0}, {Attach::Exact}, 1});
  cases.push_back({testutil::m_boundary(), {0, 0, 0}, {Attach::Corrupted}, 11});
  for (size_t ci = 0; ci < cases.size(); ci++) {
    const auto& c = cases[ci];
    HardnessLcl h = compile_lcl(c.m, c.x, make_trivial_problem(3), make_coloring_problem(2, 3));
    Tree host;
    for (size_t i = 0; i < c.attach.size(); i++) host.add_vertex(h.main_input_id(0, 0));
    for (size_t i = 1; i < c.attach.size(); i++)
      host.add_edge(static_cast<int>(i) - 1, static_cast<int>(i));
    Tree inst = make_instance(h, host, c.attach, c.seed);
    if (inst.n > 40) return fail(detail, "instance exceeds 40 vertices at case " +
                                             std::to_string(ci));
    MarkingReport rep = check_marking_semantics(h, inst);
    if (!rep.ok || rep.rows.size() != c.attach.size())
      return fail(detail, "marking report broken at case " + std::to_string(ci));
    for (size_t i = 0; i < c.attach.size(); i++) {
      bool expect_good = h.machine_accepts || c.attach[i] != Attach::Exact;
      if (rep.rows[i].good != expect_good || rep.rows[i].star != expect_good)
        return fail(detail, "good/star mismatch at case " + std::to_string(ci) + " vertex " +
                                std::to_string(i));
    }
  }
  return true;
}

bool desk_scale_statement(std::string& detail) {
  std::printf(
      "  Not reproducible at desk scale (theorems, not measurements):\n"
      "  - the Omega(n^{1/(k-1)}) round lower bound behind a negative verdict; the artifact\n"
      "    substitutes the exhaustion certificate over the finite labeling-function space\n"
      "  - EXPTIME-hardness of classification; the artifact substitutes the reduction's\n"
      "    semantic checks (machine acceptance <-> mark achievability) on small instances\n"
      "  - the doubly-exponential worst-case decision time; the artifact substitutes\n"
      "    budget-transparent failures instead of open-ended runs\n");
  if (g_certificate.empty()) return fail(detail, "no exhaustion certificate was recorded");
  std::printf("  recorded certificate: %s\n", g_certificate.c_str());
  // the promised failure modes are real: exceeding a budget raises BudgetError
  bool budget_seen = false;
  try {
    GapOptions o;
    o.class_budget = 1;
    decide_gap(make_coloring_problem(3, 3), 2, o);
  } catch (const BudgetError&) {
    budget_seen = true;
  }
  if (!budget_seen) return fail(detail, "class budget overrun did not raise BudgetError");
  budget_seen = false;
  try {
    HardnessLcl h = compile_lcl(testutil::m_loop(), {1, 0}, make_trivial_problem(3),
                                make_coloring_problem(2, 3));
    Tree host;
    host.add_vertex(h.main_input_id(0, 0));
    make_instance(h, host, {Attach::Exact}, 1);
  } catch (const BudgetError&) {
    budget_seen = true;
  }
  if (!budget_seen) return fail(detail, "non-stabilizing machine did not raise BudgetError");
  return true;
}

}  // namespace

int main() {
  criterion("decomposition layer bound L <= k with per-iteration shrinkage", layer_bound);
  criterion("gamma=1 decomposition stays logarithmic", gamma_one_logarithmic);
  criterion("same-class replacement keeps labelings legal and host labels intact",
            replacement_soundness);
  criterion("pumped type-preserving segments keep the type (independent recomputation)",
            pumping_preserves_type);
  criterion("gap decisions on the corpus, window-stable and monotone in k", gap_decisions);
  criterion("canonical runs give legal labelings with n^{1/k} round scaling",
            canonical_execution);
  criterion("hardness reduction: oracle match, validated trees, marking semantics, alphabets",
            hardness_reduction);
  criterion("limits beyond desk scale stated, with certificate and budget-transparent failures",
            desk_scale_statement);
  return failures;
}
