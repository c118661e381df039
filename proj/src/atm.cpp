#include "atm.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <random>
#include <unordered_map>

namespace lct {

namespace {

std::uint64_t pack(const AlternatingTM& m, const Configuration& c) {
  std::uint64_t bits = 0;
  for (int i = 0; i < m.s; i++) bits |= static_cast<std::uint64_t>(c.tape[i]) << i;
  std::uint64_t nq = m.state_names.size();
  return (bits * (m.s + 1) + c.head) * nq + c.state;
}

// reachable configurations plus the least-fixed-point accept set
struct EvalMap {
  std::unordered_map<std::uint64_t, Configuration> reach;
  std::unordered_map<std::uint64_t, char> acc;
};

EvalMap eval_all(const AlternatingTM& m, const Configuration& c0) {
  if (m.s > 24) throw BudgetError("space bound too large for evaluation");
  EvalMap em;
  std::vector<std::uint64_t> queue;
  auto push = [&](const Configuration& c) {
    std::uint64_t k = pack(m, c);
    if (em.reach.emplace(k, c).second) {
      if (em.reach.size() > (1u << 21)) throw BudgetError("configuration space budget exceeded");
      queue.push_back(k);
    }
  };
  push(c0);
  for (size_t qi = 0; qi < queue.size(); qi++) {
    Configuration c = em.reach.at(queue[qi]);
    if (m.halting(c.state)) continue;
    push(step(m, c, 1));
    push(step(m, c, 2));
  }
  for (auto& [k, c] : em.reach)
    em.acc[k] = m.state_type[c.state] == StateType::Accept ? 1 : 0;
  // round cap: s * 2^(s + |Q|) forces non-stabilizing runs to reject
  long long cap = m.s;
  for (size_t i = 0; i < m.state_names.size() + static_cast<size_t>(m.s); i++) {
    cap *= 2;
    if (cap > (1LL << 40)) break;
  }
  bool changed = true;
  for (long long round = 0; changed && round < cap; round++) {
    changed = false;
    for (auto& [k, c] : em.reach) {
      if (em.acc[k] || m.halting(c.state)) continue;
      char a1 = em.acc.at(pack(m, step(m, c, 1)));
      char a2 = em.acc.at(pack(m, step(m, c, 2)));
      char v = m.state_type[c.state] == StateType::Exists ? (a1 | a2) : (a1 & a2);
      if (v) {
        em.acc[k] = 1;
        changed = true;
      }
    }
  }
  return em;
}

}  // namespace

int AlternatingTM::state_index(const std::string& name) const {
  for (size_t i = 0; i < state_names.size(); i++)
    if (state_names[i] == name) return static_cast<int>(i);
  throw DomainError("unknown state name: " + name);
}

int AlternatingTM::reject_state() const {
  for (size_t i = 0; i < state_type.size(); i++)
    if (state_type[i] == StateType::Reject) return static_cast<int>(i);
  return -1;
}

void AlternatingTM::validate() const {
  size_t nq = state_names.size();
  if (nq == 0) throw DomainError("machine has no states");
  if (state_type.size() != nq || delta1.size() != nq || delta2.size() != nq)
    throw DomainError("state table sizes disagree");
  if (q0 < 0 || q0 >= static_cast<int>(nq)) throw DomainError("initial state out of range");
  if (s < 1) throw DomainError("space bound must be positive");
  for (size_t q = 0; q < nq; q++)
    for (int r = 0; r < 2; r++)
      for (const TmMove* mv : {&delta1[q][r], &delta2[q][r]}) {
        if (mv->state < 0 || mv->state >= static_cast<int>(nq))
          throw DomainError("transition target out of range");
        if (mv->write != 0 && mv->write != 1) throw DomainError("transition write out of range");
        if (mv->dir != -1 && mv->dir != 1) throw DomainError("transition direction invalid");
      }
}

Configuration initial_configuration(const AlternatingTM& m, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != m.s) throw DomainError("input length differs from space bound");
  for (int v : x)
    if (v != 0 && v != 1) throw DomainError("input is not binary");
  Configuration c;
  c.tape = x;
  c.head = 1;
  c.state = m.q0;
  return c;
}

Configuration step(const AlternatingTM& m, const Configuration& c, int which) {
  if (which != 1 && which != 2) throw DomainError("transition selector must be 1 or 2");
  if (m.halting(c.state)) throw DomainError("step from a halting state");
  if (static_cast<int>(c.tape.size()) != m.s || c.head < 1 || c.head > m.s)
    throw DomainError("malformed configuration");
  const TmMove& mv = (which == 1 ? m.delta1 : m.delta2)[c.state][c.tape[c.head - 1]];
  Configuration r = c;
  r.tape[c.head - 1] = mv.write;
  int h = c.head + mv.dir;
  if (h < 1 || h > m.s) {
    // off-tape move: head stays clamped, machine enters the canonical reject
    int rej = m.reject_state();
    if (rej < 0) throw DomainError("off-tape move but the machine has no reject state");
    r.state = rej;
  } else {
    r.head = h;
    r.state = mv.state;
  }
  return r;
}

bool evaluate(const AlternatingTM& m, const Configuration& c) {
  m.validate();
  if (m.halting(c.state)) return m.state_type[c.state] == StateType::Accept;
  EvalMap em = eval_all(m, c);
  return em.acc.at(pack(m, c)) != 0;
}

bool accepts(const AlternatingTM& m, const std::vector<int>& x) {
  m.validate();
  return evaluate(m, initial_configuration(m, x));
}

ConfigTree build_config_tree(const AlternatingTM& m, const std::vector<int>& x,
                             const ConfigTreeOptions& opts) {
  m.validate();
  Configuration c0 = initial_configuration(m, x);
  EvalMap em;
  bool have_map = false;
  if (!m.halting(c0.state)) {
    em = eval_all(m, c0);
    have_map = true;
  }
  auto accepting = [&](const Configuration& c) -> int {
    if (m.halting(c.state)) return m.state_type[c.state] == StateType::Accept ? 1 : 0;
    return have_map ? em.acc.at(pack(m, c)) : 0;
  };
  long long depth_cap = m.s;
  for (int i = 0; i < m.s + static_cast<int>(m.state_names.size()); i++) {
    depth_cap *= 2;
    if (depth_cap > (1LL << 40)) break;
  }
  ConfigTree ct;
  std::function<void(const Configuration&, int, int, long long)> rec =
      [&](const Configuration& c, int z, int attach, long long depth) {
        if (depth > depth_cap) throw BudgetError("configuration recursion exceeds the step cutoff");
        int y = accepting(c);
        int prev = attach;
        for (int j = 1; j <= m.s; j++) {
          if (ct.tree.n >= opts.max_nodes) throw BudgetError("execution tree node budget exceeded");
          int v = ct.tree.add_vertex(0);
          ct.node.push_back({c.tape[j - 1], c.state, c.head == j ? 1 : 0, y, z});
          if (prev >= 0) ct.tree.add_edge(prev, v);
          prev = v;
        }
        if (!m.halting(c.state)) {
          rec(step(m, c, 1), 1, prev, depth + 1);
          rec(step(m, c, 2), 2, prev, depth + 1);
        }
      };
  rec(c0, 1, -1, 1);
  ct.root = 0;
  return ct;
}

std::vector<std::string> check_config_tree(const AlternatingTM& m, const std::vector<int>& x,
                                           const ConfigTree& ct) {
  std::vector<std::string> issues;
  auto bad = [&](int v, const std::string& what) {
    issues.push_back("vertex " + std::to_string(v) + ": " + what);
  };
  if (ct.tree.n == 0 || ct.node.size() != static_cast<size_t>(ct.tree.n))
    return {"node annotations do not match the tree"};
  // children lists away from the root
  std::vector<std::vector<int>> kids(ct.tree.n);
  std::vector<int> par(ct.tree.n, -2), stk{ct.root};
  par[ct.root] = -1;
  while (!stk.empty()) {
    int v = stk.back();
    stk.pop_back();
    for (int u : ct.tree.adj[v])
      if (u != par[v]) {
        par[u] = v;
        kids[v].push_back(u);
        stk.push_back(u);
      }
  }
  std::vector<char> seen(ct.tree.n, 0);
  std::function<void(int, const Configuration&, int)> walk = [&](int top, const Configuration& c,
                                                                 int z) {
    int y = evaluate(m, c) ? 1 : 0;
    int v = top;
    for (int j = 1; j <= m.s; j++) {
      seen[v] = 1;
      const ConfigTreeNode& nd = ct.node[v];
      if (nd.a != c.tape[j - 1]) bad(v, "tape symbol mismatch");
      if (nd.q != c.state) bad(v, "state mismatch");
      if (nd.b != (c.head == j ? 1 : 0)) bad(v, "head mark mismatch");
      if (nd.y != y) bad(v, "acceptance mark mismatch");
      if (nd.z != z) bad(v, "transition tag mismatch");
      if (j < m.s) {
        if (kids[v].size() != 1) {
          bad(v, "configuration path breaks early");
          return;
        }
        v = kids[v][0];
      }
    }
    if (m.halting(c.state)) {
      if (!kids[v].empty()) bad(v, "halting configuration has successors");
      return;
    }
    if (kids[v].size() != 2) {
      bad(v, "branching configuration lacks two successors");
      return;
    }
    int z1 = ct.node[kids[v][0]].z, z2 = ct.node[kids[v][1]].z;
    if (std::min(z1, z2) != 1 || std::max(z1, z2) != 2) {
      bad(v, "successor transition tags are not {1,2}");
      return;
    }
    for (int u : kids[v]) walk(u, step(m, c, ct.node[u].z), ct.node[u].z);
  };
  walk(ct.root, initial_configuration(m, x), 1);
  for (int v = 0; v < ct.tree.n; v++)
    if (!seen[v] && issues.empty()) bad(v, "unreachable vertex");
  return issues;
}

// ---------------------------------------------------------------------------
// compiled problem

namespace {

struct Spec {
  AlternatingTM tm;
  std::vector<int> x;
  int nq = 0, s = 0, rej = -1;
  LclProblem p1, p2;
  int i1 = 0, i2 = 0, o1 = 0, o2 = 0;
  int main_inputs = 0;
  std::vector<AuxOut> aux;
};

struct InA {
  int a = 0, q = 0, b = 0, y = 0, z = 1, d = 0;
};

bool decode_aux_in(const Spec& S, int id, InA& out) {
  id -= S.main_inputs;
  if (id < 0 || id >= 48 * S.nq) return false;
  out.d = id % 3;
  id /= 3;
  out.z = id % 2 + 1;
  id /= 2;
  out.y = id % 2;
  id /= 2;
  out.b = id % 2;
  id /= 2;
  out.q = id % S.nq;
  out.a = id / S.nq;
  return true;
}

// 0 discard, 1 marked main, 2 unmarked main, 3 aux tuple, -1 malformed
int out_kind(const Spec& S, int id, int& sub) {
  if (id == 0) return 0;
  id -= 1;
  if (id < S.o1) {
    sub = id;
    return 1;
  }
  id -= S.o1;
  if (id < S.o2) {
    sub = id;
    return 2;
  }
  id -= S.o2;
  if (id < static_cast<int>(S.aux.size())) {
    sub = id;
    return 3;
  }
  return -1;
}

const TmMove& trans(const Spec& S, int z, int q, int a) {
  return (z == 1 ? S.tm.delta1 : S.tm.delta2)[q][a];
}

struct NbrA {
  InA in;
  AuxOut out;  // all-none when the neighbor's output is not an aux tuple
};

bool b_final_fires(const Spec& S, const InA& in, const AuxOut& out, const std::vector<NbrA>& kids,
                   const std::vector<NbrA>& paux) {
  if (S.tm.halting(in.q)) return false;
  int j = S.s - out.lt + 1;
  if (j < 1) return false;
  if (j < S.s ? kids.size() != 1 : kids.size() != 2) return false;
  const InA* par = nullptr;
  if (j > 1) {
    if (paux.size() != 1) return false;
    par = &paux[0].in;
  }
  const InA* kid = j < S.s ? &kids[0].in : nullptr;
  int heads = 0, src = 0;
  if (par && par->b == 1) heads++, src = 1;
  if (in.b == 1) heads++, src = 2;
  if (kid && kid->b == 1) heads++, src = 3;
  if (heads >= 2) return false;
  int bc = 0;
  if (heads == 1) {
    if (src == 1) bc = trans(S, out.pz, in.q, par->a).dir > 0;
    if (src == 2) {
      const TmMove& mv = trans(S, out.pz, in.q, in.a);
      bc = (j == 1 && mv.dir < 0) || (j == S.s && mv.dir > 0);
    }
    if (src == 3) bc = trans(S, out.pz, in.q, kid->a).dir < 0;
  }
  return out.pa != bc;
}

bool q_final_fires(const Spec& S, const InA& in, const AuxOut& out, const std::vector<NbrA>& kids,
                   const std::vector<NbrA>& paux) {
  if (S.tm.halting(in.q)) return false;
  int j = S.s - out.lt + 1;
  if (j < 1) return false;
  if (j < S.s ? kids.size() != 1 : kids.size() != 2) return false;
  const InA* par = nullptr;
  if (j > 1) {
    if (paux.size() != 1) return false;
    par = &paux[0].in;
  }
  const InA* kid = j < S.s ? &kids[0].in : nullptr;
  int heads = 0, src = 0;
  if (par && par->b == 1) heads++, src = 1;
  if (in.b == 1) heads++, src = 2;
  if (kid && kid->b == 1) heads++, src = 3;
  if (heads != 1) return false;
  int qc = -1;
  if (src == 1) {
    const TmMove& mv = trans(S, out.pz, in.q, par->a);
    if (mv.dir <= 0) return false;
    qc = mv.state;
  }
  if (src == 2) {
    const TmMove& mv = trans(S, out.pz, in.q, in.a);
    if (!((j == 1 && mv.dir < 0) || (j == S.s && mv.dir > 0))) return false;
    if (S.rej < 0) return false;
    qc = S.rej;
  }
  if (src == 3) {
    const TmMove& mv = trans(S, out.pz, in.q, kid->a);
    if (mv.dir >= 0) return false;
    qc = mv.state;
  }
  return out.pa != qc;
}

bool err_grant(const Spec& S, const InA& in, const AuxOut& out, const std::vector<NbrA>& kids,
               const std::vector<NbrA>& paux, int pmain, bool sun_nbr) {
  bool halt = S.tm.halting(in.q);
  size_t k = kids.size();
  // leaf / chain / arity defects
  if (k == 0 && !halt) return true;
  if (k >= 2 && halt) return true;
  if (k > 2) return true;
  if (k == 1 &&
      (kids[0].in.q != in.q || kids[0].in.y != in.y || kids[0].in.z != in.z))
    return true;
  // path-length bookkeeping
  if (out.lt >= 2 && k != 1) return true;
  for (const NbrA& c : kids)
    if (c.out.lt == S.s && k != 2) return true;
  // acceptance marks
  if (S.tm.state_type[in.q] == StateType::Accept && in.y != 1) return true;
  if (S.tm.state_type[in.q] == StateType::Reject && in.y != 0) return true;
  if (k == 2 && !halt) {
    int y1 = kids[0].in.y, y2 = kids[1].in.y;
    int comb = S.tm.state_type[in.q] == StateType::Forall ? (y1 & y2) : (y1 | y2);
    if (in.y != comb) return true;
  }
  // transition tags
  if (pmain > 0 && in.z != 1) return true;
  if (k == 2) {
    int z1 = kids[0].in.z, z2 = kids[1].in.z;
    if (std::min(z1, z2) != 1 || std::max(z1, z2) != 2) return true;
  }
  // initial configuration requirements at a claimed position
  if (out.fam == 1) {
    int i = out.t;
    bool arity = i < S.s ? k == 1 : k == (S.tm.halting(S.tm.q0) ? 0u : 2u);
    if (!(in.a == S.x[i - 1] && in.q == S.tm.q0 && in.b == (i == 1 ? 1 : 0) && arity)) return true;
  }
  // discarded neighborhood
  if (sun_nbr) return true;
  // relay endpoints
  if (out.fam == 2 && out.t == S.s && out.lt >= 1 && b_final_fires(S, in, out, kids, paux))
    return true;
  if (out.fam == 3 && out.t == S.s && !halt) {
    int expect = in.b == 1 ? trans(S, out.pz, in.q, in.a).write : in.a;
    if (out.pa != expect) return true;
  }
  if (out.fam == 4 && out.t == S.s && out.lt >= 1 && q_final_fires(S, in, out, kids, paux))
    return true;
  // propagation
  for (const NbrA& c : kids)
    if (c.out.err) return true;
  return false;
}

bool hard_allowed(const Spec& S, const ConfigR1& c) {
  int sub = -1;
  int kind = out_kind(S, c.center_out, sub);
  if (kind < 0) return false;
  if (c.center_in < S.main_inputs) {
    // main vertex
    int li1 = c.center_in / S.i2, li2 = c.center_in % S.i2;
    int aux_cnt = 0;
    const std::pair<int, Label>* root = nullptr;
    std::vector<std::pair<int, Label>> same_class;
    for (const auto& nb : c.nbrs) {
      int nsub = -1;
      int nk = out_kind(S, nb.second, nsub);
      if (nk == 0) continue;  // discarded
      if (nb.first >= S.main_inputs) {
        aux_cnt++;
        root = &nb;
      } else if (nk == kind) {
        same_class.emplace_back(nb.first, nsub);
      }
    }
    bool violation = aux_cnt >= 2;
    if (kind == 0) return violation;
    if (violation) return false;
    if (kind == 3) return false;  // aux tuple on a main vertex
    if (kind == 1) {
      // the mark needs a missing, accepting, or error-carrying tree
      bool ok = aux_cnt == 0;
      if (!ok) {
        InA rin;
        if (!decode_aux_in(S, root->first, rin)) return false;
        if (rin.y == 1) ok = true;
        int rsub = -1;
        if (!ok && out_kind(S, root->second, rsub) == 3 && S.aux[rsub].err) ok = true;
      }
      if (!ok) return false;
    }
    const LclProblem& base = kind == 1 ? S.p1 : S.p2;
    ConfigR1 bc;
    bc.center_in = kind == 1 ? li1 : li2;
    bc.center_out = sub;
    for (const auto& [mi, ms] : same_class)
      bc.nbrs.emplace_back(kind == 1 ? mi / S.i2 : mi % S.i2, ms);
    bc.normalize();
    return base.allowed_r1(bc);
  }
  // auxiliary vertex
  InA in;
  if (!decode_aux_in(S, c.center_in, in)) return false;
  int pmain = 0, equal = 0;
  bool sun_nbr = false;
  std::vector<NbrA> kids, paux;
  for (const auto& nb : c.nbrs) {
    int nsub = -1;
    int nk = out_kind(S, nb.second, nsub);
    if (nk == 0) {
      sun_nbr = true;
      continue;
    }
    if (nb.first < S.main_inputs) {
      pmain++;
      continue;
    }
    NbrA na;
    if (!decode_aux_in(S, nb.first, na.in)) return false;
    if (nk == 3) na.out = S.aux[nsub];
    int rel = (na.in.d - in.d + 3) % 3;
    if (rel == 1)
      kids.push_back(na);
    else if (rel == 2)
      paux.push_back(na);
    else
      equal++;
  }
  bool violation = pmain + static_cast<int>(paux.size()) >= 2 || equal > 0;
  if (kind == 0) return violation;
  if (violation || kind != 3) return false;
  const AuxOut& out = S.aux[sub];
  // ell component: measures the distance to the nearest 0-or-2-child vertex
  if (out.lt == 1) {
    if (kids.size() != 0 && kids.size() != 2) return false;
  } else if (out.lt >= 2) {
    bool found = false;
    for (const NbrA& cc : kids) found = found || cc.out.lt == out.lt - 1;
    if (!found) return false;
  }
  if (out.fam == 1) {
    // position counter on the root path
    if (out.t == 1) {
      if (pmain == 0) return false;
    } else {
      bool found = false;
      for (const NbrA& p : paux) found = found || (p.out.fam == 1 && p.out.t == out.t - 1);
      if (!found) return false;
    }
  } else if (out.fam >= 2) {
    if (out.t == 0) {
      // the relayed claim must match this vertex's own label
      if (out.pz != in.z) return false;
      if (out.fam == 2 && out.pa != in.b) return false;
      if (out.fam == 3 && out.pa != in.a) return false;
      if (out.fam == 4 && (out.pa != in.q || in.b != 1)) return false;
    } else {
      bool found = false;
      for (const NbrA& cc : kids)
        found = found || (cc.out.fam == out.fam && cc.out.t == out.t - 1 && cc.out.pa == out.pa &&
                          cc.out.pz == out.pz);
      if (!found) return false;
    }
  }
  if (out.err && !err_grant(S, in, out, kids, paux, pmain, sun_nbr)) return false;
  return true;
}

std::vector<AuxOut> enumerate_aux_outs(int s, int nq) {
  std::vector<AuxOut> outs;
  auto relay_payloads = [&](int fam) {
    std::vector<std::pair<int, int>> ps;  // (value, z)
    int vals = fam == 4 ? nq : 2;
    for (int v = 0; v < vals; v++)
      for (int z = 1; z <= 2; z++) ps.emplace_back(v, z);
    return ps;
  };
  for (int lt = 0; lt <= s; lt++) {
    for (int err = 0; err <= 1; err++) outs.push_back({lt, 0, 0, 0, 1, err});
    if (lt == 0)
      for (int i = 1; i <= s; i++)
        for (int err = 0; err <= 1; err++) outs.push_back({0, 1, i, 0, 1, err});
    for (int fam = 2; fam <= 4; fam++)
      for (int t = lt; t <= s; t++)  // chain position pairs ell_i with hop >= i
        for (auto [v, z] : relay_payloads(fam))
          for (int err = 0; err <= (t == s ? 1 : 0); err++) outs.push_back({lt, fam, t, v, z, err});
  }
  return outs;
}

std::string aux_out_name(const AlternatingTM& m, const AuxOut& o) {
  std::string n = "aux";
  if (o.lt > 0) n += "|l" + std::to_string(o.lt);
  if (o.fam == 1) n += "|p" + std::to_string(o.t);
  if (o.fam >= 2) {
    const char* f = o.fam == 2 ? "rb" : o.fam == 3 ? "ra" : "rq";
    n += "|" + std::string(f) + std::to_string(o.t) + ":" +
         (o.fam == 4 ? m.state_names[o.pa] : std::to_string(o.pa)) + "z" + std::to_string(o.pz);
  }
  if (o.err) n += "|err";
  return n;
}

}  // namespace

int HardnessLcl::aux_input_id(int a, int q, int b, int y, int z, int d) const {
  int nq = static_cast<int>(tm.state_names.size());
  return main_inputs + (((((a * nq + q) * 2 + b) * 2 + y) * 2 + (z - 1)) * 3 + d);
}

SymbolFamilies hardness_symbol_families(int s, int nq) {
  SymbolFamilies f;
  f.ell = s;
  f.p = s;
  f.relay_b = 4 * (s + 1);
  f.relay_a = 4 * (s + 1);
  f.relay_q = 2 * nq * (s + 1);
  return f;
}

int hardness_output_count(int s, int nq, int o1, int o2) {
  int P = 8 + 2 * nq;
  return 1 + o1 + o2 + 2 * (s + 1) + 2 * s + P * (s + 2) + P * (s * (s - 1) / 2 + 2 * s);
}

int hardness_input_count(int s, int nq, int i1, int i2) {
  (void)s;
  return i1 * i2 + 48 * nq;
}

HardnessLcl compile_lcl(const AlternatingTM& m, const std::vector<int>& x, const LclProblem& p1,
                        const LclProblem& p2) {
  m.validate();
  if (static_cast<int>(x.size()) != m.s) throw DomainError("input length differs from space bound");
  for (int v : x)
    if (v != 0 && v != 1) throw DomainError("input is not binary");
  if (p1.radius != 1 || p2.radius != 1)
    throw DomainError("base problems must use radius-1 constraints");
  auto sp = std::make_shared<Spec>();
  sp->tm = m;
  sp->x = x;
  sp->nq = static_cast<int>(m.state_names.size());
  sp->s = m.s;
  sp->rej = m.reject_state();
  sp->p1 = p1;
  sp->p2 = p2;
  sp->i1 = static_cast<int>(p1.inputs.size());
  sp->i2 = static_cast<int>(p2.inputs.size());
  sp->o1 = static_cast<int>(p1.outputs.size());
  sp->o2 = static_cast<int>(p2.outputs.size());
  sp->main_inputs = sp->i1 * sp->i2;
  sp->aux = enumerate_aux_outs(m.s, sp->nq);

  HardnessLcl h;
  h.tm = m;
  h.x = x;
  h.p1 = p1;
  h.p2 = p2;
  h.i1 = sp->i1;
  h.i2 = sp->i2;
  h.o1 = sp->o1;
  h.o2 = sp->o2;
  h.main_inputs = sp->main_inputs;
  h.aux_outs = sp->aux;
  h.machine_accepts = accepts(m, x);

  LclProblem& p = h.problem;
  p.radius = 1;
  p.delta = std::max(4, std::max(p1.delta, p2.delta) + 1);
  for (int a = 0; a < sp->i1; a++)
    for (int b = 0; b < sp->i2; b++) p.inputs.push_back("M|" + p1.inputs[a] + "|" + p2.inputs[b]);
  for (int a = 0; a < 2; a++)
    for (int q = 0; q < sp->nq; q++)
      for (int b = 0; b < 2; b++)
        for (int y = 0; y < 2; y++)
          for (int z = 1; z <= 2; z++)
            for (int d = 0; d < 3; d++)
              p.inputs.push_back("A|a" + std::to_string(a) + "|" + m.state_names[q] + "|b" +
                                 std::to_string(b) + "|" + (y ? "acc" : "rej") + "|z" +
                                 std::to_string(z) + "|d" + std::to_string(d));
  p.outputs.push_back("sun");
  for (const std::string& o : p1.outputs) p.outputs.push_back("star|" + o);
  for (const std::string& o : p2.outputs) p.outputs.push_back("p2|" + o);
  for (const AuxOut& o : sp->aux) p.outputs.push_back(aux_out_name(m, o));
  p.pred_r1 = [sp](const ConfigR1& c) { return hard_allowed(*sp, c); };
  return h;
}

// ---------------------------------------------------------------------------
// instances

namespace {

// inputs carry the 5-tuple plus depth mod 3; root is vertex 0
Tree tree_from_config_tree(const HardnessLcl& h, const ConfigTree& ct) {
  Tree t = ct.tree;
  std::vector<int> dist = t.distances_from(ct.root);
  for (int v = 0; v < t.n; v++) {
    const ConfigTreeNode& nd = ct.node[v];
    t.input[v] = h.aux_input_id(nd.a, nd.q, nd.b, nd.y, nd.z, dist[v] % 3);
  }
  return t;
}

struct AuxLabel {
  int a, q, b, y, z;
};

AuxLabel split_aux(const HardnessLcl& h, int id) {
  int nq = static_cast<int>(h.tm.state_names.size());
  id -= h.main_inputs;
  id /= 3;  // drop depth component
  AuxLabel l{};
  l.z = id % 2 + 1;
  id /= 2;
  l.y = id % 2;
  id /= 2;
  l.b = id % 2;
  id /= 2;
  l.q = id % nq;
  l.a = id / nq;
  return l;
}

void rebuild_depths(const HardnessLcl& h, Tree& t) {
  std::vector<int> dist = t.distances_from(0);
  for (int v = 0; v < t.n; v++) {
    AuxLabel l = split_aux(h, t.input[v]);
    t.input[v] = h.aux_input_id(l.a, l.q, l.b, l.y, l.z, dist[v] % 3);
  }
}

void corrupt(const HardnessLcl& h, Tree& t, std::mt19937_64& rng) {
  int nq = static_cast<int>(h.tm.state_names.size());
  int kind = static_cast<int>(rng() % 7);
  if (kind == 2 && nq < 2) kind = 0;  // no second state to flip to
  if (kind == 5 && t.n < 2) kind = 6;
  if (kind <= 4) {
    int v = static_cast<int>(rng() % t.n);
    AuxLabel l = split_aux(h, t.input[v]);
    switch (kind) {
      case 0: l.a ^= 1; break;
      case 1: l.b ^= 1; break;
      case 2: l.q = (l.q + 1 + static_cast<int>(rng() % (nq - 1))) % nq; break;
      case 3: l.y ^= 1; break;
      case 4: l.z = 3 - l.z; break;
    }
    t.input[v] = h.aux_input_id(l.a, l.q, l.b, l.y, l.z, 0);
  } else if (kind == 5) {
    // stretch one configuration path by duplicating a non-root vertex
    int v = 1 + static_cast<int>(rng() % (t.n - 1));
    std::vector<int> dist = t.distances_from(0);
    int parent = -1;
    for (int u : t.adj[v])
      if (dist[u] == dist[v] - 1) parent = u;
    int w = t.add_vertex(t.input[v]);
    auto& av = t.adj[v];
    auto& ap = t.adj[parent];
    av.erase(std::find(av.begin(), av.end(), parent));
    ap.erase(std::find(ap.begin(), ap.end(), v));
    t.add_edge(parent, w);
    t.add_edge(w, v);
  } else {
    // extra child
    int v = static_cast<int>(rng() % t.n);
    int leaf = t.add_vertex(t.input[v]);
    t.add_edge(v, leaf);
  }
  rebuild_depths(h, t);
}

}  // namespace

Tree exact_auxiliary_tree(const HardnessLcl& h, const ConfigTreeOptions& opts) {
  return tree_from_config_tree(h, build_config_tree(h.tm, h.x, opts));
}

Tree make_instance(const HardnessLcl& h, const Tree& host, const std::vector<Attach>& attach,
                   std::uint64_t seed) {
  if (attach.size() != static_cast<size_t>(host.n))
    throw DomainError("attachment list size differs from the host");
  for (int v = 0; v < host.n; v++)
    if (!h.is_main_input(host.input[v]))
      throw DomainError("host inputs must come from the main alphabet");
  Tree exact;
  bool need = false;
  for (Attach a : attach) need = need || a != Attach::None;
  if (need) exact = exact_auxiliary_tree(h);
  Tree inst = host;
  for (int v = 0; v < host.n; v++) {
    if (attach[v] == Attach::None) continue;
    Tree part = exact;
    if (attach[v] == Attach::Corrupted) {
      std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (v + 1)));
      corrupt(h, part, rng);
    }
    int base = inst.n;
    for (int u = 0; u < part.n; u++) inst.add_vertex(part.input[u]);
    for (int u = 0; u < part.n; u++)
      for (int w : part.adj[u])
        if (u < w) inst.add_edge(base + u, base + w);
    inst.add_edge(v, base);
  }
  for (int v = 0; v < inst.n; v++)
    if (inst.degree(v) > h.problem.delta) throw DomainError("instance degree overflow");
  return inst;
}

MarkingReport check_marking_semantics(const HardnessLcl& h, const Tree& instance) {
  // canonical form of the exact tree with the depth component stripped
  auto stripped_serial = [&](const Tree& t, int root) {
    Tree c = t;
    for (int v = 0; v < c.n; v++) c.input[v] = (c.input[v] - h.main_inputs) / 3;
    return canonical_serial(c, root, -1);
  };
  Tree exact = exact_auxiliary_tree(h);
  std::string exact_serial = stripped_serial(exact, 0);

  MarkingReport rep;
  rep.ok = true;
  for (int v = 0; v < instance.n; v++) {
    if (!h.is_main_input(instance.input[v])) continue;
    std::vector<int> roots;
    for (int u : instance.adj[v])
      if (!h.is_main_input(instance.input[u])) roots.push_back(u);
    if (roots.size() > 1) throw DomainError("main vertex has several auxiliary neighbors");
    MarkingRow row;
    row.v = v;
    if (roots.empty()) {
      row.good = true;
    } else {
      // cut out the hanging tree and compare shapes
      std::vector<int> verts{roots[0]};
      std::vector<int> local(instance.n, -1);
      local[roots[0]] = 0;
      for (size_t i = 0; i < verts.size(); i++)
        for (int u : instance.adj[verts[i]]) {
          if (u == v && verts[i] == roots[0]) continue;
          if (h.is_main_input(instance.input[u]))
            throw DomainError("auxiliary tree touches several main vertices");
          if (local[u] < 0) {
            local[u] = static_cast<int>(verts.size());
            verts.push_back(u);
          }
        }
      Tree sub;
      for (int u : verts) sub.add_vertex(instance.input[u]);
      for (int u : verts)
        for (int w : instance.adj[u])
          if (local[w] >= 0 && local[u] < local[w]) sub.add_edge(local[u], local[w]);
      bool same = stripped_serial(sub, 0) == exact_serial;
      row.good = !(same && !h.machine_accepts);
    }
    for (int l1 = 0; l1 < h.o1 && !row.star; l1++) {
      Tree pinned = instance;
      pinned.output[v] = h.star_out(l1);
      if (complete_labeling(h.problem, pinned).has_value()) row.star = true;
    }
    rep.ok = rep.ok && row.good == row.star;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace lct
