#include "jsonio.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace lct {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw DomainError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing field");
  return *it;
}

int need_int(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<std::string> need_names(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_array()) fail(where + "." + key, "expected an array of strings");
  std::vector<std::string> out;
  for (const json& e : v) {
    if (!e.is_string()) fail(where + "." + key, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

LclProblem hardness_base_p1() { return make_trivial_problem(3); }
LclProblem hardness_base_p2() { return make_coloring_problem(2, 3); }

json problem_to_json(const LclProblem& p) {
  json j;
  j["format"] = "lct.problem/1";
  j["radius"] = p.radius;
  j["delta"] = p.delta;
  j["inputs"] = p.inputs;
  j["outputs"] = p.outputs;
  if (p.allow_all) {
    j["allow_all"] = true;
    j["constraints"] = nullptr;
  } else if (p.pred_r1 && p.table_r1.empty()) {
    j["constraints"] = nullptr;  // predicate-backed; see "machine"
  } else {
    std::vector<std::string> cs(p.radius == 1 ? p.table_r1.begin() : p.table_ball.begin(),
                                p.radius == 1 ? p.table_r1.end() : p.table_ball.end());
    std::sort(cs.begin(), cs.end());
    j["constraints"] = cs;
  }
  return j;
}

LclProblem problem_from_json(const json& j) {
  const std::string where = "$";
  if (j.contains("machine")) {
    const json& mj = need(j, "machine", where);
    AlternatingTM m = atm_from_json(mj);
    const json& xin = need(mj, "input", where + ".machine");
    std::vector<int> x;
    for (char ch : xin.get<std::string>()) {
      if (ch != '0' && ch != '1') fail(where + ".machine.input", "expected a 0/1 string");
      x.push_back(ch - '0');
    }
    HardnessLcl h = compile_lcl(m, x, hardness_base_p1(), hardness_base_p2());
    if (j.contains("outputs") &&
        need_names(j, "outputs", where) != h.problem.outputs)
      fail(where + ".outputs", "does not match the embedded machine's compilation");
    return h.problem;
  }
  LclProblem p;
  p.radius = need_int(j, "radius", where);
  p.delta = need_int(j, "delta", where);
  p.inputs = need_names(j, "inputs", where);
  p.outputs = need_names(j, "outputs", where);
  if (p.radius < 1) fail("$.radius", "must be >= 1");
  if (p.inputs.empty() || p.outputs.empty()) fail("$.inputs", "alphabets must be nonempty");
  if (j.value("allow_all", false)) {
    p.allow_all = true;
    return p;
  }
  const json& cs = need(j, "constraints", where);
  if (!cs.is_array()) fail("$.constraints", "expected an array (or allow_all)");
  for (const json& e : cs) {
    if (!e.is_string()) fail("$.constraints", "expected serialized configurations");
    if (p.radius == 1)
      p.table_r1.insert(e.get<std::string>());
    else
      p.table_ball.insert(e.get<std::string>());
  }
  return p;
}

json tree_to_json(const Tree& t, const LclProblem* p) {
  json j;
  j["format"] = "lct.tree/1";
  j["n"] = t.n;
  json edges = json::array();
  for (int u = 0; u < t.n; u++)
    for (int v : t.adj[u])
      if (u < v) edges.push_back({u, v});
  j["edges"] = edges;
  json in = json::object(), out = json::object();
  for (int v = 0; v < t.n; v++) {
    std::string key = std::to_string(v);
    in[key] = p ? json(p->inputs.at(t.input[v])) : json(std::to_string(t.input[v]));
    if (t.output[v] == kUnlabeled)
      out[key] = nullptr;
    else
      out[key] = p ? json(p->outputs.at(t.output[v])) : json(std::to_string(t.output[v]));
  }
  j["input_labels"] = in;
  j["output_labels"] = out;
  return j;
}

Tree tree_from_json(const json& j, const LclProblem* p) {
  int n = need_int(j, "n", "$");
  if (n < 0) fail("$.n", "must be >= 0");
  Tree t;
  for (int v = 0; v < n; v++) t.add_vertex(0);
  const json& edges = need(j, "edges", "$");
  if (!edges.is_array()) fail("$.edges", "expected an array of pairs");
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 2) fail("$.edges", "expected [u, v] pairs");
    int u = e[0].get<int>(), v = e[1].get<int>();
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) fail("$.edges", "endpoint out of range");
    t.add_edge(u, v);
  }
  if (!t.is_forest()) fail("$.edges", "graph is not acyclic");
  auto vertex_of = [&](const std::string& key) {
    int v = -1;
    try {
      v = std::stoi(key);
    } catch (...) {
      v = -1;
    }
    if (v < 0 || v >= n) fail("$.input_labels", "vertex key out of range: " + key);
    return v;
  };
  // names resolve against the alphabet; bare numeric indices are accepted too
  auto resolve = [&](const std::string& name, const std::vector<std::string>* alphabet,
                     const char* where) {
    if (alphabet) {
      auto it = std::find(alphabet->begin(), alphabet->end(), name);
      if (it != alphabet->end()) return (int)(it - alphabet->begin());
    }
    try {
      size_t used = 0;
      int v = std::stoi(name, &used);
      if (used == name.size() && v >= 0 && (!alphabet || v < (int)alphabet->size())) return v;
    } catch (...) {
    }
    fail(where, "unknown label: " + name);
  };
  if (j.contains("input_labels"))
    for (auto& [key, val] : j.at("input_labels").items())
      t.input[vertex_of(key)] =
          resolve(val.get<std::string>(), p ? &p->inputs : nullptr, "$.input_labels");
  if (j.contains("output_labels"))
    for (auto& [key, val] : j.at("output_labels").items()) {
      if (val.is_null()) continue;
      t.output[vertex_of(key)] =
          resolve(val.get<std::string>(), p ? &p->outputs : nullptr, "$.output_labels");
    }
  if (p)
    for (int v = 0; v < n; v++)
      if (t.degree(v) > p->delta) fail("$.edges", "degree bound exceeded at vertex " + std::to_string(v));
  return t;
}

json atm_to_json(const AlternatingTM& m) {
  json j;
  j["format"] = "lct.atm/1";
  json states = json::array();
  static const char* tn[] = {"exists", "forall", "accept", "reject"};
  for (size_t q = 0; q < m.state_names.size(); q++)
    states.push_back({{"name", m.state_names[q]}, {"type", tn[(int)m.state_type[q]]}});
  j["states"] = states;
  auto table = [&](const std::vector<std::array<TmMove, 2>>& d) {
    json t = json::object();
    for (size_t q = 0; q < m.state_names.size(); q++) {
      if (m.halting((int)q)) continue;
      json row = json::object();
      for (int r = 0; r < 2; r++)
        row[std::to_string(r)] = {m.state_names[d[q][r].state], d[q][r].write,
                                  d[q][r].dir > 0 ? "R" : "L"};
      t[m.state_names[q]] = row;
    }
    return t;
  };
  j["delta1"] = table(m.delta1);
  j["delta2"] = table(m.delta2);
  j["q0"] = m.state_names[m.q0];
  j["s"] = m.s;
  return j;
}

AlternatingTM atm_from_json(const json& j) {
  AlternatingTM m;
  const json& states = need(j, "states", "$");
  if (!states.is_array() || states.empty()) fail("$.states", "expected a nonempty array");
  for (const json& st : states) {
    m.state_names.push_back(need(st, "name", "$.states[]").get<std::string>());
    std::string ty = need(st, "type", "$.states[]").get<std::string>();
    if (ty == "exists")
      m.state_type.push_back(StateType::Exists);
    else if (ty == "forall")
      m.state_type.push_back(StateType::Forall);
    else if (ty == "accept")
      m.state_type.push_back(StateType::Accept);
    else if (ty == "reject")
      m.state_type.push_back(StateType::Reject);
    else
      fail("$.states[].type", "expected exists/forall/accept/reject: " + ty);
  }
  m.s = need_int(j, "s", "$");
  m.q0 = m.state_index(need(j, "q0", "$").get<std::string>());
  auto table = [&](const char* key) {
    std::vector<std::array<TmMove, 2>> d(m.state_names.size());
    for (size_t q = 0; q < d.size(); q++) d[q] = {TmMove{(int)q, 0, +1}, TmMove{(int)q, 0, +1}};
    const json& t = need(j, key, "$");
    for (auto& [name, row] : t.items()) {
      int q = m.state_index(name);
      if (m.halting(q)) fail(std::string("$.") + key, "transition row for halting state " + name);
      for (int r = 0; r < 2; r++) {
        const json& mv = need(row, r == 0 ? "0" : "1", std::string("$.") + key + "." + name);
        if (!mv.is_array() || mv.size() != 3)
          fail(std::string("$.") + key, "expected [state, write, dir] triples");
        std::string dir = mv[2].get<std::string>();
        if (dir != "L" && dir != "R") fail(std::string("$.") + key, "dir must be L or R");
        d[q][r] = {m.state_index(mv[0].get<std::string>()), mv[1].get<int>(),
                   dir == "R" ? +1 : -1};
      }
    }
    for (size_t q = 0; q < d.size(); q++)
      if (!m.halting((int)q) && !t.contains(m.state_names[q]))
        fail(std::string("$.") + key, "missing row for state " + m.state_names[q]);
    return d;
  };
  m.delta1 = table("delta1");
  m.delta2 = table("delta2");
  m.validate();
  return m;
}

json witness_to_json(const LabelingFunction& f, const LclProblem& p) {
  json entries = json::array();
  for (const auto& [key, labels] : f.entries) {
    json names = json::array();
    for (Label o : labels) names.push_back(p.outputs.at(o));
    entries.push_back({{"type", key.first}, {"shape", key.second}, {"labels", names}});
  }
  return json{{"entries", entries}};
}

LabelingFunction witness_from_json(const json& j, const LclProblem& p) {
  LabelingFunction f;
  for (const json& e : need(j, "entries", "$.witness")) {
    std::vector<Label> labels;
    for (const json& name : need(e, "labels", "$.witness.entries[]"))
      labels.push_back(p.output_index(name.get<std::string>()));
    f.entries[{need_int(e, "type", "$.witness.entries[]"),
               need(e, "shape", "$.witness.entries[]").get<std::string>()}] = labels;
  }
  return f;
}

}  // namespace lct
