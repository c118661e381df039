#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "gap.hpp"
#include "jsonio.hpp"
#include "localsim.hpp"
#include "runner.hpp"

using nlohmann::json;
using namespace lct;

namespace {

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
  return j;
}

void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + out_path);
    out << text;
  }
}

GapOptions gap_options(int w, long long build_budget, long long class_budget) {
  GapOptions o;
  o.w = w;
  if (build_budget > 0) o.build_budget = build_budget;
  if (class_budget > 0) o.class_budget = class_budget;
  return o;
}

json verdict_to_json(const GapVerdict& v, const LclProblem& p) {
  json j;
  j["format"] = "lct.verdict/1";
  j["k"] = v.k;
  j["verdict"] = v.upper ? "upper" : "lower";
  j["bound"] = v.upper ? "O(n^{1/k})" : "Omega(n^{1/(k-1)})";
  if (v.upper) j["witness"] = witness_to_json(v.witness, p);
  j["searched"] = v.searched;
  j["entry_slots"] = v.entry_slots;
  j["candidates_per_slot"] = v.candidates_per_slot;
  j["certificate"] = v.certificate;
  return j;
}

json layers_json(const Decomposition& d) {
  json layers = json::array();
  for (int tag : d.layer) layers.push_back(tag);
  return layers;
}

std::vector<Attach> parse_attach(const std::string& s) {
  std::vector<Attach> out;
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    if (c == 'e' || c == 'E')
      out.push_back(Attach::Exact);
    else if (c == 'c' || c == 'C')
      out.push_back(Attach::Corrupted);
    else if (c == 'n' || c == 'N')
      out.push_back(Attach::None);
    else
      throw DomainError(std::string("attach spec: expected e/c/n, got ") + c);
  }
  if (out.empty()) throw DomainError("attach spec is empty");
  return out;
}

std::vector<int> parse_bits(const std::string& s) {
  std::vector<int> x;
  for (char c : s) {
    if (c != '0' && c != '1') throw DomainError("machine input must be a 0/1 string");
    x.push_back(c - '0');
  }
  return x;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complexity-gap machinery for LCL problems on bounded-degree trees"};
  app.require_subcommand(1);

  std::string problem_path, tree_path, machine_path, f_path, out_path, dot_path;
  std::string input_bits, attach_spec = "e", alg = "decomposition";
  int k = 2, gamma = 1, ell = 1, w = -1;
  long long build_budget = 0, class_budget = 0;
  std::uint64_t seed = 1;

  auto add_out = [&](CLI::App* c) { c->add_option("--out", out_path, "write artifact here"); };

  CLI::App* c_info = app.add_subcommand("info", "problem parameters and size bounds");
  c_info->add_option("--problem", problem_path)->required();
  add_out(c_info);

  CLI::App* c_decide = app.add_subcommand("decide", "which side of the complexity gap");
  c_decide->add_option("--problem", problem_path)->required();
  c_decide->add_option("--k", k)->required();
  c_decide->add_option("--w", w, "width override");
  c_decide->add_option("--build-budget", build_budget);
  c_decide->add_option("--class-budget", class_budget);
  add_out(c_decide);

  CLI::App* c_dec = app.add_subcommand("decompose", "sequential (gamma, ell)-decomposition");
  c_dec->add_option("--tree", tree_path)->required();
  c_dec->add_option("--gamma", gamma)->required();
  c_dec->add_option("--ell", ell)->required();
  c_dec->add_option("--seed", seed);
  c_dec->add_option("--dot", dot_path, "DOT export colored by layer");
  add_out(c_dec);

  CLI::App* c_sim = app.add_subcommand("simulate", "run a built-in distributed algorithm");
  c_sim->add_option("--tree", tree_path)->required();
  c_sim->add_option("--alg", alg, "built-in algorithm (decomposition)");
  c_sim->add_option("--gamma", gamma)->required();
  c_sim->add_option("--ell", ell)->required();
  c_sim->add_option("--seed", seed);

  CLI::App* c_can = app.add_subcommand("canonical", "run the canonical upper-bound algorithm");
  c_can->add_option("--problem", problem_path)->required();
  c_can->add_option("--k", k)->required();
  c_can->add_option("--tree", tree_path)->required();
  c_can->add_option("--f", f_path, "witness function (defaults to deciding first)");
  c_can->add_option("--w", w);
  c_can->add_option("--build-budget", build_budget);
  c_can->add_option("--class-budget", class_budget);
  add_out(c_can);

  CLI::App* c_compile = app.add_subcommand("compile-atm", "compile a machine into an LCL problem");
  c_compile->add_option("--machine", machine_path)->required();
  c_compile->add_option("--input", input_bits)->required();
  add_out(c_compile);

  CLI::App* c_hard = app.add_subcommand("check-hardness", "marking semantics on built instances");
  c_hard->add_option("--machine", machine_path)->required();
  c_hard->add_option("--input", input_bits)->required();
  c_hard->add_option("--attach", attach_spec, "per-host list of e(xact)/c(orrupted)/n(one)");
  c_hard->add_option("--seed", seed);
  add_out(c_hard);

  CLI::App* c_verify = app.add_subcommand("verify", "check a labeled tree against a problem");
  c_verify->add_option("--problem", problem_path)->required();
  c_verify->add_option("--tree", tree_path)->required();
  add_out(c_verify);

  CLI::App* c_classes = app.add_subcommand("classes", "interned signature tables");
  c_classes->add_option("--problem", problem_path)->required();
  c_classes->add_option("--k", k);
  c_classes->add_flag("--dump", "emit the full signature tables");
  add_out(c_classes);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_info) {
      LclProblem p = problem_from_json(read_file(problem_path));
      json j;
      j["format"] = "lct.info/1";
      j["radius"] = p.radius;
      j["delta"] = p.delta;
      j["n_inputs"] = p.inputs.size();
      j["n_outputs"] = p.outputs.size();
      j["description_length_bound"] = description_length_bound(p);
      emit(j, out_path);
    } else if (*c_decide) {
      LclProblem p = problem_from_json(read_file(problem_path));
      GapVerdict v = decide_gap(p, k, gap_options(w, build_budget, class_budget));
      emit(verdict_to_json(v, p), out_path);
    } else if (*c_dec) {
      Tree t = tree_from_json(read_file(tree_path));
      std::vector<long long> ids = assign_ids(t, seed);
      DecompositionStats stats;
      Decomposition d = decompose(t, gamma, ell, ids, &stats);
      json j;
      j["format"] = "lct.decomposition/1";
      j["gamma"] = d.gamma;
      j["ell"] = d.ell;
      j["L"] = d.L;
      j["layers"] = layers_json(d);
      json iters = json::array();
      for (const IterationStats& it : stats.iters)
        iters.push_back({{"alive_before", it.alive_before}, {"A", it.A}, {"B", it.B}, {"S", it.S}});
      j["stats"] = {{"iters", iters}};
      j["violations"] = verify_decomposition(t, d);
      emit(j, out_path);
      if (!dot_path.empty()) {
        std::ofstream dot(dot_path);
        dot << "graph decomposition {\n";
        for (int v = 0; v < t.n; v++)
          dot << "  v" << v << " [label=\"" << d.layer[v] << "\" colorscheme=set312 style=filled"
              << " fillcolor=" << (d.layer[v] % 12 + 1) << "];\n";
        for (int u = 0; u < t.n; u++)
          for (int v : t.adj[u])
            if (u < v) dot << "  v" << u << " -- v" << v << ";\n";
        dot << "}\n";
      }
    } else if (*c_sim) {
      if (alg != "decomposition") throw DomainError("unknown algorithm: " + alg);
      Tree t = tree_from_json(read_file(tree_path));
      Network net;
      net.tree = t;
      net.id = assign_ids(t, seed);
      net.n_claimed = t.n;
      std::cout << json{{"format", "lct.trace/1"}, {"alg", alg}, {"n", t.n},
                        {"gamma", gamma}, {"ell", ell}}
                       .dump()
                << "\n";
      auto [d, rounds] = simulate_decomposition(net, gamma, ell);
      std::cout << json{{"event", "done"}, {"rounds", rounds}, {"L", d.L},
                        {"layers", layers_json(d)}}
                       .dump()
                << "\n";
    } else if (*c_can) {
      LclProblem p = problem_from_json(read_file(problem_path));
      Tree t = tree_from_json(read_file(tree_path), &p);
      GapOptions opts = gap_options(w, build_budget, class_budget);
      LabelingFunction f;
      if (!f_path.empty()) {
        f = witness_from_json(read_file(f_path), p);
      } else {
        GapVerdict v = decide_gap(p, k, opts);
        if (!v.upper) throw DomainError("problem sits on the lower-bound side at this k");
        f = v.witness;
      }
      RunResult r = run_canonical(p, t, k, f, opts);
      Tree labeled = t;
      labeled.output = r.labeling;
      json j;
      j["format"] = "lct.run/1";
      j["rounds_used"] = r.rounds_used;
      j["L"] = r.decomp.L;
      j["legal"] = is_legal(p, labeled);
      j["tree"] = tree_to_json(labeled, &p);
      emit(j, out_path);
    } else if (*c_compile) {
      AlternatingTM m = atm_from_json(read_file(machine_path));
      std::vector<int> x = parse_bits(input_bits);
      HardnessLcl h = compile_lcl(m, x, hardness_base_p1(), hardness_base_p2());
      json j = problem_to_json(h.problem);
      j["machine"] = atm_to_json(m);
      j["machine"]["input"] = input_bits;
      j["layout"] = {{"main_inputs", h.main_inputs},
                     {"marked_outputs", h.o1},
                     {"unmarked_outputs", h.o2},
                     {"aux_outputs", h.aux_outs.size()},
                     {"machine_accepts", h.machine_accepts}};
      emit(j, out_path);
    } else if (*c_hard) {
      AlternatingTM m = atm_from_json(read_file(machine_path));
      std::vector<int> x = parse_bits(input_bits);
      HardnessLcl h = compile_lcl(m, x, hardness_base_p1(), hardness_base_p2());
      std::vector<Attach> attach = parse_attach(attach_spec);
      Tree host;
      for (size_t i = 0; i < attach.size(); i++) host.add_vertex(h.main_input_id(0, 0));
      for (size_t i = 1; i < attach.size(); i++) host.add_edge((int)i - 1, (int)i);
      Tree inst = make_instance(h, host, attach, seed);
      MarkingReport rep = check_marking_semantics(h, inst);
      json rows = json::array();
      for (const MarkingRow& r : rep.rows)
        rows.push_back({{"v", r.v}, {"good", r.good}, {"star", r.star}});
      emit(json{{"format", "lct.marking/1"},
                {"machine_accepts", h.machine_accepts},
                {"instance_n", inst.n},
                {"rows", rows},
                {"ok", rep.ok}},
           out_path);
    } else if (*c_verify) {
      LclProblem p = problem_from_json(read_file(problem_path));
      Tree t = tree_from_json(read_file(tree_path), &p);
      bool legal = t.completely_labeled() && is_legal(p, t);
      emit(json{{"format", "lct.verify/1"}, {"legal", legal}}, out_path);
      if (!legal) return 1;
    } else if (*c_classes) {
      LclProblem p = problem_from_json(read_file(problem_path));
      ClassMachine m(p);
      LabelingFunction empty;
      build_hierarchy(m, k, empty);  // populate the interner
      json cj = json::array(), tj = json::array();
      for (int i = 0; i < m.class_count(); i++) cj.push_back({{"id", i}, {"key", m.cls(i).key()}});
      for (int i = 0; i < m.type_count(); i++) tj.push_back({{"id", i}, {"key", m.type(i).key()}});
      emit(json{{"format", "lct.classes/1"},
                {"ell_pump", m.ell_pump_value()},
                {"classes", cj},
                {"types", tj}},
           out_path);
    }
  } catch (const BudgetError& e) {
    std::cerr << json{{"error", "budget"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "input"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
