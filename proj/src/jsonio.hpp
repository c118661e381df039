#pragma once

#include <json.hpp>

#include "atm.hpp"
#include "classes.hpp"
#include "core.hpp"

namespace lct {

// Problem files: {"format": "lct.problem/1", "radius", "delta", "inputs",
// "outputs", "constraints": [r1 keys or ball serials] | null, "allow_all"?,
// "machine"?: embedded ATM for predicate-backed compiled problems}.
nlohmann::json problem_to_json(const LclProblem& p);
LclProblem problem_from_json(const nlohmann::json& j);

// Tree files: {"format": "lct.tree/1", "n", "edges": [[u,v]],
// "input_labels": {"v": name}, "output_labels": {"v": name|null}}.
// Label names resolve against `p` when given; otherwise inputs default to 0
// and named labels are rejected.
nlohmann::json tree_to_json(const Tree& t, const LclProblem* p = nullptr);
Tree tree_from_json(const nlohmann::json& j, const LclProblem* p = nullptr);

// Machine files: {"format": "lct.atm/1", "states": [{"name", "type"}],
// "delta1": {state: {"0": [next, write, "L"|"R"], "1": ...}}, "delta2": ...,
// "q0", "s"}. Halting states may omit their rows.
nlohmann::json atm_to_json(const AlternatingTM& m);
AlternatingTM atm_from_json(const nlohmann::json& j);

// Witness function: {"entries": [{"type", "shape", "labels": [names]}]}.
nlohmann::json witness_to_json(const LabelingFunction& f, const LclProblem& p);
LabelingFunction witness_from_json(const nlohmann::json& j, const LclProblem& p);

// Embedded machine problems re-compile with these fixed base problems.
LclProblem hardness_base_p1();
LclProblem hardness_base_p2();

}  // namespace lct
