// JSON problem and model files.
//
// Problem file:
//   { "atoms": ["E1","E2"],
//     "events": {"A1": ["E1"]},            optional
//     "root_scope": "Omega",               optional, event reference
//     "prune": "reject" | "auto",          optional
//     "tree": node }
//   node: {"id": "N", "kind": "decision", "children": [{"label": "d1", "node": node}, ...]}
//         {"id": "C", "kind": "chance", "children": [{"event": ref, "label": "E1", "node": node}, ...]}
//         {"id": "L", "kind": "leaf", "reward": 2}  or  {"reward_label": "r1"}
//         {"id": "G", "kind": "gamble", "gamble": {ref: value, ...}}  or  "gamble_labels"
//   ref: an event name, "Omega", an atom name, or a list of atom names.
//
// Model file, by "mode":
//   joint      {"mass": {atom: p}}
//   factored   {"arcs": {node_id: [p per arc]}}
//   credal     {"members": [{atom: p}, ...]}
//              {"product": {"partition": [ref], "marginals": [[p per cell]],
//                           "conditionals": [[{atom: p}] per cell]}}
//   utilities  {"functions": [{label: u}], "chance": model}
//   none
//
// Numbers are JSON integers or strings holding an integer, "p/q" or a finite
// decimal; JSON floating-point literals are rejected.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "subtree/trees.hpp"
#include "subtree/uncertainty.hpp"

namespace subtree {

struct Problem {
  SpacePtr space;
  std::map<std::string, Event> events;
  PruneMode prune = PruneMode::reject;
  std::shared_ptr<const DecisionTree> tree;
};

Problem parse_problem(std::string_view text);
Problem load_problem(const std::string& path);
std::string serialize_problem(const Problem& problem);

/// Event name, "Omega", an atom, or a comma-separated atom list.
Event resolve_event(const Problem& problem, std::string_view ref);

UncertaintyModel parse_model(std::string_view text, const Problem& problem);
UncertaintyModel load_model(const std::string& path, const Problem& problem);
std::string serialize_model(const UncertaintyModel& model);

/// Deep structural equality, used by the round-trip checks.
bool identical(const DecisionTree& a, const DecisionTree& b);
bool identical(const Problem& a, const Problem& b);
bool identical(const UncertaintyModel& a, const UncertaintyModel& b);

std::string read_file(const std::string& path);

}  // namespace subtree
