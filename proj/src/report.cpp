#include "subtree/report.hpp"

#include <algorithm>
#include <sstream>

#include "subtree/error.hpp"

namespace subtree {

using nlohmann::json;

namespace {

const std::string kDeleted = "∥";

// Strategies prune arcs, so labels of the deleted ones come from the full tree.
const Node* original(const DecisionTree& tree, const std::string& id) { return find_node(tree, id); }

json scores_json(const std::vector<std::pair<std::string, Rational>>& scores) {
  json out = json::object();
  for (const auto& [name, value] : scores) out[name] = to_fraction_string(value);
  return out;
}

std::string scores_text(const std::vector<std::pair<std::string, Rational>>& scores) {
  std::string out;
  for (const auto& [name, value] : scores) out += "  " + name + "=" + to_short_string(value);
  return out;
}

std::vector<std::pair<std::string, Rational>> safe_scores(const ChoiceFunction& choice, const Gamble& g,
                                                          const UncertaintyModel& model, Event b) {
  try {
    return choice.scores(g, model, b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::zero_probability_condition) throw;
    return {};
  }
}

std::size_t position(const std::vector<Strategy>& all, const Strategy& s) {
  auto it = std::find(all.begin(), all.end(), s);
  return static_cast<std::size_t>(it - all.begin()) + 1;
}

json strategy_list(const DecisionTree& tree, const std::vector<Strategy>& ss) {
  json out = json::array();
  for (const auto& s : ss) out.push_back(strategy_json(tree, s));
  return out;
}

std::string event_text(const PossibilitySpace& space, Event e) { return space.describe(e); }

json event_list(const PossibilitySpace& space, Event e) {
  json out = json::array();
  e.for_each([&](std::size_t i) { out.push_back(space.atom(i)); });
  return out;
}

}  // namespace

std::string strategy_path(const DecisionTree& tree, const Strategy& s) {
  if (s.choices.empty()) return "(no decisions)";
  std::string out;
  for (const auto& c : s.choices) {
    if (!out.empty()) out += "; ";
    const Node* n = original(tree, c.node_id);
    std::string kept;
    std::string deleted;
    for (const auto& arc : n->arcs) {
      if (arc.index == c.arc) {
        kept = arc.label;
      } else {
        deleted += " " + kDeleted + arc.label;
      }
    }
    out += c.node_id + ":" + kept + deleted;
  }
  return out;
}

json gamble_json(const PossibilitySpace& space, const Gamble& g) {
  json out = json::object();
  g.scope().for_each([&](std::size_t i) {
    const Reward& r = g.at(i);
    out[space.atom(i)] = is_numeric(r) ? json(to_fraction_string(std::get<Rational>(r))) : json(std::get<std::string>(r));
  });
  return out;
}

json strategy_json(const DecisionTree& tree, const Strategy& s) {
  json choices = json::array();
  for (const auto& c : s.choices) {
    const Node* n = original(tree, c.node_id);
    json deleted = json::array();
    std::string kept;
    for (const auto& arc : n->arcs) {
      if (arc.index == c.arc) {
        kept = arc.label;
      } else {
        deleted.push_back(arc.label);
      }
    }
    choices.push_back(json{{"node", c.node_id}, {"kept", kept}, {"deleted", deleted}});
  }
  return json{{"root", s.tree.root.id},
              {"choices", choices},
              {"path", strategy_path(tree, s)},
              {"gamble", gamble_json(*tree.space, gamble_of(s))}};
}

json strategies_json(const Problem& problem) {
  const auto all = enumerate_strategies(*problem.tree);
  return json{{"command", "strategies"}, {"count", all.size()}, {"strategies", strategy_list(*problem.tree, all)}};
}

std::string strategies_text(const Problem& problem) {
  const auto all = enumerate_strategies(*problem.tree);
  std::ostringstream out;
  out << "strategies: " << all.size() << "\n";
  for (std::size_t i = 0; i < all.size(); ++i) out << "  [" << i + 1 << "] " << strategy_path(*problem.tree, all[i]) << "\n";
  return out.str();
}

SolveResult solve(const DecisionTree& tree, const ChoiceFunction& choice, const UncertaintyModel& model, Event b) {
  SolveResult r;
  r.all = enumerate_strategies(tree);
  canonicalize(r.all);
  for (const auto& s : r.all) r.scores.push_back(safe_scores(choice, gamble_of(s), model, b));
  r.solution = normal_form_solution(tree, choice, model, b);
  return r;
}

json solve_json(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                const SolveResult& result) {
  const DecisionTree& tree = *problem.tree;
  json strategies = json::array();
  for (std::size_t i = 0; i < result.all.size(); ++i) {
    json s = strategy_json(tree, result.all[i]);
    s["index"] = i + 1;
    s["scores"] = scores_json(result.scores[i]);
    s["chosen"] = std::find(result.solution.strategies.begin(), result.solution.strategies.end(), result.all[i]) !=
                  result.solution.strategies.end();
    strategies.push_back(std::move(s));
  }
  json solution = json::array();
  for (const auto& s : result.solution.strategies) solution.push_back(position(result.all, s));
  return json{{"command", "solve"},
              {"choice", choice.name()},
              {"model", model_mode_name(mode_of(model))},
              {"condition", event_list(*tree.space, result.solution.conditioning)},
              {"strategies", strategies},
              {"solution", solution}};
}

std::string solve_text(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                       const SolveResult& result) {
  const DecisionTree& tree = *problem.tree;
  std::ostringstream out;
  out << "choice: " << choice.name() << " (model: " << model_mode_name(mode_of(model)) << ")\n";
  out << "condition: " << event_text(*tree.space, result.solution.conditioning) << "\n";
  out << "strategies: " << result.all.size() << "\n";
  for (std::size_t i = 0; i < result.all.size(); ++i) {
    out << "  [" << i + 1 << "] " << strategy_path(tree, result.all[i]) << scores_text(result.scores[i]) << "\n";
  }
  out << "solution:";
  for (const auto& s : result.solution.strategies) out << " [" << position(result.all, s) << "]";
  out << "\n";
  return out.str();
}

json verdict_json(const DecisionTree& tree, const ChoiceFunction& choice, const UncertaintyModel& model,
                  const PerfectnessVerdict& v) {
  json out{{"node", v.node_id},
           {"outcome", outcome_name(v.outcome)},
           {"restricted", strategy_list(tree, v.restricted_solution)},
           {"local", strategy_list(tree, v.local_solution)},
           {"only_restricted", strategy_list(tree, v.only_restricted)},
           {"only_local", strategy_list(tree, v.only_local)}};
  if (v.outcome == Outcome::error) out["error"] = v.error;
  if (v.outcome == Outcome::fail) out["reversal"] = v.reversal();
  if (v.outcome != Outcome::vacuous_hold) {
    // The local strategies with the numbers each side looked at.
    DecisionTree sub = subtree_at(tree, v.node_id);
    auto subs = enumerate_strategies(sub);
    if (subs.size() > 1) {
      json table = json::array();
      for (const auto& s : subs) {
        Gamble g = gamble_of(s);
        json row{{"path", strategy_path(tree, s)},
                 {"local_scores", scores_json(safe_scores(choice, g, model, sub.root_scope))},
                 {"in_local", std::find(v.local_solution.begin(), v.local_solution.end(), s) != v.local_solution.end()},
                 {"in_restricted", std::find(v.restricted_solution.begin(), v.restricted_solution.end(), s) !=
                                       v.restricted_solution.end()}};
        table.push_back(std::move(row));
      }
      out["subtree"] = std::move(table);
    }
  }
  return out;
}

std::string verdict_text(const DecisionTree& tree, const PerfectnessVerdict& v) {
  std::ostringstream out;
  out << v.node_id << ": " << outcome_name(v.outcome);
  if (v.outcome == Outcome::error) out << " (" << v.error << ")";
  if (v.outcome == Outcome::fail && v.reversal()) out << " (preference reversal)";
  out << "\n";
  if (v.outcome == Outcome::fail) {
    for (const auto& s : v.only_restricted) out << "    only in restricted solution: " << strategy_path(tree, s) << "\n";
    for (const auto& s : v.only_local) out << "    only in local solution: " << strategy_path(tree, s) << "\n";
  }
  return out.str();
}

json check_json(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                const PerfectnessReport& report) {
  const DecisionTree& tree = *problem.tree;
  json verdicts = json::array();
  for (const auto& v : report.verdicts) verdicts.push_back(verdict_json(tree, choice, model, v));
  json global = json::array();
  for (const auto& s : enumerate_strategies(tree)) {
    json row = strategy_json(tree, s);
    row["scores"] = scores_json(safe_scores(choice, gamble_of(s), model, tree.root_scope));
    global.push_back(std::move(row));
  }
  return json{{"command", "check"},
              {"choice", choice.name()},
              {"model", model_mode_name(mode_of(model))},
              {"perfect", report.perfect},
              {"strategies", global},
              {"solution", strategy_list(tree, report.solution.strategies)},
              {"verdicts", verdicts}};
}

std::string check_text(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                       const PerfectnessReport& report) {
  const DecisionTree& tree = *problem.tree;
  std::ostringstream out;
  out << "choice: " << choice.name() << " (model: " << model_mode_name(mode_of(model)) << ")\n";
  out << "solution:\n";
  for (const auto& s : report.solution.strategies) out << "  " << strategy_path(tree, s) << "\n";
  out << "verdicts:\n";
  for (const auto& v : report.verdicts) out << "  " << verdict_text(tree, v);
  out << "subtree perfect: " << (report.perfect ? "yes" : "no") << "\n";
  return out.str();
}

json canonical_json(const SpacePtr& space, const std::vector<Gamble>& pool, const CanonicalReport& report) {
  json out{{"command", "canonical"},
           {"passed", report.passed},
           {"exhausted", report.exhausted},
           {"instances", report.instances},
           {"pool_size", pool.size()},
           {"summary", report.summary}};
  if (report.failure) {
    const auto& f = *report.failure;
    auto gambles = [&](const std::vector<std::size_t>& idx) {
      json list = json::array();
      for (std::size_t i : idx) list.push_back(gamble_json(*space, pool[i]));
      return list;
    };
    json fj{{"shape", f.shape == CanonicalShape::a ? "a" : "b"},
            {"B", event_list(*space, f.b)},
            {"xs", gambles(f.xs)}};
    fj["verdict"] = json{{"node", f.verdict.node_id},
                         {"outcome", outcome_name(f.verdict.outcome)},
                         {"only_restricted", strategy_list(f.tree, f.verdict.only_restricted)},
                         {"only_local", strategy_list(f.tree, f.verdict.only_local)}};
    if (f.shape == CanonicalShape::a) {
      fj["A"] = event_list(*space, f.a);
      fj["z"] = gamble_json(*space, pool[*f.z]);
    } else {
      fj["ys"] = gambles(f.ys);
    }
    out["failure"] = std::move(fj);
  }
  return out;
}

std::string canonical_text(const SpacePtr& space, const std::vector<Gamble>& pool, const CanonicalReport& report) {
  std::ostringstream out;
  out << "instances: " << report.instances << (report.exhausted ? "" : " (budget reached)") << "\n";
  out << "pool: " << pool.size() << " gambles\n";
  out << report.summary << "\n";
  if (report.failure) {
    const auto& f = *report.failure;
    auto show = [&](const char* name, const std::vector<std::size_t>& idx) {
      for (std::size_t i : idx) {
        out << "  " << name << ":";
        pool[i].scope().for_each([&](std::size_t w) {
          if (f.b.contains(w)) out << " " << space->atom(w) << "=" << reward_text(pool[i].at(w));
        });
        out << "\n";
      }
    };
    show("x", f.xs);
    if (f.shape == CanonicalShape::b) show("y", f.ys);
    if (f.z) show("z", {*f.z});
    out << "  " << verdict_text(f.tree, f.verdict);
  }
  return out.str();
}

json fuzz_json(const FuzzReport& report) {
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back(json{{"index", f.index},
                            {"failing_nodes", f.failing_nodes},
                            {"nested_decision", f.nested_decision},
                            {"reduction", reduction_name(f.reduction)},
                            {"reduction_instances", f.reduction_instances},
                            {"witness", f.witness}});
  }
  return json{{"command", "fuzz"},
              {"choice", report.choice},
              {"sampler", report.sampler},
              {"trees", report.trees},
              {"error_trees", report.error_trees},
              {"failing_trees", report.failures.size()},
              {"found_b", report.count(Reduction::found_b)},
              {"found_a", report.count(Reduction::found_a)},
              {"miss", report.count(Reduction::miss)},
              {"budget", report.count(Reduction::budget)},
              {"theorem_inconsistency", report.count(Reduction::inconsistency)},
              {"failures", failures}};
}

std::vector<Gamble> substrategy_gambles(const DecisionTree& tree) {
  std::vector<Gamble> pool;
  for (const auto& id : node_ids(tree)) {
    for (const auto& s : enumerate_strategies(subtree_at(tree, id))) {
      Gamble g = gamble_of(s);
      if (std::find(pool.begin(), pool.end(), g) == pool.end()) pool.push_back(std::move(g));
    }
  }
  return pool;
}

}  // namespace subtree
