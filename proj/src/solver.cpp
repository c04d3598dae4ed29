#include "subtree/solver.hpp"

#include <algorithm>

#include "subtree/error.hpp"

namespace subtree {

NormalFormSolution normal_form_solution(const DecisionTree& tree, const ChoiceFunction& choice,
                                        const UncertaintyModel& model) {
  return normal_form_solution(tree, choice, model, tree.root_scope);
}

NormalFormSolution normal_form_solution(const DecisionTree& tree, const ChoiceFunction& choice,
                                        const UncertaintyModel& model, Event b) {
  std::vector<Strategy> all = enumerate_strategies(tree);
  std::vector<Gamble> distinct;
  std::vector<std::size_t> slot;
  slot.reserve(all.size());
  for (const auto& s : all) {
    Gamble g = gamble_of(s);
    auto it = std::find_if(distinct.begin(), distinct.end(), [&](const Gamble& d) { return d.agrees_on(g, b); });
    slot.push_back(static_cast<std::size_t>(it - distinct.begin()));
    if (it == distinct.end()) distinct.push_back(std::move(g));
  }
  Selection chosen = choice(distinct, model, b);
  std::vector<char> keep(distinct.size());
  for (std::size_t i : chosen) keep[i] = 1;

  NormalFormSolution sol{tree, {}, b, choice.name()};
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (keep[slot[i]]) sol.strategies.push_back(std::move(all[i]));
  }
  canonicalize(sol.strategies);
  return sol;
}

std::vector<Strategy> restrict_solution(const NormalFormSolution& sol, std::string_view node_id) {
  if (!contains_node(sol.tree, node_id)) {
    throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(node_id) + "'");
  }
  std::vector<Strategy> out;
  for (const auto& s : sol.strategies) {
    if (contains_node(s.tree, node_id)) out.push_back(Strategy::from_tree(subtree_at(s.tree, node_id)));
  }
  canonicalize(out);
  return out;
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::vacuous_hold:
      return "vacuous_hold";
    case Outcome::hold:
      return "hold";
    case Outcome::fail:
      return "fail";
    case Outcome::error:
      return "error";
  }
  return "error";
}

bool PerfectnessVerdict::reversal() const {
  return outcome == Outcome::fail && only_restricted.size() == restricted_solution.size() &&
         only_local.size() == local_solution.size();
}

PerfectnessVerdict verdict_at(const NormalFormSolution& global, const ChoiceFunction& choice,
                              const UncertaintyModel& model, std::string_view node_id) {
  PerfectnessVerdict v;
  v.node_id = std::string(node_id);
  v.restricted_solution = restrict_solution(global, node_id);
  if (v.restricted_solution.empty()) {
    v.outcome = Outcome::vacuous_hold;
    return v;
  }
  DecisionTree local = subtree_at(global.tree, node_id);
  try {
    v.local_solution = normal_form_solution(local, choice, model, local.root_scope).strategies;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::zero_probability_condition) throw;
    v.outcome = Outcome::error;
    v.error = e.what();
    return v;
  }
  const auto& r = v.restricted_solution;
  const auto& l = v.local_solution;
  auto less = [](const Strategy& a, const Strategy& b) { return a < b; };
  std::set_difference(r.begin(), r.end(), l.begin(), l.end(), std::back_inserter(v.only_restricted), less);
  std::set_difference(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(v.only_local), less);
  v.outcome = v.only_restricted.empty() && v.only_local.empty() ? Outcome::hold : Outcome::fail;
  return v;
}

PerfectnessVerdict check_subtree_perfect_at(const DecisionTree& tree, const ChoiceFunction& choice,
                                            const UncertaintyModel& model, std::string_view node_id) {
  if (!contains_node(tree, node_id)) {
    throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(node_id) + "'");
  }
  return verdict_at(normal_form_solution(tree, choice, model), choice, model, node_id);
}

PerfectnessReport check_subtree_perfect(const DecisionTree& tree, const ChoiceFunction& choice,
                                        const UncertaintyModel& model) {
  PerfectnessReport report{normal_form_solution(tree, choice, model), {}, true};
  for (const auto& id : node_ids(tree)) {
    report.verdicts.push_back(verdict_at(report.solution, choice, model, id));
    report.perfect = report.perfect && report.verdicts.back().ok();
  }
  return report;
}

namespace {

struct Rollback {
  const ChanceModel& model;
  const SpacePtr& space;

  Rational arc_probability(const Node& n, const Arc& arc, Event scope) const {
    if (const auto* f = std::get_if<TreeFactoredAssessment>(&model)) return f->probability(n.id, arc.index);
    const auto& p = std::get<MassFunction>(model);
    Rational whole = p.probability(scope);
    if (sgn(whole) == 0) {
      throw Error(ErrorCode::zero_probability_condition, "chance node '" + n.id + "' has probability zero");
    }
    return p.probability(scope & arc.event) / whole;
  }

  // Returns the node's value and prunes non-maximizing decision arcs in place.
  Rational solve(Node& n, Event scope) const {
    switch (n.kind) {
      case NodeKind::leaf:
        return std::get<Rational>(n.reward);
      case NodeKind::gamble_leaf:
        return expectation(model, n.gamble, scope);
      case NodeKind::chance: {
        Rational total = 0;
        for (auto& arc : n.arcs) total += arc_probability(n, arc, scope) * solve(arc.child, scope & arc.event);
        return total;
      }
      case NodeKind::decision: {
        std::vector<Rational> values;
        for (auto& arc : n.arcs) values.push_back(solve(arc.child, scope));
        Rational best = *std::max_element(values.begin(), values.end());
        std::vector<Arc> kept;
        for (std::size_t i = 0; i < n.arcs.size(); ++i) {
          if (values[i] == best) kept.push_back(std::move(n.arcs[i]));
        }
        n.arcs = std::move(kept);
        return best;
      }
    }
    return 0;
  }
};

}  // namespace

std::vector<Strategy> backward_induct_eu(const DecisionTree& tree, const ChanceModel& model) {
  if (std::holds_alternative<NoChance>(model)) {
    throw Error(ErrorCode::mode_unsupported, "backward induction needs a joint or factored model");
  }
  if (reward_kind(tree) != RewardKind::numeric) {
    throw Error(ErrorCode::mixed_reward_kinds, "backward induction needs numeric rewards");
  }
  DecisionTree pruned = tree;
  Rollback{model, tree.space}.solve(pruned.root, pruned.root_scope);
  std::vector<Strategy> out = enumerate_strategies(pruned);
  canonicalize(out);
  return out;
}

}  // namespace subtree
