// Structured (key-sorted JSON) and text renderings of strategies, solutions,
// verdicts and reports. Rationals appear as "p/q" strings in structured form.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subtree/choice.hpp"
#include "subtree/io.hpp"
#include "subtree/solver.hpp"
#include "subtree/theoremlab.hpp"

namespace subtree {

/// "N1:dS ∥dSbar; N1(1)[1]:d1 ∥d2", or "(no decisions)".
std::string strategy_path(const DecisionTree& tree, const Strategy& s);

nlohmann::json strategy_json(const DecisionTree& tree, const Strategy& s);
nlohmann::json gamble_json(const PossibilitySpace& space, const Gamble& g);

nlohmann::json strategies_json(const Problem& problem);
std::string strategies_text(const Problem& problem);

struct SolveResult {
  std::vector<Strategy> all;
  /// Per strategy, the numbers the choice looked at.
  std::vector<std::vector<std::pair<std::string, Rational>>> scores;
  NormalFormSolution solution;
};

SolveResult solve(const DecisionTree& tree, const ChoiceFunction& choice, const UncertaintyModel& model, Event b);

nlohmann::json solve_json(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                          const SolveResult& result);
std::string solve_text(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                       const SolveResult& result);

nlohmann::json verdict_json(const DecisionTree& tree, const ChoiceFunction& choice, const UncertaintyModel& model,
                            const PerfectnessVerdict& v);
nlohmann::json check_json(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                          const PerfectnessReport& report);
std::string check_text(const Problem& problem, const ChoiceFunction& choice, const UncertaintyModel& model,
                       const PerfectnessReport& report);
std::string verdict_text(const DecisionTree& tree, const PerfectnessVerdict& v);

nlohmann::json canonical_json(const SpacePtr& space, const std::vector<Gamble>& pool, const CanonicalReport& report);
std::string canonical_text(const SpacePtr& space, const std::vector<Gamble>& pool, const CanonicalReport& report);

nlohmann::json fuzz_json(const FuzzReport& report);

/// Every distinct sub-strategy gamble of the tree, nodes in preorder.
std::vector<Gamble> substrategy_gambles(const DecisionTree& tree);

}  // namespace subtree
