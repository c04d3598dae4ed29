// Normal-form solutions, their restriction to subtrees, and the per-node
// subtree-perfectness decision.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "subtree/choice.hpp"
#include "subtree/trees.hpp"
#include "subtree/uncertainty.hpp"

namespace subtree {

struct NormalFormSolution {
  DecisionTree tree;
  /// Canonical order.
  std::vector<Strategy> strategies;
  Event conditioning;
  std::string choice;
};

/// Enumerates strategies, chooses among their gambles (pointwise-equal
/// gambles on b are merged), and keeps every strategy whose gamble is chosen.
NormalFormSolution normal_form_solution(const DecisionTree& tree, const ChoiceFunction& choice,
                                        const UncertaintyModel& model);
NormalFormSolution normal_form_solution(const DecisionTree& tree, const ChoiceFunction& choice,
                                        const UncertaintyModel& model, Event b);

/// Sub-strategies at node_id of the strategies that contain it, canonical
/// order, duplicates removed. Throws ErrorCode::unknown_node.
std::vector<Strategy> restrict_solution(const NormalFormSolution& sol, std::string_view node_id);

enum class Outcome { vacuous_hold, hold, fail, error };

std::string_view outcome_name(Outcome outcome);

struct PerfectnessVerdict {
  std::string node_id;
  Outcome outcome = Outcome::hold;
  std::vector<Strategy> restricted_solution;
  std::vector<Strategy> local_solution;
  /// Symmetric difference, each side in canonical order.
  std::vector<Strategy> only_restricted;
  std::vector<Strategy> only_local;
  /// Set when outcome is error: the local solve could not be evaluated.
  std::string error;

  bool ok() const { return outcome == Outcome::hold || outcome == Outcome::vacuous_hold; }
  /// Failure in which the two solutions share no strategy at all.
  bool reversal() const;
};

PerfectnessVerdict check_subtree_perfect_at(const DecisionTree& tree, const ChoiceFunction& choice,
                                            const UncertaintyModel& model, std::string_view node_id);

struct PerfectnessReport {
  NormalFormSolution solution;
  /// One per node, preorder.
  std::vector<PerfectnessVerdict> verdicts;
  bool perfect = true;
};

PerfectnessReport check_subtree_perfect(const DecisionTree& tree, const ChoiceFunction& choice,
                                        const UncertaintyModel& model);

/// Verdict at one node given an already computed global solution.
PerfectnessVerdict verdict_at(const NormalFormSolution& global, const ChoiceFunction& choice,
                              const UncertaintyModel& model, std::string_view node_id);

/// Classical rollback keeping every maximizing arc. Joint models must be
/// strictly positive on every chance-node scope.
std::vector<Strategy> backward_induct_eu(const DecisionTree& tree, const ChanceModel& model);

}  // namespace subtree
