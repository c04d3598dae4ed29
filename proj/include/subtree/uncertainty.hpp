// Probability and utility models: joint mass functions, tree-factored arc
// conditionals, finite credal sets with lower/upper envelopes, the
// partition product construction, and sets of utility functions.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "subtree/rational.hpp"
#include "subtree/trees.hpp"

namespace subtree {

/// Exact probability mass over the atoms of a space; sums to exactly one.
class MassFunction {
 public:
  MassFunction(SpacePtr space, std::vector<Rational> mass);

  const SpacePtr& space() const { return space_; }
  const Rational& operator[](std::size_t atom) const { return mass_.at(atom); }
  const std::vector<Rational>& masses() const { return mass_; }
  Rational probability(Event e) const;
  bool strictly_positive() const;

  friend bool operator==(const MassFunction& a, const MassFunction& b) { return a.mass_ == b.mass_; }

 private:
  SpacePtr space_;
  std::vector<Rational> mass_;
};

/// Sum over b of x(ω)p(ω), divided by p(b).
Rational expectation(const MassFunction& p, const Gamble& x, Event b);

/// A nonempty finite list of mass functions over one space. Convexity is not
/// imposed; envelopes are exact minima and maxima over the list.
class CredalSet {
 public:
  explicit CredalSet(std::vector<MassFunction> members);

  const std::vector<MassFunction>& members() const { return members_; }
  /// Every member gives every atom strictly positive mass.
  bool positivity_checked() const { return positive_; }
  const SpacePtr& space() const { return members_.front().space(); }

 private:
  std::vector<MassFunction> members_;
  bool positive_ = false;
};

Rational lower_expectation(const CredalSet& m, const Gamble& x, Event b);
Rational upper_expectation(const CredalSet& m, const Gamble& x, Event b);

/// One combination of a marginal over the partition cells with one
/// conditional per cell, for every combination, combined by the chain rule.
/// `marginals` are over a space whose atoms index the cells in order;
/// `conditionals[c]` are over the full space and supported on cell c.
CredalSet product_credal(const std::vector<Event>& partition,
                         const std::vector<MassFunction>& marginals,
                         const std::vector<std::vector<MassFunction>>& conditionals);

/// Conditional probabilities on the chance arcs of one tree. Zero arc
/// probabilities are allowed; conditioning below them stays well defined.
class TreeFactoredAssessment {
 public:
  /// `arc_prob[node_id][arc.index]`; every chance node of the tree must be
  /// covered and its present arcs must sum to exactly one.
  TreeFactoredAssessment(std::shared_ptr<const DecisionTree> tree,
                         std::map<std::string, std::vector<Rational>> arc_prob);

  const DecisionTree& tree() const { return *tree_; }
  const std::map<std::string, std::vector<Rational>>& arc_probabilities() const { return arc_prob_; }
  /// Throws ErrorCode::missing_arc_probability.
  const Rational& probability(const std::string& node_id, std::size_t arc_index) const;

 private:
  std::shared_ptr<const DecisionTree> tree_;
  std::map<std::string, std::vector<Rational>> arc_prob_;
};

/// Value of the sub-strategy rooted at node_id, rolling arc probabilities
/// back from the leaves.
Rational factored_expectation(const TreeFactoredAssessment& a, const Strategy& s,
                              std::string_view node_id);

/// Measure over a partition of a conditioning event into cells, as induced
/// by a factored assessment below some node.
struct CellMeasure {
  std::vector<std::pair<Event, Rational>> cells;
};

/// The conditional measure a factored assessment assigns given b: taken at
/// the first node (preorder) whose path event is b. Decision branches below it
/// must induce nested chance partitions with matching masses.
CellMeasure conditional_measure(const TreeFactoredAssessment& a, Event b);

/// Expectation of x given b under the factored assessment. x must be constant
/// on every positive-mass cell of conditional_measure(a, b).
Rational expectation(const TreeFactoredAssessment& a, const Gamble& x, Event b);

/// Finite set of utility functions over reward labels.
struct UtilityFunctionSet {
  std::vector<std::map<std::string, Rational>> functions;
};

/// No probabilistic structure: gambles must be constant on the conditioning
/// event (the degenerate decision-only case).
struct NoChance {};

using ChanceModel = std::variant<NoChance, MassFunction, TreeFactoredAssessment>;

/// Precise conditional expectation under any chance model.
Rational expectation(const ChanceModel& chance, const Gamble& x, Event b);

/// Numeric gamble u∘x on x's scope. Throws ErrorCode::unknown_label.
Gamble relabel(const std::map<std::string, Rational>& utility, const Gamble& x);

/// One expectation per utility function for the strategy's gamble,
/// conditional on the strategy's root scope.
std::vector<Rational> utility_expectations(const UtilityFunctionSet& u, const ChanceModel& chance,
                                           const Strategy& s);

struct UtilityModel {
  UtilityFunctionSet utilities;
  ChanceModel chance = NoChance{};
};

struct NoModel {};

using UncertaintyModel =
    std::variant<NoModel, MassFunction, TreeFactoredAssessment, CredalSet, UtilityModel>;

enum class ModelMode { none, joint, factored, credal, utilities };

ModelMode mode_of(const UncertaintyModel& model);
std::string_view model_mode_name(ModelMode mode);

}  // namespace subtree
