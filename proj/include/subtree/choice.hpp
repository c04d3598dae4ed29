// Conditional choice functions on finite gamble sets.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subtree/trees.hpp"
#include "subtree/uncertainty.hpp"

namespace subtree {

/// Indices into the input list, ascending.
using Selection = std::vector<std::size_t>;

enum class ChoiceKind {
  eu,
  maximin,
  gamma_maximin,
  gamma_maximax,
  maximality,
  e_admissible_vertex,
  e_admissible_hull,
  interval_dominance,
  pointwise_dominance,
  imprecise_utility,
  by_preorder,
};

/// x ⪰ y given b.
using PreorderRelation =
    std::function<bool(const Gamble& x, const Gamble& y, const UncertaintyModel& model, Event b)>;

struct TotalPreorder {
  std::string name;
  PreorderRelation relation;
};

/// x ⪰ y iff E(x|b) ≥ E(y|b) under a precise model.
TotalPreorder expectation_order();
/// x ⪰ y iff min_b x ≥ min_b y.
TotalPreorder min_value_order();
/// Everything is indifferent.
TotalPreorder indifference_order();

class ChoiceFunction {
 public:
  explicit ChoiceFunction(ChoiceKind kind);
  static ChoiceFunction by_preorder(TotalPreorder order);

  ChoiceKind kind() const { return kind_; }
  /// Command-line spelling, e.g. "gamma-maximin".
  std::string name() const;
  bool accepts(ModelMode mode) const;
  /// True for kinds induced by a total preorder.
  bool is_total_preorder() const;

  /// Throws ErrorCode::mode_unsupported when the model is not accepted.
  Selection operator()(std::span<const Gamble> xs, const UncertaintyModel& model, Event b) const;

  /// The per-gamble numbers this kind decides on: one expectation per member
  /// or utility function, the expectation, the minimum, or the values on b.
  /// Choices depend on the input only through these rows, so callers may
  /// cache them. Not available for by_preorder.
  std::vector<Rational> features(const Gamble& x, const UncertaintyModel& model, Event b) const;
  /// Decision from feature rows, one per gamble.
  Selection select(const std::vector<std::vector<Rational>>& rows) const;
  bool has_features() const { return kind_ != ChoiceKind::by_preorder; }

  /// Named numbers behind the choice for one gamble: the expectation, the
  /// minimum, the envelopes, or one expectation per member or utility.
  std::vector<std::pair<std::string, Rational>> scores(const Gamble& x, const UncertaintyModel& model,
                                                       Event b) const;

 private:
  ChoiceKind kind_;
  std::optional<TotalPreorder> order_;
};

/// Accepts the kebab-case names; "e-admissible" is the vertex mode.
/// Throws ErrorCode::usage.
ChoiceFunction parse_choice(std::string_view name);
std::vector<std::string> choice_names();

Selection choose_eu(std::span<const Gamble> xs, const ChanceModel& model, Event b);
Selection choose_maximin(std::span<const Gamble> xs, Event b);
Selection choose_gamma_maximin(std::span<const Gamble> xs, const CredalSet& model, Event b);
Selection choose_gamma_maximax(std::span<const Gamble> xs, const CredalSet& model, Event b);
Selection choose_maximality(std::span<const Gamble> xs, const CredalSet& model, Event b);
Selection choose_e_admissible(std::span<const Gamble> xs, const CredalSet& model, Event b, bool hull);
Selection choose_interval_dominance(std::span<const Gamble> xs, const CredalSet& model, Event b);
Selection choose_pointwise_dominance(std::span<const Gamble> xs, Event b);
Selection choose_imprecise_utility(std::span<const Gamble> xs, const UtilityModel& model, Event b);
/// Throws ErrorCode::not_a_preorder when the relation is not reflexive,
/// complete and transitive on xs.
Selection choose_by_preorder(std::span<const Gamble> xs, const TotalPreorder& order,
                             const UncertaintyModel& model, Event b);

}  // namespace subtree
