#include "subtree/choice.hpp"

#include <algorithm>
#include <array>

#include "subtree/error.hpp"
#include "subtree/exact_lp.hpp"

namespace subtree {

namespace {

void require_input(std::span<const Gamble> xs, Event b) {
  if (xs.empty()) throw Error(ErrorCode::empty_input, "choice over an empty set of gambles");
  if (b.empty()) throw Error(ErrorCode::zero_probability_condition, "conditioning on the empty event");
  for (const auto& x : xs) {
    if (!b.subset_of(x.scope())) {
      throw Error(ErrorCode::scope_mismatch, "a gamble is not defined on the whole conditioning event");
    }
  }
}

Selection argmax(const std::vector<Rational>& values) {
  const Rational& best = *std::max_element(values.begin(), values.end());
  Selection out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == best) out.push_back(i);
  }
  return out;
}

Rational min_on(const Gamble& x, Event b) {
  std::optional<Rational> best;
  b.for_each([&](std::size_t i) {
    const Rational& v = x.value(i);
    if (!best || v < *best) best = v;
  });
  return *best;
}

std::vector<Rational> member_row(const Gamble& x, const CredalSet& model, Event b) {
  std::vector<Rational> row;
  row.reserve(model.members().size());
  for (const auto& p : model.members()) row.push_back(expectation(p, x, b));
  return row;
}

std::vector<Rational> utility_row(const Gamble& x, const UtilityModel& model, Event b) {
  std::vector<Rational> row;
  row.reserve(model.utilities.functions.size());
  for (const auto& u : model.utilities.functions) row.push_back(expectation(model.chance, relabel(u, x), b));
  return row;
}

std::vector<Rational> value_row(const Gamble& x, Event b) {
  std::vector<Rational> row;
  b.for_each([&](std::size_t i) { row.push_back(x.value(i)); });
  return row;
}

using Rows = std::vector<std::vector<Rational>>;

Selection merge_sorted(const Selection& a, const Selection& b) {
  Selection out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Selection select_column_max(const Rows& rows, std::size_t column) {
  std::vector<Rational> values;
  values.reserve(rows.size());
  for (const auto& r : rows) values.push_back(r[column]);
  return argmax(values);
}

Selection select_scalar(const Rows& rows) { return select_column_max(rows, 0); }

Selection select_lower(const Rows& rows) {
  std::vector<Rational> values;
  for (const auto& r : rows) values.push_back(*std::min_element(r.begin(), r.end()));
  return argmax(values);
}

Selection select_upper(const Rows& rows) {
  std::vector<Rational> values;
  for (const auto& r : rows) values.push_back(*std::max_element(r.begin(), r.end()));
  return argmax(values);
}

// Expectation is linear per member, so E̲(y−x|b) = min_p (E_p(y|b) − E_p(x|b)).
Selection select_maximality(const Rows& rows) {
  Selection out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < rows.size() && !dominated; ++j) {
      if (j == i) continue;
      bool all_greater = true;
      for (std::size_t p = 0; p < rows[i].size() && all_greater; ++p) all_greater = rows[j][p] > rows[i][p];
      dominated = all_greater;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

Selection select_union_of_column_max(const Rows& rows) {
  Selection out;
  for (std::size_t c = 0; c < rows.front().size(); ++c) out = merge_sorted(out, select_column_max(rows, c));
  return out;
}

// Find λ ≥ 0, Σλ = 1 with Σ_p λ_p (E_p(x) − E_p(y)) ≥ 0 for every y:
// one slack column per y, equality rows.
Selection select_hull(const Rows& rows) {
  const std::size_t members = rows.front().size();
  const std::size_t others = rows.size() - 1;
  Selection out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::vector<Rational>> lp;
    std::vector<Rational> rhs;
    std::size_t slack = 0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == i) continue;
      std::vector<Rational> row(members + others);
      for (std::size_t p = 0; p < members; ++p) row[p] = rows[i][p] - rows[j][p];
      row[members + slack++] = -1;
      lp.push_back(std::move(row));
      rhs.emplace_back(0);
    }
    std::vector<Rational> sum(members + others);
    for (std::size_t p = 0; p < members; ++p) sum[p] = 1;
    lp.push_back(std::move(sum));
    rhs.emplace_back(1);
    if (feasible_nonnegative(lp, rhs)) out.push_back(i);
  }
  return out;
}

Selection select_interval(const Rows& rows) {
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  for (const auto& r : rows) {
    lower.push_back(*std::min_element(r.begin(), r.end()));
    upper.push_back(*std::max_element(r.begin(), r.end()));
  }
  const Rational& threshold = *std::max_element(lower.begin(), lower.end());
  Selection out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (upper[i] >= threshold) out.push_back(i);
  }
  return out;
}

Selection select_pointwise(const Rows& rows) {
  auto dominates = [](const std::vector<Rational>& y, const std::vector<Rational>& x) {
    bool strict = false;
    for (std::size_t w = 0; w < x.size(); ++w) {
      if (y[w] < x[w]) return false;
      strict = strict || y[w] > x[w];
    }
    return strict;
  };
  Selection out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < rows.size() && !dominated; ++j) dominated = j != i && dominates(rows[j], rows[i]);
    if (!dominated) out.push_back(i);
  }
  return out;
}

template <typename RowFn>
Rows rows_of(std::span<const Gamble> xs, RowFn&& fn) {
  Rows rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) rows.push_back(fn(x));
  return rows;
}

ChanceModel chance_of(const UncertaintyModel& model) {
  if (const auto* p = std::get_if<MassFunction>(&model)) return *p;
  if (const auto* f = std::get_if<TreeFactoredAssessment>(&model)) return *f;
  if (const auto* u = std::get_if<UtilityModel>(&model)) return u->chance;
  return NoChance{};
}

struct KindInfo {
  ChoiceKind kind;
  const char* name;
};

constexpr std::array<KindInfo, 10> kKinds{{
    {ChoiceKind::eu, "eu"},
    {ChoiceKind::maximin, "maximin"},
    {ChoiceKind::gamma_maximin, "gamma-maximin"},
    {ChoiceKind::gamma_maximax, "gamma-maximax"},
    {ChoiceKind::maximality, "maximality"},
    {ChoiceKind::e_admissible_vertex, "e-admissible"},
    {ChoiceKind::e_admissible_hull, "e-admissible-hull"},
    {ChoiceKind::interval_dominance, "interval-dominance"},
    {ChoiceKind::pointwise_dominance, "pointwise-dominance"},
    {ChoiceKind::imprecise_utility, "imprecise-utility"},
}};

}  // namespace

Selection choose_eu(std::span<const Gamble> xs, const ChanceModel& model, Event b) {
  require_input(xs, b);
  return select_scalar(rows_of(xs, [&](const Gamble& x) { return std::vector<Rational>{expectation(model, x, b)}; }));
}

Selection choose_maximin(std::span<const Gamble> xs, Event b) {
  require_input(xs, b);
  return select_scalar(rows_of(xs, [&](const Gamble& x) { return std::vector<Rational>{min_on(x, b)}; }));
}

Selection choose_gamma_maximin(std::span<const Gamble> xs, const CredalSet& model, Event b) {
  require_input(xs, b);
  return select_lower(rows_of(xs, [&](const Gamble& x) { return member_row(x, model, b); }));
}

Selection choose_gamma_maximax(std::span<const Gamble> xs, const CredalSet& model, Event b) {
  require_input(xs, b);
  return select_upper(rows_of(xs, [&](const Gamble& x) { return member_row(x, model, b); }));
}

Selection choose_maximality(std::span<const Gamble> xs, const CredalSet& model, Event b) {
  require_input(xs, b);
  return select_maximality(rows_of(xs, [&](const Gamble& x) { return member_row(x, model, b); }));
}

Selection choose_e_admissible(std::span<const Gamble> xs, const CredalSet& model, Event b, bool hull) {
  require_input(xs, b);
  Rows rows = rows_of(xs, [&](const Gamble& x) { return member_row(x, model, b); });
  return hull ? select_hull(rows) : select_union_of_column_max(rows);
}

Selection choose_interval_dominance(std::span<const Gamble> xs, const CredalSet& model, Event b) {
  require_input(xs, b);
  return select_interval(rows_of(xs, [&](const Gamble& x) { return member_row(x, model, b); }));
}

Selection choose_pointwise_dominance(std::span<const Gamble> xs, Event b) {
  require_input(xs, b);
  return select_pointwise(rows_of(xs, [&](const Gamble& x) { return value_row(x, b); }));
}

Selection choose_imprecise_utility(std::span<const Gamble> xs, const UtilityModel& model, Event b) {
  require_input(xs, b);
  if (model.utilities.functions.empty()) throw Error(ErrorCode::empty_input, "no utility functions given");
  return select_union_of_column_max(rows_of(xs, [&](const Gamble& x) { return utility_row(x, model, b); }));
}

Selection choose_by_preorder(std::span<const Gamble> xs, const TotalPreorder& order, const UncertaintyModel& model,
                             Event b) {
  require_input(xs, b);
  const std::size_t n = xs.size();
  std::vector<std::vector<char>> geq(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) geq[i][j] = order.relation(xs[i], xs[j], model, b) ? 1 : 0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!geq[i][i]) throw Error(ErrorCode::not_a_preorder, order.name + " is not reflexive on the input");
    for (std::size_t j = 0; j < n; ++j) {
      if (!geq[i][j] && !geq[j][i]) throw Error(ErrorCode::not_a_preorder, order.name + " is not complete on the input");
      for (std::size_t k = 0; k < n; ++k) {
        if (geq[i][j] && geq[j][k] && !geq[i][k]) {
          throw Error(ErrorCode::not_a_preorder, order.name + " is not transitive on the input");
        }
      }
    }
  }
  Selection out;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::all_of(geq[i].begin(), geq[i].end(), [](char c) { return c != 0; })) out.push_back(i);
  }
  return out;
}

TotalPreorder expectation_order() {
  return {"expectation-order", [](const Gamble& x, const Gamble& y, const UncertaintyModel& model, Event b) {
            ChanceModel chance = chance_of(model);
            return expectation(chance, x, b) >= expectation(chance, y, b);
          }};
}

TotalPreorder min_value_order() {
  return {"min-value-order", [](const Gamble& x, const Gamble& y, const UncertaintyModel&, Event b) {
            return min_on(x, b) >= min_on(y, b);
          }};
}

TotalPreorder indifference_order() {
  return {"indifference", [](const Gamble&, const Gamble&, const UncertaintyModel&, Event) { return true; }};
}

ChoiceFunction::ChoiceFunction(ChoiceKind kind) : kind_(kind) {
  if (kind == ChoiceKind::by_preorder) {
    throw Error(ErrorCode::usage, "a preorder choice needs its comparator; use ChoiceFunction::by_preorder");
  }
}

ChoiceFunction ChoiceFunction::by_preorder(TotalPreorder order) {
  ChoiceFunction f(ChoiceKind::eu);
  f.kind_ = ChoiceKind::by_preorder;
  f.order_ = std::move(order);
  return f;
}

std::string ChoiceFunction::name() const {
  if (kind_ == ChoiceKind::by_preorder) return "by-preorder(" + order_->name + ")";
  for (const auto& k : kKinds) {
    if (k.kind == kind_) return k.name;
  }
  return "unknown";
}

bool ChoiceFunction::accepts(ModelMode mode) const {
  switch (kind_) {
    case ChoiceKind::eu:
      return mode == ModelMode::joint || mode == ModelMode::factored;
    case ChoiceKind::maximin:
    case ChoiceKind::pointwise_dominance:
    case ChoiceKind::by_preorder:
      return true;
    case ChoiceKind::gamma_maximin:
    case ChoiceKind::gamma_maximax:
    case ChoiceKind::maximality:
    case ChoiceKind::e_admissible_vertex:
    case ChoiceKind::e_admissible_hull:
    case ChoiceKind::interval_dominance:
      return mode == ModelMode::credal;
    case ChoiceKind::imprecise_utility:
      return mode == ModelMode::utilities;
  }
  return false;
}

bool ChoiceFunction::is_total_preorder() const {
  switch (kind_) {
    case ChoiceKind::eu:
    case ChoiceKind::maximin:
    case ChoiceKind::gamma_maximin:
    case ChoiceKind::gamma_maximax:
    case ChoiceKind::by_preorder:
      return true;
    default:
      return false;
  }
}

Selection ChoiceFunction::operator()(std::span<const Gamble> xs, const UncertaintyModel& model, Event b) const {
  const ModelMode mode = mode_of(model);
  if (!accepts(mode)) {
    throw Error(ErrorCode::mode_unsupported,
                name() + " does not accept a model of mode " + std::string(model_mode_name(mode)));
  }
  switch (kind_) {
    case ChoiceKind::eu:
      return choose_eu(xs, chance_of(model), b);
    case ChoiceKind::maximin:
      return choose_maximin(xs, b);
    case ChoiceKind::gamma_maximin:
      return choose_gamma_maximin(xs, std::get<CredalSet>(model), b);
    case ChoiceKind::gamma_maximax:
      return choose_gamma_maximax(xs, std::get<CredalSet>(model), b);
    case ChoiceKind::maximality:
      return choose_maximality(xs, std::get<CredalSet>(model), b);
    case ChoiceKind::e_admissible_vertex:
      return choose_e_admissible(xs, std::get<CredalSet>(model), b, false);
    case ChoiceKind::e_admissible_hull:
      return choose_e_admissible(xs, std::get<CredalSet>(model), b, true);
    case ChoiceKind::interval_dominance:
      return choose_interval_dominance(xs, std::get<CredalSet>(model), b);
    case ChoiceKind::pointwise_dominance:
      return choose_pointwise_dominance(xs, b);
    case ChoiceKind::imprecise_utility:
      return choose_imprecise_utility(xs, std::get<UtilityModel>(model), b);
    case ChoiceKind::by_preorder:
      return choose_by_preorder(xs, *order_, model, b);
  }
  return {};
}

std::vector<Rational> ChoiceFunction::features(const Gamble& x, const UncertaintyModel& model, Event b) const {
  const ModelMode mode = mode_of(model);
  if (!accepts(mode)) {
    throw Error(ErrorCode::mode_unsupported,
                name() + " does not accept a model of mode " + std::string(model_mode_name(mode)));
  }
  switch (kind_) {
    case ChoiceKind::eu:
      return {expectation(chance_of(model), x, b)};
    case ChoiceKind::maximin:
      return {min_on(x, b)};
    case ChoiceKind::gamma_maximin:
    case ChoiceKind::gamma_maximax:
    case ChoiceKind::maximality:
    case ChoiceKind::e_admissible_vertex:
    case ChoiceKind::e_admissible_hull:
    case ChoiceKind::interval_dominance:
      return member_row(x, std::get<CredalSet>(model), b);
    case ChoiceKind::pointwise_dominance:
      return value_row(x, b);
    case ChoiceKind::imprecise_utility:
      return utility_row(x, std::get<UtilityModel>(model), b);
    case ChoiceKind::by_preorder:
      break;
  }
  throw Error(ErrorCode::mode_unsupported, name() + " has no feature representation");
}

Selection ChoiceFunction::select(const std::vector<std::vector<Rational>>& rows) const {
  if (rows.empty()) throw Error(ErrorCode::empty_input, "choice over an empty set of gambles");
  switch (kind_) {
    case ChoiceKind::eu:
    case ChoiceKind::maximin:
      return select_scalar(rows);
    case ChoiceKind::gamma_maximin:
      return select_lower(rows);
    case ChoiceKind::gamma_maximax:
      return select_upper(rows);
    case ChoiceKind::maximality:
      return select_maximality(rows);
    case ChoiceKind::e_admissible_vertex:
    case ChoiceKind::imprecise_utility:
      return select_union_of_column_max(rows);
    case ChoiceKind::e_admissible_hull:
      return select_hull(rows);
    case ChoiceKind::interval_dominance:
      return select_interval(rows);
    case ChoiceKind::pointwise_dominance:
      return select_pointwise(rows);
    case ChoiceKind::by_preorder:
      break;
  }
  throw Error(ErrorCode::mode_unsupported, name() + " has no feature representation");
}

std::vector<std::pair<std::string, Rational>> ChoiceFunction::scores(const Gamble& x, const UncertaintyModel& model,
                                                                     Event b) const {
  std::vector<std::pair<std::string, Rational>> out;
  auto per_member = [&](const CredalSet& m) {
    for (std::size_t p = 0; p < m.members().size(); ++p) {
      out.emplace_back("P" + std::to_string(p + 1), expectation(m.members()[p], x, b));
    }
  };
  switch (kind_) {
    case ChoiceKind::eu:
      out.emplace_back("expectation", expectation(chance_of(model), x, b));
      break;
    case ChoiceKind::maximin:
      out.emplace_back("min", min_on(x, b));
      break;
    case ChoiceKind::gamma_maximin:
    case ChoiceKind::gamma_maximax:
    case ChoiceKind::interval_dominance: {
      const auto& m = std::get<CredalSet>(model);
      out.emplace_back("lower", lower_expectation(m, x, b));
      out.emplace_back("upper", upper_expectation(m, x, b));
      break;
    }
    case ChoiceKind::maximality:
    case ChoiceKind::e_admissible_vertex:
    case ChoiceKind::e_admissible_hull:
      per_member(std::get<CredalSet>(model));
      break;
    case ChoiceKind::imprecise_utility: {
      const auto& u = std::get<UtilityModel>(model);
      for (std::size_t k = 0; k < u.utilities.functions.size(); ++k) {
        out.emplace_back("U" + std::to_string(k + 1), expectation(u.chance, relabel(u.utilities.functions[k], x), b));
      }
      break;
    }
    case ChoiceKind::pointwise_dominance:
    case ChoiceKind::by_preorder:
      break;
  }
  return out;
}

ChoiceFunction parse_choice(std::string_view name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return ChoiceFunction(k.kind);
  }
  std::string known;
  for (const auto& k : kKinds) known += std::string(known.empty() ? "" : ", ") + k.name;
  throw Error(ErrorCode::usage, "unknown choice function '" + std::string(name) + "' (expected one of " + known + ")");
}

std::vector<std::string> choice_names() {
  std::vector<std::string> out;
  for (const auto& k : kKinds) out.emplace_back(k.name);
  return out;
}

}  // namespace subtree
