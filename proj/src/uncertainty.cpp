#include "subtree/uncertainty.hpp"

#include <algorithm>
#include <functional>
#include <utility>

#include "subtree/error.hpp"

namespace subtree {

MassFunction::MassFunction(SpacePtr space, std::vector<Rational> mass)
    : space_(std::move(space)), mass_(std::move(mass)) {
  if (!space_) throw Error(ErrorCode::invalid_mass, "mass function has no space");
  if (mass_.size() != space_->size()) {
    throw Error(ErrorCode::invalid_mass, "mass function has " + std::to_string(mass_.size()) +
                                             " entries for " + std::to_string(space_->size()) + " atoms");
  }
  Rational total = 0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    if (sgn(mass_[i]) < 0) {
      throw Error(ErrorCode::invalid_mass, "negative mass on atom '" + space_->atom(i) + "'");
    }
    total += mass_[i];
  }
  if (total != 1) {
    throw Error(ErrorCode::invalid_mass, "masses sum to " + to_short_string(total) + ", not 1");
  }
}

Rational MassFunction::probability(Event e) const {
  Rational total = 0;
  e.for_each([&](std::size_t i) { total += mass_.at(i); });
  return total;
}

bool MassFunction::strictly_positive() const {
  return std::all_of(mass_.begin(), mass_.end(), [](const Rational& q) { return sgn(q) > 0; });
}

namespace {

void check_condition(const Gamble& x, Event b, const std::string& space_hint) {
  if (b.empty()) throw Error(ErrorCode::zero_probability_condition, "conditioning on the empty event");
  if (!b.subset_of(x.scope())) {
    throw Error(ErrorCode::scope_mismatch, "conditioning event " + space_hint + " exceeds the gamble's scope");
  }
}

}  // namespace

Rational expectation(const MassFunction& p, const Gamble& x, Event b) {
  check_condition(x, b, p.space()->describe(b));
  Rational weighted = 0;
  Rational total = 0;
  b.for_each([&](std::size_t i) {
    total += p[i];
    weighted += x.value(i) * p[i];
  });
  if (sgn(total) == 0) {
    throw Error(ErrorCode::zero_probability_condition,
                "probability of " + p.space()->describe(b) + " is zero");
  }
  return weighted / total;
}

CredalSet::CredalSet(std::vector<MassFunction> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::invalid_mass, "credal set needs at least one member");
  for (const auto& m : members_) {
    if (m.space()->atoms() != members_.front().space()->atoms()) {
      throw Error(ErrorCode::invalid_mass, "credal set members live on different spaces");
    }
  }
  positive_ = std::all_of(members_.begin(), members_.end(),
                          [](const MassFunction& m) { return m.strictly_positive(); });
}

Rational lower_expectation(const CredalSet& m, const Gamble& x, Event b) {
  Rational best = expectation(m.members().front(), x, b);
  for (std::size_t i = 1; i < m.members().size(); ++i) {
    Rational e = expectation(m.members()[i], x, b);
    if (e < best) best = e;
  }
  return best;
}

Rational upper_expectation(const CredalSet& m, const Gamble& x, Event b) {
  Rational best = expectation(m.members().front(), x, b);
  for (std::size_t i = 1; i < m.members().size(); ++i) {
    Rational e = expectation(m.members()[i], x, b);
    if (e > best) best = e;
  }
  return best;
}

CredalSet product_credal(const std::vector<Event>& partition, const std::vector<MassFunction>& marginals,
                         const std::vector<std::vector<MassFunction>>& conditionals) {
  if (partition.empty() || marginals.empty() || conditionals.size() != partition.size()) {
    throw Error(ErrorCode::partition_invalid, "partition, marginals and per-cell conditionals must be nonempty and aligned");
  }
  SpacePtr space = conditionals.front().empty() ? nullptr : conditionals.front().front().space();
  if (!space) throw Error(ErrorCode::partition_invalid, "cell 0 has no conditionals");
  Event covered;
  for (Event cell : partition) {
    if (cell.empty() || covered.intersects(cell)) {
      throw Error(ErrorCode::partition_invalid, "partition cells must be nonempty and disjoint");
    }
    covered = covered | cell;
  }
  if (covered != space->all()) throw Error(ErrorCode::partition_invalid, "partition does not cover the space");
  for (const auto& m : marginals) {
    if (m.space()->size() != partition.size()) {
      throw Error(ErrorCode::partition_invalid, "marginal is not indexed by the partition cells");
    }
  }
  for (std::size_t c = 0; c < partition.size(); ++c) {
    if (conditionals[c].empty()) throw Error(ErrorCode::partition_invalid, "cell has no conditionals");
    for (const auto& q : conditionals[c]) {
      if (q.space()->atoms() != space->atoms() || q.probability(partition[c]) != 1) {
        throw Error(ErrorCode::partition_invalid,
                    "conditional for cell " + space->describe(partition[c]) + " is not supported on it");
      }
    }
  }

  std::vector<MassFunction> joints;
  std::vector<std::size_t> pick(partition.size(), 0);
  for (const auto& marginal : marginals) {
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<Rational> mass(space->size());
      for (std::size_t c = 0; c < partition.size(); ++c) {
        const MassFunction& q = conditionals[c][pick[c]];
        partition[c].for_each([&](std::size_t i) { mass[i] = marginal[c] * q[i]; });
      }
      joints.emplace_back(space, std::move(mass));
      // Odometer over per-cell choices, last cell fastest.
      bool done = true;
      for (std::size_t c = partition.size(); c-- > 0;) {
        if (++pick[c] < conditionals[c].size()) {
          done = false;
          break;
        }
        pick[c] = 0;
      }
      if (done) break;
    }
  }
  return CredalSet(std::move(joints));
}

// ---------------------------------------------------------------------------
// Tree-factored assessments

TreeFactoredAssessment::TreeFactoredAssessment(std::shared_ptr<const DecisionTree> tree,
                                               std::map<std::string, std::vector<Rational>> arc_prob)
    : tree_(std::move(tree)), arc_prob_(std::move(arc_prob)) {
  if (!tree_) throw Error(ErrorCode::missing_arc_probability, "factored assessment without a tree");
  std::function<void(const Node&)> check = [&](const Node& n) {
    if (n.kind == NodeKind::chance) {
      Rational total = 0;
      for (const auto& arc : n.arcs) {
        const Rational& p = probability(n.id, arc.index);
        if (sgn(p) < 0 || p > 1) {
          throw Error(ErrorCode::invalid_mass, "arc probability at '" + n.id + "' outside [0,1]");
        }
        total += p;
      }
      if (total != 1) {
        throw Error(ErrorCode::invalid_mass,
                    "arc probabilities at '" + n.id + "' sum to " + to_short_string(total));
      }
    }
    for (const auto& arc : n.arcs) check(arc.child);
  };
  check(tree_->root);
}

const Rational& TreeFactoredAssessment::probability(const std::string& node_id,
                                                    std::size_t arc_index) const {
  auto it = arc_prob_.find(node_id);
  if (it == arc_prob_.end() || arc_index >= it->second.size()) {
    throw Error(ErrorCode::missing_arc_probability,
                "no probability for arc " + std::to_string(arc_index) + " of chance node '" + node_id + "'");
  }
  return it->second[arc_index];
}

namespace {

bool constant_on(const Gamble& g, Event e, Rational* value) {
  bool first = true;
  bool same = true;
  e.for_each([&](std::size_t i) {
    if (first) {
      *value = g.value(i);
      first = false;
    } else if (g.value(i) != *value) {
      same = false;
    }
  });
  return same && !first;
}

Rational factored_value(const TreeFactoredAssessment& a, const Node& n) {
  switch (n.kind) {
    case NodeKind::leaf:
      if (!is_numeric(n.reward)) {
        throw Error(ErrorCode::scope_mismatch, "leaf '" + n.id + "' carries a label, not utiles");
      }
      return std::get<Rational>(n.reward);
    case NodeKind::gamble_leaf: {
      Rational v;
      if (!constant_on(n.gamble, n.gamble.scope(), &v)) {
        throw Error(ErrorCode::missing_arc_probability,
                    "gamble leaf '" + n.id + "' varies but has no factored chance arcs");
      }
      return v;
    }
    case NodeKind::decision:
      if (n.arcs.size() != 1) {
        throw Error(ErrorCode::malformed_tree, "'" + n.id + "' is not a strategy decision node");
      }
      return factored_value(a, n.arcs.front().child);
    case NodeKind::chance: {
      Rational total = 0;
      for (const auto& arc : n.arcs) total += a.probability(n.id, arc.index) * factored_value(a, arc.child);
      return total;
    }
  }
  return 0;
}

// Returns the finer of two nested cell measures, after checking the coarser
// one is its aggregate.
CellMeasure merge_nested(const CellMeasure& x, const CellMeasure& y, const Node& at) {
  auto refines = [](const CellMeasure& fine, const CellMeasure& coarse) {
    for (const auto& [cell, mass] : fine.cells) {
      bool inside = std::any_of(coarse.cells.begin(), coarse.cells.end(),
                                [&](const auto& c) { return cell.subset_of(c.first); });
      if (!inside) return false;
    }
    for (const auto& [coarse_cell, coarse_mass] : coarse.cells) {
      Rational total = 0;
      for (const auto& [cell, mass] : fine.cells) {
        if (cell.subset_of(coarse_cell)) total += mass;
      }
      if (total != coarse_mass) return false;
    }
    return true;
  };
  if (refines(y, x)) return y;
  if (refines(x, y)) return x;
  throw Error(ErrorCode::inconsistent_assessment,
              "decision branches at '" + at.id + "' induce incompatible chance structures");
}

CellMeasure measure_below(const TreeFactoredAssessment& a, const Node& n, Event scope) {
  switch (n.kind) {
    case NodeKind::leaf:
    case NodeKind::gamble_leaf:
      return CellMeasure{{{scope, Rational(1)}}};
    case NodeKind::decision: {
      CellMeasure merged = measure_below(a, n.arcs.front().child, scope);
      for (std::size_t i = 1; i < n.arcs.size(); ++i) {
        merged = merge_nested(merged, measure_below(a, n.arcs[i].child, scope), n);
      }
      return merged;
    }
    case NodeKind::chance: {
      CellMeasure out;
      for (const auto& arc : n.arcs) {
        const Rational& p = a.probability(n.id, arc.index);
        for (auto& [cell, mass] : measure_below(a, arc.child, scope & arc.event).cells) {
          out.cells.emplace_back(cell, p * mass);
        }
      }
      return out;
    }
  }
  return {};
}

}  // namespace

Rational factored_expectation(const TreeFactoredAssessment& a, const Strategy& s, std::string_view node_id) {
  const Node* n = find_node(s.tree, node_id);
  if (!n) throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(node_id) + "'");
  return factored_value(a, *n);
}

CellMeasure conditional_measure(const TreeFactoredAssessment& a, Event b) {
  const DecisionTree& tree = a.tree();
  for (const auto& id : node_ids(tree)) {
    Event scope = path_event(tree, id);
    if (scope == b) {
      CellMeasure m = measure_below(a, *find_node(tree, id), scope);
      std::sort(m.cells.begin(), m.cells.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      return m;
    }
  }
  throw Error(ErrorCode::mode_unsupported, "factored assessment has no node conditioned on " +
                                               tree.space->describe(b));
}

Rational expectation(const TreeFactoredAssessment& a, const Gamble& x, Event b) {
  check_condition(x, b, a.tree().space->describe(b));
  Rational total = 0;
  for (const auto& [cell, mass] : conditional_measure(a, b).cells) {
    if (sgn(mass) == 0) continue;
    Rational v;
    if (!constant_on(x, cell, &v)) {
      throw Error(ErrorCode::scope_mismatch, "gamble varies inside the unresolved chance cell " +
                                                 a.tree().space->describe(cell));
    }
    total += mass * v;
  }
  return total;
}

Rational expectation(const ChanceModel& chance, const Gamble& x, Event b) {
  return std::visit(
      [&](const auto& model) -> Rational {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, NoChance>) {
          check_condition(x, b, "");
          Rational v;
          if (!constant_on(x, b, &v)) {
            throw Error(ErrorCode::scope_mismatch, "gamble varies but no chance model was given");
          }
          return v;
        } else {
          return expectation(model, x, b);
        }
      },
      chance);
}

Gamble relabel(const std::map<std::string, Rational>& utility, const Gamble& x) {
  std::vector<Rational> values(x.space_size());
  x.scope().for_each([&](std::size_t i) {
    const Reward& r = x.at(i);
    if (const auto* label = std::get_if<std::string>(&r)) {
      auto it = utility.find(*label);
      if (it == utility.end()) throw Error(ErrorCode::unknown_label, "no utility for reward '" + *label + "'");
      values[i] = it->second;
    } else {
      values[i] = std::get<Rational>(r);
    }
  });
  return Gamble::numeric(x.scope(), values);
}

std::vector<Rational> utility_expectations(const UtilityFunctionSet& u, const ChanceModel& chance,
                                           const Strategy& s) {
  Gamble g = gamble_of(s);
  std::vector<Rational> out;
  out.reserve(u.functions.size());
  for (const auto& f : u.functions) out.push_back(expectation(chance, relabel(f, g), g.scope()));
  return out;
}

ModelMode mode_of(const UncertaintyModel& model) {
  return static_cast<ModelMode>(model.index());
}

std::string_view model_mode_name(ModelMode mode) {
  switch (mode) {
    case ModelMode::none: return "none";
    case ModelMode::joint: return "joint";
    case ModelMode::factored: return "factored";
    case ModelMode::credal: return "credal";
    case ModelMode::utilities: return "utilities";
  }
  return "?";
}

}  // namespace subtree
