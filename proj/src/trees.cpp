#include "subtree/trees.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_set>
#include <utility>

#include "subtree/error.hpp"

namespace subtree {

// ---------------------------------------------------------------------------
// Spaces, events, rewards, gambles

PossibilitySpace::PossibilitySpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorCode::malformed_tree, "possibility space needs at least one atom");
  if (atoms_.size() > 64) throw Error(ErrorCode::malformed_tree, "possibility space is limited to 64 atoms");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].empty()) throw Error(ErrorCode::malformed_tree, "empty atom name");
    if (!index_.emplace(atoms_[i], i).second) {
      throw Error(ErrorCode::malformed_tree, "duplicate atom '" + atoms_[i] + "'");
    }
  }
}

std::optional<std::size_t> PossibilitySpace::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t PossibilitySpace::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorCode::unknown_atom, "unknown atom '" + std::string(name) + "'");
}

Event PossibilitySpace::event(const std::vector<std::string>& names) const {
  Event e;
  for (const auto& n : names) e = e | Event::atom(index_of(n));
  return e;
}

std::string PossibilitySpace::describe(Event event) const {
  std::string out = "{";
  bool first = true;
  event.for_each([&](std::size_t i) {
    if (!first) out += ",";
    first = false;
    out += i < atoms_.size() ? atoms_[i] : "#" + std::to_string(i);
  });
  return out + "}";
}

SpacePtr make_space(std::vector<std::string> atoms) {
  return std::make_shared<const PossibilitySpace>(std::move(atoms));
}

std::string reward_text(const Reward& r) {
  if (const auto* q = std::get_if<Rational>(&r)) return to_short_string(*q);
  return std::get<std::string>(r);
}

Gamble::Gamble(Event scope, std::vector<Reward> values) : scope_(scope), values_(std::move(values)) {
  if (!scope_.subset_of(Event::first_n(values_.size()))) {
    throw Error(ErrorCode::scope_mismatch, "gamble scope exceeds its value table");
  }
}

Gamble Gamble::constant(std::size_t space_size, Event scope, const Reward& value) {
  std::vector<Reward> values(space_size, Rational(0));
  scope.for_each([&](std::size_t i) { values[i] = value; });
  return Gamble(scope, std::move(values));
}

Gamble Gamble::numeric(Event scope, const std::vector<Rational>& values) {
  return Gamble(scope, std::vector<Reward>(values.begin(), values.end()));
}

const Rational& Gamble::value(std::size_t atom) const {
  if (const auto* q = std::get_if<Rational>(&values_.at(atom))) return *q;
  throw Error(ErrorCode::scope_mismatch, "gamble holds a label where a number is required");
}

bool Gamble::is_numeric() const {
  bool numeric = true;
  scope_.for_each([&](std::size_t i) { numeric = numeric && subtree::is_numeric(values_[i]); });
  return numeric;
}

Gamble Gamble::restricted(Event scope) const {
  if (!scope.subset_of(scope_)) {
    throw Error(ErrorCode::scope_mismatch, "cannot restrict a gamble beyond its scope");
  }
  Gamble g = *this;
  g.scope_ = scope;
  return g;
}

bool Gamble::agrees_on(const Gamble& other, Event on) const {
  if (!on.subset_of(scope_) || !on.subset_of(other.scope_)) return false;
  bool same = true;
  on.for_each([&](std::size_t i) { same = same && values_[i] == other.values_[i]; });
  return same;
}

namespace {

template <typename Op>
Gamble combine(const Gamble& a, const Gamble& b, Op op) {
  Event scope = a.scope() & b.scope();
  std::vector<Rational> values(std::max(a.space_size(), b.space_size()));
  scope.for_each([&](std::size_t i) { values[i] = op(a.value(i), b.value(i)); });
  return Gamble::numeric(scope, values);
}

}  // namespace

Gamble operator-(const Gamble& a, const Gamble& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x - y); });
}

Gamble operator+(const Gamble& a, const Gamble& b) {
  return combine(a, b, [](const Rational& x, const Rational& y) { return Rational(x + y); });
}

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::decision: return "decision";
    case NodeKind::chance: return "chance";
    case NodeKind::leaf: return "leaf";
    case NodeKind::gamble_leaf: return "gamble_leaf";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  Validator(const PossibilitySpace& space, PruneMode mode) : space_(space), mode_(mode) {}

  void run(Node& node, Event scope) {
    if (node.id.empty()) throw Error(ErrorCode::malformed_tree, "node with empty id");
    if (!ids_.insert(node.id).second) {
      throw Error(ErrorCode::duplicate_node_id, "duplicate node id '" + node.id + "'");
    }
    switch (node.kind) {
      case NodeKind::decision: {
        if (node.arcs.empty()) {
          throw Error(ErrorCode::malformed_tree, "decision node '" + node.id + "' has no arcs");
        }
        for (std::size_t i = 0; i < node.arcs.size(); ++i) {
          node.arcs[i].index = i;
          node.arcs[i].event = Event{};
        }
        for (auto& arc : node.arcs) run(arc.child, scope);
        break;
      }
      case NodeKind::chance:
        run_chance(node, scope);
        break;
      case NodeKind::leaf:
        if (!node.arcs.empty()) {
          throw Error(ErrorCode::malformed_tree, "leaf '" + node.id + "' has children");
        }
        note_reward(node.reward, node.id);
        break;
      case NodeKind::gamble_leaf: {
        if (!node.arcs.empty()) {
          throw Error(ErrorCode::malformed_tree, "gamble leaf '" + node.id + "' has children");
        }
        if (node.gamble.space_size() != space_.size()) {
          throw Error(ErrorCode::scope_mismatch,
                      "gamble at '" + node.id + "' is not over the tree's possibility space");
        }
        if (!scope.subset_of(node.gamble.scope())) {
          throw Error(ErrorCode::scope_mismatch, "gamble at '" + node.id + "' is undefined on " +
                                                     space_.describe(scope - node.gamble.scope()));
        }
        node.gamble = node.gamble.restricted(scope);
        scope.for_each([&](std::size_t i) { note_reward(node.gamble.at(i), node.id); });
        break;
      }
    }
  }

 private:
  void run_chance(Node& node, Event scope) {
    if (node.arcs.empty()) {
      throw Error(ErrorCode::malformed_tree, "chance node '" + node.id + "' has no arcs");
    }
    for (std::size_t i = 0; i < node.arcs.size(); ++i) node.arcs[i].index = i;
    std::vector<Arc> kept;
    Event covered;
    for (auto& arc : node.arcs) {
      if (!arc.event.subset_of(space_.all())) {
        throw Error(ErrorCode::unknown_atom, "chance arc '" + arc.label + "' at '" + node.id +
                                                 "' names atoms outside the space");
      }
      Event arc_scope = scope & arc.event;
      if (arc_scope.empty()) {
        if (mode_ == PruneMode::reject) {
          throw Error(ErrorCode::empty_scope, "chance arc '" + arc.label + "' at '" + node.id +
                                                  "' has empty scope");
        }
        continue;
      }
      if (covered.intersects(arc_scope)) {
        throw Error(ErrorCode::overlapping_events,
                    "chance arcs at '" + node.id + "' overlap on " +
                        space_.describe(covered & arc_scope) + " (arc '" + arc.label + "')");
      }
      covered = covered | arc_scope;
      kept.push_back(std::move(arc));
    }
    if (covered != scope) {
      throw Error(ErrorCode::incomplete_partition, "chance arcs at '" + node.id + "' miss " +
                                                       space_.describe(scope - covered));
    }
    node.arcs = std::move(kept);
    for (auto& arc : node.arcs) run(arc.child, scope & arc.event);
  }

  void note_reward(const Reward& r, const std::string& id) {
    RewardKind k = is_numeric(r) ? RewardKind::numeric : RewardKind::label;
    if (kind_ && *kind_ != k) {
      throw Error(ErrorCode::mixed_reward_kinds,
                  "node '" + id + "' mixes numeric and label rewards in one tree");
    }
    kind_ = k;
  }

  const PossibilitySpace& space_;
  PruneMode mode_;
  std::unordered_set<std::string> ids_;
  std::optional<RewardKind> kind_;
};

}  // namespace

DecisionTree validate_tree(DecisionTree raw, SpacePtr space, PruneMode mode) {
  if (!space) throw Error(ErrorCode::malformed_tree, "tree has no possibility space");
  raw.space = std::move(space);
  if (!raw.root_scope.subset_of(raw.space->all())) {
    throw Error(ErrorCode::unknown_atom, "root scope names atoms outside the space");
  }
  if (raw.root_scope.empty()) throw Error(ErrorCode::empty_scope, "root scope is empty");
  Validator(*raw.space, mode).run(raw.root, raw.root_scope);
  return raw;
}

// ---------------------------------------------------------------------------
// Navigation

namespace {

// Calls visit(node, scope) in preorder; stops early when visit returns true.
template <typename Visit>
bool walk(const Node& node, Event scope, Visit& visit) {
  if (visit(node, scope)) return true;
  for (const auto& arc : node.arcs) {
    Event child_scope = node.kind == NodeKind::chance ? scope & arc.event : scope;
    if (walk(arc.child, child_scope, visit)) return true;
  }
  return false;
}

const Node* locate(const DecisionTree& tree, std::string_view id, Event* scope_out) {
  const Node* found = nullptr;
  auto visit = [&](const Node& n, Event scope) {
    if (n.id != id) return false;
    found = &n;
    if (scope_out) *scope_out = scope;
    return true;
  };
  walk(tree.root, tree.root_scope, visit);
  return found;
}

[[noreturn]] void unknown_node(std::string_view id) {
  throw Error(ErrorCode::unknown_node, "unknown node '" + std::string(id) + "'");
}

}  // namespace

const Node* find_node(const DecisionTree& tree, std::string_view id) {
  return locate(tree, id, nullptr);
}

bool contains_node(const DecisionTree& tree, std::string_view id) {
  return find_node(tree, id) != nullptr;
}

std::vector<std::string> node_ids(const DecisionTree& tree) {
  std::vector<std::string> ids;
  auto visit = [&](const Node& n, Event) {
    ids.push_back(n.id);
    return false;
  };
  walk(tree.root, tree.root_scope, visit);
  return ids;
}

Event path_event(const DecisionTree& tree, std::string_view id) {
  Event scope;
  if (!locate(tree, id, &scope)) unknown_node(id);
  return scope;
}

DecisionTree subtree_at(const DecisionTree& tree, std::string_view id) {
  Event scope;
  const Node* node = locate(tree, id, &scope);
  if (!node) unknown_node(id);
  return DecisionTree{tree.space, scope, *node};
}

// ---------------------------------------------------------------------------
// Strategies

namespace {

void collect_choices(const Node& node, std::vector<StrategyChoice>& out) {
  if (node.kind == NodeKind::decision) {
    if (node.arcs.size() != 1) {
      throw Error(ErrorCode::malformed_tree,
                  "decision node '" + node.id + "' must keep exactly one arc in a strategy");
    }
    out.push_back({node.id, node.arcs.front().index});
  }
  for (const auto& arc : node.arcs) collect_choices(arc.child, out);
}

Node shell(const Node& n) {
  Node copy;
  copy.id = n.id;
  copy.kind = n.kind;
  copy.reward = n.reward;
  copy.gamble = n.gamble;
  return copy;
}

Arc graft(const Arc& arc, Node child) {
  return Arc{arc.index, arc.label, arc.event, std::move(child)};
}

std::vector<Node> strategies_of(const Node& node) {
  switch (node.kind) {
    case NodeKind::leaf:
    case NodeKind::gamble_leaf:
      return {node};
    case NodeKind::decision: {
      std::vector<Node> out;
      for (const auto& arc : node.arcs) {
        for (auto& sub : strategies_of(arc.child)) {
          Node s = shell(node);
          s.arcs.push_back(graft(arc, std::move(sub)));
          out.push_back(std::move(s));
        }
      }
      return out;
    }
    case NodeKind::chance: {
      std::vector<Node> partial{shell(node)};
      for (const auto& arc : node.arcs) {
        std::vector<Node> subs = strategies_of(arc.child);
        std::vector<Node> next;
        next.reserve(partial.size() * subs.size());
        for (const auto& p : partial) {
          for (const auto& sub : subs) {
            Node s = p;
            s.arcs.push_back(graft(arc, sub));
            next.push_back(std::move(s));
          }
        }
        partial = std::move(next);
      }
      return partial;
    }
  }
  return {};
}

}  // namespace

Strategy Strategy::from_tree(DecisionTree tree) {
  Strategy s;
  collect_choices(tree.root, s.choices);
  s.tree = std::move(tree);
  return s;
}

std::strong_ordering operator<=>(const Strategy& a, const Strategy& b) {
  const std::size_t n = std::min(a.choices.size(), b.choices.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.choices[i].arc <=> b.choices[i].arc; c != 0) return c;
    if (auto c = a.choices[i].node_id <=> b.choices[i].node_id; c != 0) return c;
  }
  if (auto c = a.choices.size() <=> b.choices.size(); c != 0) return c;
  return a.tree.root.id <=> b.tree.root.id;
}

void canonicalize(std::vector<Strategy>& strategies) {
  std::sort(strategies.begin(), strategies.end(),
            [](const Strategy& a, const Strategy& b) { return a < b; });
  strategies.erase(std::unique(strategies.begin(), strategies.end()), strategies.end());
}

std::vector<Strategy> enumerate_strategies(const DecisionTree& tree) {
  std::vector<Strategy> out;
  for (auto& node : strategies_of(tree.root)) {
    out.push_back(Strategy::from_tree(DecisionTree{tree.space, tree.root_scope, std::move(node)}));
  }
  return out;
}

std::uint64_t count_strategies(const DecisionTree& tree) {
  constexpr std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::function<std::uint64_t(const Node&)> count = [&](const Node& n) -> std::uint64_t {
    if (n.is_terminal()) return 1;
    std::uint64_t total = n.kind == NodeKind::chance ? 1 : 0;
    for (const auto& arc : n.arcs) {
      std::uint64_t c = count(arc.child);
      if (n.kind == NodeKind::chance) {
        total = (c != 0 && total > cap / c) ? cap : total * c;
      } else {
        total = total > cap - c ? cap : total + c;
      }
    }
    return total;
  };
  return count(tree.root);
}

Gamble gamble_of(const Strategy& strategy) {
  const DecisionTree& t = strategy.tree;
  std::vector<Reward> values(t.space->size(), Rational(0));
  auto visit = [&](const Node& n, Event scope) {
    if (n.kind == NodeKind::decision && n.arcs.size() != 1) {
      throw Error(ErrorCode::malformed_tree, "'" + n.id + "' is not a strategy decision node");
    }
    if (n.kind == NodeKind::leaf) {
      scope.for_each([&](std::size_t i) { values[i] = n.reward; });
    } else if (n.kind == NodeKind::gamble_leaf) {
      scope.for_each([&](std::size_t i) { values[i] = n.gamble.at(i); });
    }
    return false;
  };
  walk(t.root, t.root_scope, visit);
  return Gamble(t.root_scope, std::move(values));
}

bool has_nested_decision(const DecisionTree& tree) {
  std::function<bool(const Node&, bool)> nested = [&](const Node& n, bool below_decision) {
    if (n.kind == NodeKind::decision && below_decision) return true;
    bool next = below_decision || n.kind == NodeKind::decision;
    for (const auto& arc : n.arcs) {
      if (nested(arc.child, next)) return true;
    }
    return false;
  };
  return nested(tree.root, false);
}

RewardKind reward_kind(const DecisionTree& tree) {
  RewardKind kind = RewardKind::numeric;
  auto visit = [&](const Node& n, Event scope) {
    if (n.kind == NodeKind::leaf && !is_numeric(n.reward)) {
      kind = RewardKind::label;
      return true;
    }
    if (n.kind == NodeKind::gamble_leaf && !n.gamble.restricted(scope).is_numeric()) {
      kind = RewardKind::label;
      return true;
    }
    return false;
  };
  walk(tree.root, tree.root_scope, visit);
  return kind;
}

}  // namespace subtree
