// Possibility spaces, events, gambles, decision trees and strategies, plus the
// structural procedures on them: validation, path events, subtrees, strategy
// enumeration and strategy-to-gamble extraction.
#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "subtree/rational.hpp"

namespace subtree {

/// A set of atoms, stored as a bitmask over atom indices of a
/// PossibilitySpace. Spaces are limited to 64 atoms.
struct Event {
  std::uint64_t bits = 0;

  static Event atom(std::size_t index) { return Event{std::uint64_t{1} << index}; }
  static Event first_n(std::size_t n) {
    return Event{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }

  bool empty() const { return bits == 0; }
  std::size_t count() const { return static_cast<std::size_t>(std::popcount(bits)); }
  bool contains(std::size_t index) const { return (bits >> index) & 1U; }
  bool subset_of(Event other) const { return (bits & ~other.bits) == 0; }
  bool intersects(Event other) const { return (bits & other.bits) != 0; }

  friend Event operator&(Event a, Event b) { return Event{a.bits & b.bits}; }
  friend Event operator|(Event a, Event b) { return Event{a.bits | b.bits}; }
  /// Set difference.
  friend Event operator-(Event a, Event b) { return Event{a.bits & ~b.bits}; }
  friend auto operator<=>(Event, Event) = default;

  /// Calls fn(index) for each member, in ascending atom order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
      fn(static_cast<std::size_t>(std::countr_zero(rest)));
    }
  }
};

/// The finite, ordered set of atoms all events live in.
class PossibilitySpace {
 public:
  explicit PossibilitySpace(std::vector<std::string> atoms);

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom(std::size_t index) const { return atoms_.at(index); }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws ErrorCode::unknown_atom.
  std::size_t index_of(std::string_view name) const;
  Event all() const { return Event::first_n(atoms_.size()); }
  Event event(const std::vector<std::string>& names) const;
  /// "{a,b,c}" in space order.
  std::string describe(Event event) const;

 private:
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const PossibilitySpace>;

SpacePtr make_space(std::vector<std::string> atoms);

/// Numeric utiles or an opaque label (imprecise-utility problems).
using Reward = std::variant<Rational, std::string>;

inline bool is_numeric(const Reward& r) { return std::holds_alternative<Rational>(r); }
std::string reward_text(const Reward& r);

/// A total map from the atoms of `scope` to rewards. Storage is dense over
/// the whole space; entries outside the scope are ignored.
class Gamble {
 public:
  Gamble() = default;
  Gamble(Event scope, std::vector<Reward> values);

  static Gamble constant(std::size_t space_size, Event scope, const Reward& value);
  static Gamble numeric(Event scope, const std::vector<Rational>& values);

  Event scope() const { return scope_; }
  const Reward& at(std::size_t atom) const { return values_.at(atom); }
  /// Numeric value at an atom; throws ErrorCode::scope_mismatch for labels.
  const Rational& value(std::size_t atom) const;
  bool is_numeric() const;
  std::size_t space_size() const { return values_.size(); }

  /// Same gamble on a smaller scope.
  Gamble restricted(Event scope) const;
  /// Both gambles are defined on `on` and agree at each of its atoms.
  bool agrees_on(const Gamble& other, Event on) const;

  friend bool operator==(const Gamble& a, const Gamble& b) {
    return a.scope_ == b.scope_ && a.agrees_on(b, a.scope_);
  }

 private:
  Event scope_;
  std::vector<Reward> values_;
};

/// Pointwise combination on a common scope.
Gamble operator-(const Gamble& a, const Gamble& b);
Gamble operator+(const Gamble& a, const Gamble& b);

enum class NodeKind { decision, chance, leaf, gamble_leaf };

std::string_view node_kind_name(NodeKind kind);

struct Arc;

struct Node {
  std::string id;
  NodeKind kind = NodeKind::leaf;
  std::vector<Arc> arcs;  // decision and chance nodes
  Reward reward;          // leaf
  Gamble gamble;          // gamble_leaf

  bool is_terminal() const { return kind == NodeKind::leaf || kind == NodeKind::gamble_leaf; }
};

struct Arc {
  /// Position of this arc among its node's arcs in the originating tree.
  /// Strategies and pruned trees keep the original position.
  std::size_t index = 0;
  /// Decision arc label, or the event's display name on chance arcs.
  std::string label;
  /// Chance arcs only. The arc's scope is parent scope ∩ event.
  Event event;
  Node child;
};

struct DecisionTree {
  SpacePtr space;
  Event root_scope;
  Node root;
};

enum class PruneMode { reject, auto_prune };

/// Checks every tree invariant and returns the canonical tree. In auto_prune
/// mode chance arcs with empty scope are dropped before the partition check.
DecisionTree validate_tree(DecisionTree raw, SpacePtr space, PruneMode mode);

const Node* find_node(const DecisionTree& tree, std::string_view id);
bool contains_node(const DecisionTree& tree, std::string_view id);
/// Node ids in preorder.
std::vector<std::string> node_ids(const DecisionTree& tree);

/// Root scope intersected with every chance arc event on the path to the node.
Event path_event(const DecisionTree& tree, std::string_view id);

DecisionTree subtree_at(const DecisionTree& tree, std::string_view id);

/// One kept arc of a decision node.
struct StrategyChoice {
  std::string node_id;
  std::size_t arc = 0;
  friend bool operator==(const StrategyChoice&, const StrategyChoice&) = default;
};

/// A tree in which every decision node keeps exactly one arc. Identity is the
/// root id plus the preorder list of kept arcs; the canonical order compares
/// kept arc indices lexicographically.
struct Strategy {
  DecisionTree tree;
  std::vector<StrategyChoice> choices;

  /// Builds the choice list; throws ErrorCode::malformed_tree when a decision
  /// node keeps more or fewer than one arc.
  static Strategy from_tree(DecisionTree tree);

  friend bool operator==(const Strategy& a, const Strategy& b) {
    return a.tree.root.id == b.tree.root.id && a.choices == b.choices;
  }
  friend std::strong_ordering operator<=>(const Strategy& a, const Strategy& b);
};

/// Sorts canonically and drops structural duplicates.
void canonicalize(std::vector<Strategy>& strategies);

std::vector<Strategy> enumerate_strategies(const DecisionTree& tree);

/// Closed-form count of enumerate_strategies(tree).size(), saturating.
std::uint64_t count_strategies(const DecisionTree& tree);

/// Reward at each atom of the strategy's root scope. Works for label rewards.
Gamble gamble_of(const Strategy& strategy);

/// True when some decision node has a decision-node ancestor.
bool has_nested_decision(const DecisionTree& tree);

/// All numeric, all labels, or no leaves with rewards at all.
enum class RewardKind { numeric, label };
RewardKind reward_kind(const DecisionTree& tree);

}  // namespace subtree
