// The two canonical tree shapes, an exhaustive falsifier over them, a seeded
// random tree generator and a fuzz harness comparing the two.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subtree/choice.hpp"
#include "subtree/solver.hpp"
#include "subtree/trees.hpp"
#include "subtree/uncertainty.hpp"

namespace subtree {

/// Chance root splitting b into a∩b and b−a; a decision node over xs on the
/// first arc, the gamble z on the second.
struct CanonicalInstanceA {
  SpacePtr space;
  Event a;
  std::vector<Gamble> xs;
  Gamble z;
  Event b;
};

/// Decision root with two decision children over xs and ys.
struct CanonicalInstanceB {
  SpacePtr space;
  std::vector<Gamble> xs;
  std::vector<Gamble> ys;
  Event b;
};

/// Throws ErrorCode::instance_invalid.
DecisionTree make_canonical_a(const CanonicalInstanceA& inst);
DecisionTree make_canonical_b(const CanonicalInstanceB& inst);

enum class CanonicalShape { a, b };

struct CanonicalLimits {
  std::size_t max_n = 4;
  std::size_t max_m = 4;
  bool shape_a = true;
  bool shape_b = true;
  /// Conditioning events to try; default every nonempty event, ascending.
  std::optional<std::vector<Event>> events_b;
  /// Candidate A events (intersected with b); default every proper nonempty
  /// subset of b.
  std::optional<std::vector<Event>> events_a;
  /// Stop after this many instances; 0 means no limit.
  std::uint64_t max_instances = 0;
  /// Run the full tree pipeline on every instance instead of only on the
  /// failures found by the direct evaluation.
  bool full_pipeline = false;
};

struct CanonicalFailure {
  CanonicalShape shape = CanonicalShape::b;
  Event a;
  Event b;
  /// Pool indices.
  std::vector<std::size_t> xs;
  std::vector<std::size_t> ys;
  std::optional<std::size_t> z;
  DecisionTree tree;
  PerfectnessVerdict verdict;
};

struct CanonicalReport {
  bool passed = true;
  /// False when max_instances cut the enumeration short.
  bool exhausted = true;
  std::uint64_t instances = 0;
  std::optional<CanonicalFailure> failure;
  /// "no counterexample found in pool" or a description of the failure.
  std::string summary;
};

/// Shape (b) instances come first, then shape (a); within a shape events
/// follow the given order and gamble tuples grow by size, then
/// lexicographically. For shape (b) only pairs with |xs| ≥ |ys| are built (and
/// xs ≤ ys when the sizes match), since swapping the two branches mirrors the
/// verdicts.
CanonicalReport check_canonical(const ChoiceFunction& choice, const UncertaintyModel& model, const SpacePtr& space,
                                const std::vector<Gamble>& pool, const CanonicalLimits& limits);

enum class SamplerKind { joint, credal, product };

struct ModelSampler {
  SamplerKind kind = SamplerKind::joint;
  std::size_t k = 2;
};

/// "joint", "credal(k=2)", "product(k=2)". Throws ErrorCode::invalid_config.
ModelSampler parse_model_sampler(std::string_view text);
std::string describe(const ModelSampler& sampler);

struct FuzzConfig {
  std::uint64_t seed = 1;
  std::size_t tree_count = 200;
  std::size_t max_depth = 4;
  std::size_t max_branching = 3;
  std::size_t omega_size = 4;
  Rational reward_min = -5;
  Rational reward_max = 5;
  ModelSampler sampler;
  /// Trees with more strategies are redrawn.
  std::uint64_t max_strategies = 64;
  /// Limits for the witness reduction.
  std::size_t reduce_max_n = 3;
  std::size_t reduce_max_m = 3;
  std::uint64_t reduce_budget = 200000;
  std::size_t threads = 1;
};

/// Throws ErrorCode::invalid_config.
void validate(const FuzzConfig& cfg);

struct RandomInstance {
  DecisionTree tree;
  UncertaintyModel model;
};

RandomInstance gen_random_tree(const FuzzConfig& cfg, std::uint64_t index);

enum class Reduction { not_run, found_b, found_a, miss, budget, inconsistency };

std::string_view reduction_name(Reduction r);

struct FuzzTreeResult {
  std::uint64_t index = 0;
  std::vector<std::string> failing_nodes;
  bool nested_decision = false;
  Reduction reduction = Reduction::not_run;
  std::uint64_t reduction_instances = 0;
  std::string witness;
};

struct FuzzReport {
  std::string choice;
  std::string sampler;
  std::uint64_t trees = 0;
  std::uint64_t error_trees = 0;
  /// Failing trees only, by index.
  std::vector<FuzzTreeResult> failures;

  std::size_t count(Reduction r) const;
  bool inconsistent() const { return count(Reduction::inconsistency) > 0; }
  std::string text() const;
};

/// For every failing tree the canonical checker is re-run over the gambles of
/// all its sub-strategies and the events generated by its path events. A
/// canonical failure is the expected outcome; an exhausted search without one
/// contradicts the equivalence and is reported as an inconsistency; a search
/// cut short by the budget is reported as such.
FuzzReport fuzz_equivalence(const ChoiceFunction& choice, const ModelSampler& sampler, const FuzzConfig& cfg);

}  // namespace subtree
