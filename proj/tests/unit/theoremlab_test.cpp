#include <doctest.h>

#include "oracle.hpp"
#include "subtree/error.hpp"
#include "subtree/report.hpp"
#include "subtree/theoremlab.hpp"
#include "testing.hpp"

using namespace subtree;
using testing::load;
using testing::q;

namespace {

Gamble constant(const SpacePtr& s, long v) { return Gamble::constant(s->size(), s->all(), Rational(v)); }

std::vector<Gamble> sorted_gambles(const DecisionTree& tree) {
  std::vector<Gamble> out;
  for (const auto& s : enumerate_strategies(tree)) out.push_back(gamble_of(s));
  return out;
}

}  // namespace

TEST_CASE("the maximin example is a shape (a) tree") {
  auto l = load("fig22");
  auto s = l.problem.space;
  CanonicalInstanceA inst{s, Event{0b01}, {constant(s, 2), constant(s, 1)}, constant(s, 0), s->all()};
  DecisionTree t = make_canonical_a(inst);
  CHECK(t.root.kind == NodeKind::chance);
  CHECK(sorted_gambles(t) == sorted_gambles(l.tree()));
  ChoiceFunction c(ChoiceKind::maximin);
  auto v = check_subtree_perfect_at(t, c, NoModel{}, "N1");
  CHECK(v.outcome == Outcome::fail);
}

TEST_CASE("the imprecise utility example is a shape (b) tree") {
  auto l = load("fig13");
  auto s = l.problem.space;
  auto label = [&](const char* r) { return Gamble::constant(1, s->all(), Reward(std::string(r))); };
  CanonicalInstanceB inst{s, {label("r1"), label("r2")}, {label("r3")}, s->all()};
  DecisionTree t = make_canonical_b(inst);
  CHECK(sorted_gambles(t) == sorted_gambles(l.tree()));
  auto r = check_subtree_perfect(t, ChoiceFunction(ChoiceKind::imprecise_utility), l.model);
  CHECK_FALSE(r.perfect);
}

TEST_CASE("degenerate and invalid canonical instances") {
  auto s = testing::omega(2);
  CHECK(enumerate_strategies(make_canonical_b({s, {constant(s, 1)}, {constant(s, 2)}, s->all()})).size() == 2);
  CHECK(enumerate_strategies(make_canonical_a({s, Event{0b01}, {constant(s, 1)}, constant(s, 2), s->all()})).size() == 1);
  CHECK_THROWS_AS(make_canonical_a({s, Event{0b11}, {constant(s, 1)}, constant(s, 2), s->all()}), Error);
  CHECK_THROWS_AS(make_canonical_a({s, Event{0b01}, {}, constant(s, 2), s->all()}), Error);
  CHECK_THROWS_AS(make_canonical_b({s, {constant(s, 1)}, {}, s->all()}), Error);
  CHECK_THROWS_AS(make_canonical_b({s, {constant(s, 1)}, {constant(s, 1)}, Event{}}), Error);
}

TEST_CASE("canonical checker: expected utility passes") {
  testing::Rng rng(61);
  auto s = testing::omega(3);
  MassFunction p = rng.mass(s);
  auto pool = rng.gambles(20, 3);
  CanonicalLimits lim;
  lim.max_n = 2;
  lim.max_m = 2;
  auto r = check_canonical(ChoiceFunction(ChoiceKind::eu), p, s, pool, lim);
  CHECK(r.passed);
  CHECK(r.exhausted);
  CHECK(r.summary == "no counterexample found in pool");
}

TEST_CASE("canonical checker: maximin fails on shape (a)") {
  auto s = make_space({"A1", "A2"});
  std::vector<Gamble> pool{constant(s, 2), constant(s, 1), constant(s, 0)};
  CanonicalLimits lim;
  lim.shape_b = false;
  auto r = check_canonical(ChoiceFunction(ChoiceKind::maximin), NoModel{}, s, pool, lim);
  REQUIRE_FALSE(r.passed);
  CHECK(r.failure->shape == CanonicalShape::a);
  CHECK(r.failure->verdict.outcome == Outcome::fail);
}

TEST_CASE("canonical checker: maximality fails on shape (b)") {
  auto s = make_space({"A1", "A2"});
  CredalSet m({MassFunction(s, {q("4/5"), q("1/5")}), MassFunction(s, {q("1/5"), q("4/5")})});
  Gamble x1 = Gamble::numeric(s->all(), {5, -5});
  Gamble x2 = constant(s, 1);
  Gamble x3 = constant(s, 2);
  // x3 beats x2; x1 is incomparable with both.
  auto ps = oracle::tables(m);
  CHECK(oracle::lower(ps, oracle::difference(x3, x2, s->all()), s->all()) > 0);
  for (auto [a, b] : {std::pair{x1, x2}, std::pair{x1, x3}}) {
    CHECK_FALSE(oracle::lower(ps, oracle::difference(a, b, s->all()), s->all()) > 0);
    CHECK_FALSE(oracle::lower(ps, oracle::difference(b, a, s->all()), s->all()) > 0);
  }
  CanonicalLimits lim;
  lim.shape_a = false;
  auto r = check_canonical(ChoiceFunction(ChoiceKind::maximality), m, s, {x1, x2, x3}, lim);
  REQUIRE_FALSE(r.passed);
  CHECK(r.failure->shape == CanonicalShape::b);
}

TEST_CASE("direct evaluation agrees with the full tree pipeline") {
  testing::Rng rng(62);
  struct Case {
    ChoiceKind kind;
    bool credal;
  };
  int failures_seen = 0;
  for (Case c : {Case{ChoiceKind::maximality, true}, Case{ChoiceKind::e_admissible_vertex, true},
                 Case{ChoiceKind::e_admissible_hull, true}, Case{ChoiceKind::interval_dominance, true},
                 Case{ChoiceKind::gamma_maximin, true}, Case{ChoiceKind::maximin, false},
                 Case{ChoiceKind::pointwise_dominance, false}}) {
    for (int rep = 0; rep < 6; ++rep) {
      auto s = testing::omega(3);
      UncertaintyModel model = NoModel{};
      if (c.credal) model = rng.credal(s, 2);
      auto pool = rng.gambles(4, 3, -2, 2);
      CanonicalLimits lim;
      lim.max_n = 2;
      lim.max_m = 2;
      ChoiceFunction f(c.kind);
      auto fast = check_canonical(f, model, s, pool, lim);
      lim.full_pipeline = true;
      auto full = check_canonical(f, model, s, pool, lim);
      CHECK(fast.passed == full.passed);
      CHECK(fast.instances == full.instances);
      if (!fast.passed && !full.passed) {
        ++failures_seen;
        CHECK(fast.failure->shape == full.failure->shape);
        CHECK(fast.failure->a == full.failure->a);
        CHECK(fast.failure->b == full.failure->b);
        CHECK(fast.failure->xs == full.failure->xs);
        CHECK(fast.failure->ys == full.failure->ys);
      }
    }
  }
  // Both outcomes were exercised.
  CHECK(failures_seen > 0);
  CHECK(failures_seen < 42);
}

TEST_CASE("instance budget") {
  testing::Rng rng(63);
  auto s = testing::omega(3);
  CanonicalLimits lim;
  lim.max_instances = 10;
  auto r = check_canonical(ChoiceFunction(ChoiceKind::maximin), NoModel{}, s, rng.gambles(6, 3), lim);
  if (r.passed) {
    CHECK_FALSE(r.exhausted);
    CHECK(r.instances == 10);
  }
}

TEST_CASE("random trees") {
  FuzzConfig cfg;
  cfg.seed = 7;
  cfg.omega_size = 4;
  cfg.max_depth = 3;
  cfg.sampler = parse_model_sampler("credal(k=2)");
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto a = gen_random_tree(cfg, i);
    auto b = gen_random_tree(cfg, i);
    CHECK(identical(a.tree, b.tree));
    CHECK(identical(a.model, b.model));
    CHECK(identical(validate_tree(a.tree, a.tree.space, PruneMode::reject), a.tree));
    CHECK(count_strategies(a.tree) <= cfg.max_strategies);
    const auto& m = std::get<CredalSet>(a.model);
    CHECK(m.members().size() == 2);
    CHECK(m.positivity_checked());
  }
  CHECK_FALSE(identical(gen_random_tree(cfg, 0).tree, gen_random_tree(cfg, 1).tree));
}

TEST_CASE("sampler descriptors") {
  CHECK(parse_model_sampler("joint").kind == SamplerKind::joint);
  CHECK(parse_model_sampler("credal(k=3)").k == 3);
  CHECK(parse_model_sampler("product(k=2)").kind == SamplerKind::product);
  CHECK(describe(parse_model_sampler("credal(k=3)")) == "credal(k=3)");
  CHECK_THROWS_AS(parse_model_sampler("credal(k=0)"), Error);
  CHECK_THROWS_AS(parse_model_sampler("credal(3)"), Error);
  CHECK_THROWS_AS(parse_model_sampler("lottery"), Error);
  FuzzConfig bad;
  bad.omega_size = 9;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("fuzzing: expected utility and product gamma-maximin never fail") {
  FuzzConfig cfg;
  cfg.seed = 3;
  cfg.tree_count = 200;
  cfg.sampler = parse_model_sampler("joint");
  auto eu = fuzz_equivalence(ChoiceFunction(ChoiceKind::eu), cfg.sampler, cfg);
  CHECK(eu.failures.empty());
  CHECK(eu.error_trees == 0);
  cfg.sampler = parse_model_sampler("product(k=2)");
  auto gm = fuzz_equivalence(ChoiceFunction(ChoiceKind::gamma_maximin), cfg.sampler, cfg);
  CHECK(gm.failures.empty());
}

TEST_CASE("fuzzing: reports do not depend on the thread count") {
  FuzzConfig cfg;
  cfg.seed = 5;
  cfg.tree_count = 120;
  cfg.sampler = parse_model_sampler("credal(k=2)");
  ChoiceFunction c(ChoiceKind::maximality);
  auto one = fuzz_equivalence(c, cfg.sampler, cfg);
  cfg.threads = 3;
  auto three = fuzz_equivalence(c, cfg.sampler, cfg);
  CHECK(one.text() == three.text());
  CHECK(fuzz_json(one) == fuzz_json(three));
}
