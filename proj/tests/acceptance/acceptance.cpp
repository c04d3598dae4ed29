// One line per acceptance criterion. Every comparison is exact (rational
// equality, set equality); the only numeric tolerances are the run-time
// limits and the 90% reduction rate below.
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "subtree/report.hpp"
#include "subtree/solver.hpp"
#include "subtree/theoremlab.hpp"
#include "testing.hpp"

using namespace subtree;
using testing::load;
using testing::q;

namespace {

constexpr double kEuSuiteSeconds = 60;
constexpr double kFuzzSeconds = 300;
constexpr double kReductionRate = 0.9;

struct Outcome2 {
  bool ok = true;
  std::ostringstream why;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why << what;
    }
  }
};

using Check = std::function<void(Outcome2&)>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PerfectnessVerdict* verdict(const PerfectnessReport& r, const std::string& id) {
  for (const auto& v : r.verdicts) {
    if (v.node_id == id) return &v;
  }
  return nullptr;
}

std::vector<std::string> paths(const DecisionTree& tree, const std::vector<Strategy>& ss) {
  std::vector<std::string> out;
  for (const auto& s : ss) out.push_back(strategy_path(tree, s));
  return out;
}

std::vector<Rational> expectations(const DecisionTree& tree, const MassFunction& p, Event b) {
  std::vector<Rational> out;
  for (const auto& s : enumerate_strategies(tree)) out.push_back(expectation(p, gamble_of(s), b));
  return out;
}

bool outcome_is(const PerfectnessReport& r, const std::string& id, Outcome o) {
  const auto* v = verdict(r, id);
  return v != nullptr && v->outcome == o;
}

std::set<std::vector<Rational>> values(const std::vector<Gamble>& xs, const Selection& sel) {
  std::set<std::vector<Rational>> out;
  for (std::size_t i : sel) {
    std::vector<Rational> v;
    for (std::size_t w = 0; w < xs[i].space_size(); ++w) v.push_back(xs[i].value(w));
    out.insert(v);
  }
  return out;
}

void eu_example_1(Outcome2& o) {
  auto l = load("eu1");
  ChoiceFunction eu(ChoiceKind::eu);
  o.require(expectations(l.tree(), std::get<MassFunction>(l.model), l.tree().root_scope) ==
                std::vector<Rational>{q("6/5"), 1, q("9/5"), 2},
            "expectations differ from 6/5, 1, 9/5, 2");
  auto r = check_subtree_perfect(l.tree(), eu, l.model);
  o.require(paths(l.tree(), r.solution.strategies) == std::vector<std::string>{"N:N2 ∥N1; N2:N2(2) ∥N2(1)"},
            "solution is not N -> N2 -> N2(2)");
  o.require(r.perfect, "some node fails");
  o.require(outcome_is(r, "N1", Outcome::vacuous_hold), "N1 is not vacuous");
}

void eu_example_2(Outcome2& o) {
  auto l = load("eu2");
  const auto& p = std::get<MassFunction>(l.model);
  o.require(expectations(l.tree(), p, l.tree().root_scope) == std::vector<Rational>{q("6/5"), q("11/10")},
            "expectations differ from 6/5, 11/10");
  DecisionTree sub = subtree_at(l.tree(), "N1");
  o.require(expectations(sub, p, sub.root_scope) == std::vector<Rational>{q("6/5"), 1},
            "local expectations differ from 6/5, 1");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::eu), l.model);
  o.require(outcome_is(r, "N1", Outcome::hold), "N1 does not hold");
}

void eu_example_3(Outcome2& o) {
  auto l = load("eu3");
  const auto& a = std::get<TreeFactoredAssessment>(l.model);
  auto all = enumerate_strategies(l.tree());
  o.require(all.size() == 2 && factored_expectation(a, all[0], "N") == q("6/5") &&
                factored_expectation(a, all[1], "N") == q("6/5"),
            "root strategies are not both 6/5");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::eu), l.model);
  const auto* v = verdict(r, "N1");
  o.require(v && v->outcome == Outcome::fail, "N1 does not fail");
  o.require(v && paths(l.tree(), v->only_restricted) == std::vector<std::string>{"N1:N1(2) ∥N1(1)"} &&
                v->only_local.empty(),
            "witness is not N1 -> N1(2)");
}

void fig6_corpus(Outcome2& o) {
  auto l = load("fig6");
  auto all = enumerate_strategies(l.tree());
  o.require(all.size() == 6, "strategy count is not 6");
  const auto& sp = *l.tree().space;
  bool found = false;
  for (const auto& s : all) {
    if (strategy_path(l.tree(), s) != "N1:dS ∥dSbar; N1(1)[1]:d1 ∥d2; N1(1)[2]:d2 ∥d1") continue;
    Gamble g = gamble_of(s);
    found = g.value(sp.index_of("S1E1")) == 9 && g.value(sp.index_of("S1E2")) == 14 &&
            g.value(sp.index_of("S2E1")) == 4 && g.value(sp.index_of("S2E2")) == 19;
  }
  o.require(found, "gamble is not 9 S1E1 + 14 S1E2 + 4 S2E1 + 19 S2E2");
}

void imprecise_utility(Outcome2& o) {
  auto l = load("fig13");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::imprecise_utility), l.model);
  std::set<std::string> root;
  for (const auto& s : r.solution.strategies) root.insert(reward_text(gamble_of(s).at(0)));
  o.require(root == std::set<std::string>{"r1", "r3"}, "root choice is not {r1, r3}");
  const auto* v = verdict(r, "N2");
  std::set<std::string> local;
  if (v) {
    for (const auto& s : v->local_solution) local.insert(reward_text(gamble_of(s).at(0)));
  }
  o.require(local == std::set<std::string>{"r1", "r2"}, "N2 choice is not {r1, r2}");
  o.require(v && v->outcome == Outcome::fail, "N2 does not fail");
}

void e_admissible_success(Outcome2& o) {
  auto l = load("fig16");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::e_admissible_vertex), l.model);
  o.require(enumerate_strategies(l.tree()).size() == 4 && r.solution.strategies.size() == 2, "not 2 of 4 globally");
  o.require(paths(l.tree(), r.solution.strategies) ==
                std::vector<std::string>{"N1:N11 ∥0; N2:0 ∥N21", "N1:0 ∥N11; N2:N21 ∥0"},
            "global solution is not the two mixed strategies");
  for (const char* n : {"N1", "N2"}) {
    const auto* v = verdict(r, n);
    o.require(v && v->local_solution.size() == 2 && enumerate_strategies(subtree_at(l.tree(), n)).size() == 2,
              std::string("not 2 of 2 locally at ") + n);
  }
  o.require(r.perfect, "check does not pass");
}

void e_admissible_failure(Outcome2& o) {
  auto l = load("fig19");
  const auto& m = std::get<CredalSet>(l.model);
  auto all = enumerate_strategies(l.tree());
  Gamble n3 = gamble_of(all[0]);
  o.require(expectation(m.members()[0], n3, l.tree().root_scope) == 3 &&
                expectation(m.members()[1], n3, l.tree().root_scope) == -3,
            "member expectations are not 3 and -3");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::e_admissible_vertex), l.model);
  o.require(paths(l.tree(), r.solution.strategies) == std::vector<std::string>{"N1:N2 ∥2; N2:N3 ∥1", "N1:2 ∥N2"},
            "global solution is not {N3, 2}");
  const auto* v = verdict(r, "N2");
  o.require(v && v->local_solution.size() == 2, "subtree at N2 does not choose both");
  o.require(v && v->outcome == Outcome::fail, "N2 does not fail");
}

void maximin_failure(Outcome2& o) {
  auto l = load("fig22");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::maximin), l.model);
  o.require(r.solution.strategies.size() == 2, "root does not choose both");
  for (const auto& s : enumerate_strategies(l.tree())) {
    Gamble g = gamble_of(s);
    o.require(std::min(g.value(0), g.value(1)) == 0, "worst outcome is not 0");
  }
  const auto* v = verdict(r, "N2");
  o.require(v && paths(l.tree(), v->local_solution) == std::vector<std::string>{"N2:2 ∥1"}, "N2 does not choose 2 only");
  o.require(v && v->outcome == Outcome::fail, "N2 does not fail");
}

void gamma_maximin_failure(Outcome2& o) {
  auto l = load("fig23");
  const auto& m = std::get<CredalSet>(l.model);
  auto all = enumerate_strategies(l.tree());
  Event a1 = l.problem.events.at("A1");
  o.require(lower_expectation(m, gamble_of(all[0]), l.tree().root_scope) == q("1/2") &&
                lower_expectation(m, gamble_of(all[1]), l.tree().root_scope) == q("-1/5"),
            "full-tree lower expectations are not 1/2, -1/5");
  o.require(lower_expectation(m, gamble_of(all[0]), a1) == q("-2/5") && lower_expectation(m, gamble_of(all[1]), a1) == 0,
            "subtree lower expectations are not -2/5, 0");
  auto r = check_subtree_perfect(l.tree(), ChoiceFunction(ChoiceKind::gamma_maximin), l.model);
  const auto* v = verdict(r, "N1");
  o.require(v && v->outcome == Outcome::fail, "N1 does not fail");
  o.require(v && v->reversal(), "no preference reversal");
}

void eu_property(Outcome2& o) {
  auto t0 = std::chrono::steady_clock::now();
  ChoiceFunction eu(ChoiceKind::eu);
  std::size_t bad = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    FuzzConfig cfg;
    cfg.seed = 1010;
    cfg.omega_size = 2 + i % 5;
    cfg.max_depth = 4;
    cfg.sampler = parse_model_sampler("joint");
    auto inst = gen_random_tree(cfg, i);
    const auto& p = std::get<MassFunction>(inst.model);
    if (!p.strictly_positive()) ++bad;
    auto r = check_subtree_perfect(inst.tree, eu, inst.model);
    if (!r.perfect || backward_induct_eu(inst.tree, p) != r.solution.strategies) ++bad;
  }
  double t = seconds_since(t0);
  o.require(bad == 0, std::to_string(bad) + " trees failed");
  o.require(t < kEuSuiteSeconds, "took " + std::to_string(t) + " s");
}

void distributivity(Outcome2& o) {
  testing::Rng rng(1111);
  std::size_t bad = 0;
  for (ChoiceKind k : {ChoiceKind::eu, ChoiceKind::maximin, ChoiceKind::gamma_maximin, ChoiceKind::gamma_maximax}) {
    ChoiceFunction c(k);
    for (int i = 0; i < 500; ++i) {
      auto s = testing::omega(2 + rng.below(4));
      UncertaintyModel model = NoModel{};
      if (k == ChoiceKind::eu) model = rng.mass(s);
      if (k == ChoiceKind::gamma_maximin || k == ChoiceKind::gamma_maximax) model = rng.credal(s, 1 + rng.below(3));
      auto xs = rng.gambles(2 + rng.below(8), s->size(), -3, 3);
      std::vector<Gamble> left;
      std::vector<Gamble> right;
      for (const auto& x : xs) (rng.below(2) ? left : right).push_back(x);
      if (left.empty()) left.push_back(right.back()), right.pop_back();
      if (right.empty()) right.push_back(left.back()), left.pop_back();
      Event b = s->all();
      std::vector<Gamble> merged;
      for (std::size_t j : c(left, model, b)) merged.push_back(left[j]);
      for (std::size_t j : c(right, model, b)) merged.push_back(right[j]);
      if (values(xs, c(xs, model, b)) != values(merged, c(merged, model, b))) ++bad;
    }
  }
  o.require(bad == 0, std::to_string(bad) + " splits failed");
}

void canonical_positives(Outcome2& o) {
  testing::Rng rng(1212);
  auto s = testing::omega(4);
  auto pool = [&] { return rng.gambles(12, 4); };
  auto run = [&](const ChoiceFunction& c, const UncertaintyModel& m, CanonicalLimits lim, const std::string& what) {
    lim.max_n = 3;
    lim.max_m = 3;
    auto r = check_canonical(c, m, s, pool(), lim);
    o.require(r.passed && r.exhausted, what + ": " + r.summary);
  };
  CanonicalLimits shape_b;
  shape_b.shape_a = false;
  run(ChoiceFunction(ChoiceKind::eu), rng.mass(s), shape_b, "eu shape (b)");
  run(ChoiceFunction(ChoiceKind::maximin), NoModel{}, shape_b, "maximin shape (b)");
  run(ChoiceFunction(ChoiceKind::gamma_maximin), rng.credal(s, 3), shape_b, "gamma-maximin shape (b)");
  run(ChoiceFunction(ChoiceKind::gamma_maximax), rng.credal(s, 3), shape_b, "gamma-maximax shape (b)");
  run(ChoiceFunction::by_preorder(min_value_order()), NoModel{}, shape_b, "by-preorder shape (b)");

  CanonicalLimits shape_a;
  shape_a.shape_b = false;
  for (int rep = 0; rep < 3; ++rep) {
    CredalSet m = rng.credal(s, 3);
    o.require(m.positivity_checked(), "credal set is not strictly positive");
    run(ChoiceFunction(ChoiceKind::maximality), m, shape_a, "maximality shape (a)");
    run(ChoiceFunction(ChoiceKind::e_admissible_vertex), m, shape_a, "e-admissible shape (a)");
  }

  // Marginal extension holds for the partition the product is built on, so
  // A ranges over its cells with B the whole space.
  auto coarse = make_space({"c1", "c2"});
  std::vector<Event> cells{Event{0b0011}, Event{0b1100}};
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<std::vector<MassFunction>> conds(2);
    for (std::size_t c = 0; c < 2; ++c) conds[c] = {rng.mass(s, cells[c]), rng.mass(s, cells[c])};
    CredalSet m = product_credal(cells, {rng.mass(coarse), rng.mass(coarse)}, conds);
    CanonicalLimits lim = shape_a;
    lim.events_b = std::vector<Event>{s->all()};
    lim.events_a = cells;
    run(ChoiceFunction(ChoiceKind::gamma_maximin), m, lim, "gamma-maximin product shape (a)");
  }
}

void theorem_consistency(Outcome2& o) {
  auto t0 = std::chrono::steady_clock::now();
  for (ChoiceKind k : {ChoiceKind::maximality, ChoiceKind::e_admissible_vertex}) {
    ChoiceFunction c(k);
    FuzzConfig cfg;
    cfg.tree_count = 200;
    cfg.sampler = parse_model_sampler("credal(k=2)");
    FuzzReport r = fuzz_equivalence(c, cfg.sampler, cfg);
    const std::string name = c.name();
    o.require(!r.failures.empty(), name + ": no failing tree");
    for (const auto& f : r.failures) o.require(f.nested_decision, name + ": failing tree without nested decisions");
    o.require(!r.inconsistent(), name + ": THEOREM_INCONSISTENCY");
    double rate = r.failures.empty() ? 0.0 : double(r.count(Reduction::found_b)) / double(r.failures.size());
    o.require(rate >= kReductionRate, name + ": shape (b) reduction rate " + std::to_string(rate));
    std::cout << "       " << name << ": " << r.failures.size() << " failing of " << r.trees << ", shape (b) found "
              << r.count(Reduction::found_b) << ", misses " << r.count(Reduction::miss) << "\n";
  }
  double t = seconds_since(t0);
  o.require(t < kFuzzSeconds, "took " + std::to_string(t) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Check>> criteria{
      {"EU example 1", eu_example_1},
      {"EU example 2", eu_example_2},
      {"EU example 3 (zero probability)", eu_example_3},
      {"lake tree: 6 strategies and the 9/14/4/19 gamble", fig6_corpus},
      {"imprecise utility", imprecise_utility},
      {"E-admissibility success", e_admissible_success},
      {"E-admissibility failure", e_admissible_failure},
      {"maximin failure", maximin_failure},
      {"gamma-maximin failure", gamma_maximin_failure},
      {"EU perfectness on 300 random trees", eu_property},
      {"distributivity on 500 splits per kind", distributivity},
      {"canonical positives", canonical_positives},
      {"theorem consistency by fuzzing", theorem_consistency},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome2 o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    char time[32];
    std::snprintf(time, sizeof time, "%.2fs", seconds_since(t0));
    std::cout << (o.ok ? "PASS " : "FAIL ") << (i + 1 < 10 ? " " : "") << i + 1 << "  " << criteria[i].first << "  ("
              << time << ")";
    if (!o.ok) std::cout << ": " << o.why.str();
    std::cout << "\n";
    if (!o.ok) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
