#include "subtree/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "subtree/dot.hpp"
#include "subtree/error.hpp"
#include "subtree/io.hpp"
#include "subtree/report.hpp"
#include "subtree/theoremlab.hpp"

namespace subtree {

namespace {

struct Options {
  std::string tree;
  std::string model;
  std::string choice;
  std::string condition;
  std::string node;
  std::string format = "text";
  std::string out;
  // canonical
  std::size_t max_n = 4;
  std::size_t max_m = 4;
  std::string shape = "both";
  std::uint64_t budget = 0;
  // fuzz
  std::string sampler = "credal(k=2)";
  std::uint64_t seed = 1;
  std::size_t trees = 200;
  std::size_t max_depth = 4;
  std::size_t omega = 4;
  std::size_t threads = 1;
  // export-dot
  std::size_t strategy = 0;
};

struct Loaded {
  Problem problem;
  UncertaintyModel model = NoModel{};
};

Loaded load(const Options& o) {
  if (o.tree.empty()) throw Error(ErrorCode::usage, "--tree is required");
  Loaded l{load_problem(o.tree)};
  if (!o.model.empty()) l.model = load_model(o.model, l.problem);
  return l;
}

ChoiceFunction require_choice(const Options& o) {
  if (o.choice.empty()) throw Error(ErrorCode::usage, "--choice is required");
  return parse_choice(o.choice);
}

bool structured(const Options& o) { return o.format == "structured"; }

std::string emit(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct Result {
  std::string text;
  int code = 0;
};

Result cmd_strategies(const Options& o) {
  Loaded l = load(o);
  return {structured(o) ? emit(strategies_json(l.problem)) : strategies_text(l.problem)};
}

Result cmd_solve(const Options& o) {
  Loaded l = load(o);
  ChoiceFunction c = require_choice(o);
  Event b = o.condition.empty() ? l.problem.tree->root_scope : resolve_event(l.problem, o.condition);
  SolveResult r = solve(*l.problem.tree, c, l.model, b);
  return {structured(o) ? emit(solve_json(l.problem, c, l.model, r)) : solve_text(l.problem, c, l.model, r)};
}

Result cmd_check(const Options& o) {
  Loaded l = load(o);
  ChoiceFunction c = require_choice(o);
  PerfectnessReport r = check_subtree_perfect(*l.problem.tree, c, l.model);
  return {structured(o) ? emit(check_json(l.problem, c, l.model, r)) : check_text(l.problem, c, l.model, r),
          r.perfect ? 0 : 1};
}

Result cmd_check_node(const Options& o) {
  Loaded l = load(o);
  ChoiceFunction c = require_choice(o);
  if (o.node.empty()) throw Error(ErrorCode::usage, "--node is required");
  PerfectnessVerdict v = check_subtree_perfect_at(*l.problem.tree, c, l.model, o.node);
  std::string text = structured(o) ? emit(verdict_json(*l.problem.tree, c, l.model, v))
                                   : verdict_text(*l.problem.tree, v);
  return {text, v.ok() ? 0 : 1};
}

Result cmd_canonical(const Options& o) {
  Loaded l = load(o);
  ChoiceFunction c = require_choice(o);
  CanonicalLimits lim;
  lim.max_n = o.max_n;
  lim.max_m = o.max_m;
  lim.max_instances = o.budget;
  if (o.shape == "a") {
    lim.shape_b = false;
  } else if (o.shape == "b") {
    lim.shape_a = false;
  } else if (o.shape != "both") {
    throw Error(ErrorCode::usage, "--shape must be a, b or both");
  }
  if (!o.condition.empty()) lim.events_b = std::vector<Event>{resolve_event(l.problem, o.condition)};
  std::vector<Gamble> pool = substrategy_gambles(*l.problem.tree);
  CanonicalReport r = check_canonical(c, l.model, l.problem.space, pool, lim);
  std::string text = structured(o) ? emit(canonical_json(l.problem.space, pool, r))
                                   : canonical_text(l.problem.space, pool, r);
  return {text, r.passed ? 0 : 1};
}

Result cmd_fuzz(const Options& o) {
  ChoiceFunction c = require_choice(o);
  FuzzConfig cfg;
  cfg.seed = o.seed;
  cfg.tree_count = o.trees;
  cfg.max_depth = o.max_depth;
  cfg.omega_size = o.omega;
  cfg.threads = o.threads;
  cfg.sampler = parse_model_sampler(o.sampler);
  FuzzReport r = fuzz_equivalence(c, cfg.sampler, cfg);
  return {structured(o) ? emit(fuzz_json(r)) : r.text(), r.failures.empty() ? 0 : 1};
}

Result cmd_export_dot(const Options& o) {
  Loaded l = load(o);
  const DecisionTree& tree = *l.problem.tree;
  if (o.strategy != 0) {
    auto all = enumerate_strategies(tree);
    if (o.strategy > all.size()) {
      throw Error(ErrorCode::usage, "--strategy " + std::to_string(o.strategy) + " out of range (" +
                                        std::to_string(all.size()) + " strategies)");
    }
    return {export_dot(tree, all[o.strategy - 1])};
  }
  if (!o.choice.empty()) {
    ChoiceFunction c = parse_choice(o.choice);
    Event b = o.condition.empty() ? tree.root_scope : resolve_event(l.problem, o.condition);
    return {export_dot(tree, normal_form_solution(tree, c, l.model, b).strategies)};
  }
  return {export_dot(tree)};
}

void common(CLI::App* sub, Options& o, bool choice) {
  sub->add_option("--tree", o.tree, "problem file")->check(CLI::ExistingFile);
  sub->add_option("--model", o.model, "model file")->check(CLI::ExistingFile);
  if (choice) sub->add_option("--choice", o.choice, "choice function");
  sub->add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  sub->add_option("--out", o.out, "write output here instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact solver and subtree perfectness checker for decision trees", "subtree"};
  app.require_subcommand(1);

  auto* strategies = app.add_subcommand("strategies", "list every strategy of a tree");
  common(strategies, o, false);

  auto* solve_cmd = app.add_subcommand("solve", "normal form solution");
  common(solve_cmd, o, true);
  solve_cmd->add_option("--condition", o.condition, "conditioning event");

  auto* check = app.add_subcommand("check", "subtree perfectness at every node");
  common(check, o, true);

  auto* check_node = app.add_subcommand("check-node", "subtree perfectness at one node");
  common(check_node, o, true);
  check_node->add_option("--node", o.node, "node id");

  auto* canonical = app.add_subcommand("canonical", "search canonical trees over the tree's sub-strategy gambles");
  common(canonical, o, true);
  canonical->add_option("--condition", o.condition, "only this conditioning event");
  canonical->add_option("--max-n", o.max_n, "largest first gamble set");
  canonical->add_option("--max-m", o.max_m, "largest second gamble set");
  canonical->add_option("--shape", o.shape, "a, b or both");
  canonical->add_option("--budget", o.budget, "stop after this many instances (0: none)");

  auto* fuzz = app.add_subcommand("fuzz", "compare the tree check with the canonical check on random trees");
  fuzz->add_option("--choice", o.choice, "choice function");
  fuzz->add_option("--sampler", o.sampler, "joint, credal(k=N) or product(k=N)");
  fuzz->add_option("--seed", o.seed);
  fuzz->add_option("--trees", o.trees);
  fuzz->add_option("--max-depth", o.max_depth);
  fuzz->add_option("--omega", o.omega);
  fuzz->add_option("--threads", o.threads);
  fuzz->add_option("--format", o.format)->check(CLI::IsMember({"text", "structured"}));
  fuzz->add_option("--out", o.out);

  auto* dot = app.add_subcommand("export-dot", "DOT text for a tree, one strategy, or a solution");
  common(dot, o, true);
  dot->add_option("--strategy", o.strategy, "1-based strategy index, canonical order");
  dot->add_option("--condition", o.condition, "conditioning event for --choice");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    err << "usage error: " << msg << "\n";
    return 2;
  }

  try {
    Result r;
    if (*strategies) r = cmd_strategies(o);
    if (*solve_cmd) r = cmd_solve(o);
    if (*check) r = cmd_check(o);
    if (*check_node) r = cmd_check_node(o);
    if (*canonical) r = cmd_canonical(o);
    if (*fuzz) r = cmd_fuzz(o);
    if (*dot) r = cmd_export_dot(o);
    if (o.out.empty()) {
      out << r.text;
    } else {
      std::ofstream f(o.out, std::ios::binary);
      f << r.text;
      if (!f) throw Error(ErrorCode::usage, "cannot write " + o.out);
    }
    return r.code;
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace subtree
