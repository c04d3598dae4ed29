#include "subtree/theoremlab.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "subtree/error.hpp"

namespace subtree {

// ---------------------------------------------------------------------------
// Canonical shapes

namespace {

void require_cover(const Gamble& g, Event e, const std::string& what) {
  if (!e.subset_of(g.scope())) throw Error(ErrorCode::instance_invalid, what + " does not cover its event");
}

Node gamble_leaf(std::string id, const Gamble& g) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::gamble_leaf;
  n.gamble = g;
  return n;
}

Node decision_over(std::string id, const std::vector<Gamble>& gs, const std::string& prefix) {
  Node n;
  n.id = std::move(id);
  n.kind = NodeKind::decision;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    std::string leaf = prefix + std::to_string(i + 1);
    n.arcs.push_back(Arc{i, leaf, Event{}, gamble_leaf(leaf, gs[i])});
  }
  return n;
}

}  // namespace

DecisionTree make_canonical_a(const CanonicalInstanceA& inst) {
  if (!inst.space) throw Error(ErrorCode::instance_invalid, "instance has no space");
  const Event a = inst.a & inst.b;
  const Event rest = inst.b - inst.a;
  if (a.empty() || rest.empty()) {
    throw Error(ErrorCode::instance_invalid, "A must meet both B and its complement within B");
  }
  if (inst.xs.empty()) throw Error(ErrorCode::instance_invalid, "shape (a) needs at least one gamble x");
  for (const auto& x : inst.xs) require_cover(x, a, "an x gamble");
  require_cover(inst.z, rest, "the z gamble");

  Node root;
  root.id = "N";
  root.kind = NodeKind::chance;
  root.arcs.push_back(Arc{0, "A", a, decision_over("N1", inst.xs, "X")});
  root.arcs.push_back(Arc{1, "not A", inst.space->all() - inst.a, gamble_leaf("Z", inst.z)});
  return validate_tree(DecisionTree{inst.space, inst.b, std::move(root)}, inst.space, PruneMode::reject);
}

DecisionTree make_canonical_b(const CanonicalInstanceB& inst) {
  if (!inst.space) throw Error(ErrorCode::instance_invalid, "instance has no space");
  if (inst.b.empty()) throw Error(ErrorCode::instance_invalid, "B must be nonempty");
  if (inst.xs.empty() || inst.ys.empty()) {
    throw Error(ErrorCode::instance_invalid, "shape (b) needs gambles on both branches");
  }
  for (const auto& x : inst.xs) require_cover(x, inst.b, "an x gamble");
  for (const auto& y : inst.ys) require_cover(y, inst.b, "a y gamble");

  Node root;
  root.id = "N";
  root.kind = NodeKind::decision;
  root.arcs.push_back(Arc{0, "d1", Event{}, decision_over("N1", inst.xs, "X")});
  root.arcs.push_back(Arc{1, "d2", Event{}, decision_over("N2", inst.ys, "Y")});
  return validate_tree(DecisionTree{inst.space, inst.b, std::move(root)}, inst.space, PruneMode::reject);
}

// ---------------------------------------------------------------------------
// Canonical checker

namespace {

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  return idx;
}

// Calls fn(combination) for every k-subset of {0..n-1}, sizes 1..max_k in
// order; stops when fn returns true.
template <typename Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k == 0 || k > n) return false;
  auto idx = first_combination(k);
  do {
    if (fn(idx)) return true;
  } while (next_combination(idx, n));
  return false;
}

// Pool gambles usable on one event: their pool indices, a class per gamble
// (pointwise equality on the event) and lazily computed feature rows.
struct Candidates {
  std::vector<std::size_t> pool_index;
  std::vector<std::size_t> cls;
  std::vector<std::vector<Rational>> rows;  // per class
};

class Search {
 public:
  Search(const ChoiceFunction& choice, const UncertaintyModel& model, const SpacePtr& space,
         const std::vector<Gamble>& pool, const CanonicalLimits& limits)
      : choice_(choice), model_(model), space_(space), pool_(pool), limits_(limits) {}

  CanonicalReport run() {
    std::vector<Event> events_b;
    if (limits_.events_b) {
      for (Event b : *limits_.events_b) {
        if (!b.empty() && std::find(events_b.begin(), events_b.end(), b) == events_b.end()) events_b.push_back(b);
      }
    } else {
      for (std::uint64_t bits = 1; bits <= space_->all().bits; ++bits) events_b.push_back(Event{bits});
    }
    if (limits_.shape_b) {
      for (Event b : events_b) {
        if (shape_b(b)) return finish();
      }
    }
    if (limits_.shape_a) {
      for (Event b : events_b) {
        for (Event a : a_events(b)) {
          if (shape_a(a, b)) return finish();
        }
      }
    }
    return finish();
  }

 private:
  CanonicalReport finish() {
    if (report_.failure) {
      report_.passed = false;
      const auto& f = *report_.failure;
      std::ostringstream out;
      out << "counterexample: shape (" << (f.shape == CanonicalShape::a ? "a" : "b") << ") B="
          << space_->describe(f.b);
      if (f.shape == CanonicalShape::a) out << " A=" << space_->describe(f.a);
      out << ", " << outcome_name(f.verdict.outcome) << " at " << f.verdict.node_id;
      report_.summary = out.str();
    } else if (!report_.exhausted) {
      report_.summary = "instance budget exhausted; no counterexample found so far";
    } else {
      report_.summary = "no counterexample found in pool";
    }
    return report_;
  }

  std::vector<Event> a_events(Event b) const {
    std::vector<Event> out;
    auto add = [&](Event a) {
      a = a & b;
      if (a.empty() || a == b) return;
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    };
    if (limits_.events_a) {
      for (Event a : *limits_.events_a) add(a);
    } else {
      // Proper nonempty subsets of b, ascending.
      for (std::uint64_t sub = (b.bits - 1) & b.bits; sub != 0; sub = (sub - 1) & b.bits) add(Event{sub});
      std::sort(out.begin(), out.end());
    }
    return out;
  }

  Candidates candidates(Event e) const {
    Candidates c;
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      if (!e.subset_of(pool_[i].scope())) continue;
      c.pool_index.push_back(i);
      std::size_t k = 0;
      while (k < reps.size() && !pool_[reps[k]].agrees_on(pool_[i], e)) ++k;
      if (k == reps.size()) {
        reps.push_back(i);
        if (choice_.has_features()) c.rows.push_back(choice_.features(pool_[i], model_, e));
      }
      c.cls.push_back(k);
    }
    return c;
  }

  bool budget_spent() {
    if (limits_.max_instances != 0 && report_.instances >= limits_.max_instances) {
      report_.exhausted = false;
      return true;
    }
    ++report_.instances;
    return false;
  }

  // Choice among the distinct classes of `items`; returns the chosen classes.
  template <typename RowOf, typename GambleOf>
  std::vector<std::size_t> chosen_classes(const std::vector<std::size_t>& item_cls, RowOf&& row_of,
                                          GambleOf&& gamble_of, Event b) {
    std::vector<std::size_t> distinct;
    for (std::size_t c : item_cls) {
      if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(c);
    }
    Selection sel;
    if (choice_.has_features()) {
      std::vector<std::vector<Rational>> rows;
      rows.reserve(distinct.size());
      for (std::size_t c : distinct) rows.push_back(row_of(c));
      sel = choice_.select(rows);
    } else {
      std::vector<Gamble> gs;
      for (std::size_t c : distinct) gs.push_back(gamble_of(c));
      sel = choice_(gs, model_, b);
    }
    std::vector<std::size_t> out;
    for (std::size_t i : sel) out.push_back(distinct[i]);
    return out;
  }

  static bool contains(const std::vector<std::size_t>& v, std::size_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  }

  // Restricted vs local solution at a decision node over items, by position.
  static bool node_fails(const std::vector<std::size_t>& item_cls, const std::vector<std::size_t>& global,
                         const std::vector<std::size_t>& local) {
    bool any = false;
    bool differ = false;
    for (std::size_t c : item_cls) {
      const bool r = contains(global, c);
      any = any || r;
      differ = differ || r != contains(local, c);
    }
    return any && differ;
  }

  bool confirm(CanonicalShape shape, Event a, Event b, std::vector<std::size_t> xs, std::vector<std::size_t> ys,
               std::optional<std::size_t> z, bool expect_failure) {
    DecisionTree tree;
    std::vector<Gamble> gx;
    for (std::size_t i : xs) gx.push_back(pool_[i]);
    if (shape == CanonicalShape::a) {
      tree = make_canonical_a(CanonicalInstanceA{space_, a, gx, pool_[*z], b});
    } else {
      std::vector<Gamble> gy;
      for (std::size_t i : ys) gy.push_back(pool_[i]);
      tree = make_canonical_b(CanonicalInstanceB{space_, gx, gy, b});
    }
    PerfectnessReport full = check_subtree_perfect(tree, choice_, model_);
    if (!limits_.full_pipeline && full.perfect == expect_failure) {
      throw std::logic_error("canonical evaluation disagrees with the tree pipeline");
    }
    if (full.perfect) return false;
    CanonicalFailure f;
    f.shape = shape;
    f.a = a;
    f.b = b;
    f.xs = std::move(xs);
    f.ys = std::move(ys);
    f.z = z;
    f.verdict = *std::find_if(full.verdicts.begin(), full.verdicts.end(),
                              [](const PerfectnessVerdict& v) { return !v.ok(); });
    f.tree = std::move(tree);
    report_.failure = std::move(f);
    return true;
  }

  bool shape_b(Event b) {
    Candidates c = candidates(b);
    const std::size_t n_cand = c.pool_index.size();
    if (n_cand == 0) return false;
    auto row_of = [&](std::size_t cls) -> const std::vector<Rational>& { return c.rows[cls]; };
    auto gamble_of = [&](std::size_t cls) {
      for (std::size_t k = 0; k < n_cand; ++k) {
        if (c.cls[k] == cls) return pool_[c.pool_index[k]];
      }
      return Gamble{};
    };
    auto to_pool = [&](const std::vector<std::size_t>& idx) {
      std::vector<std::size_t> out;
      for (std::size_t k : idx) out.push_back(c.pool_index[k]);
      return out;
    };
    bool stop = false;
    for (std::size_t total = 2; total <= limits_.max_n + limits_.max_m && !stop; ++total) {
      for (std::size_t n = (total + 1) / 2; n <= std::min(limits_.max_n, total - 1) && !stop; ++n) {
        const std::size_t m = total - n;
        if (m > limits_.max_m || m == 0) continue;
        stop = for_each_combination(n_cand, n, [&](const std::vector<std::size_t>& xs) {
          return for_each_combination(n_cand, m, [&](const std::vector<std::size_t>& ys) {
            if (n == m && ys < xs) return false;
            if (budget_spent()) return true;
            if (limits_.full_pipeline) return confirm(CanonicalShape::b, Event{}, b, to_pool(xs), to_pool(ys), {}, false);
            std::vector<std::size_t> cx;
            std::vector<std::size_t> cy;
            for (std::size_t k : xs) cx.push_back(c.cls[k]);
            for (std::size_t k : ys) cy.push_back(c.cls[k]);
            std::vector<std::size_t> all = cx;
            all.insert(all.end(), cy.begin(), cy.end());
            auto global = chosen_classes(all, row_of, gamble_of, b);
            auto local_x = chosen_classes(cx, row_of, gamble_of, b);
            auto local_y = chosen_classes(cy, row_of, gamble_of, b);
            if (!node_fails(cx, global, local_x) && !node_fails(cy, global, local_y)) return false;
            return confirm(CanonicalShape::b, Event{}, b, to_pool(xs), to_pool(ys), {}, true);
          });
        });
      }
    }
    return stop;
  }

  bool shape_a(Event a, Event b) {
    const Event rest = b - a;
    Candidates cx = candidates(a);
    Candidates cz = candidates(rest);
    if (cx.pool_index.empty() || cz.pool_index.empty()) return false;

    auto gamble_x = [&](std::size_t cls) {
      for (std::size_t k = 0; k < cx.pool_index.size(); ++k) {
        if (cx.cls[k] == cls) return pool_[cx.pool_index[k]];
      }
      return Gamble{};
    };
    auto combined = [&](std::size_t x_cls, std::size_t z_pool) {
      const Gamble& x = gamble_x(x_cls);
      const Gamble& z = pool_[z_pool];
      std::vector<Reward> values(space_->size(), Rational(0));
      a.for_each([&](std::size_t i) { values[i] = x.at(i); });
      rest.for_each([&](std::size_t i) { values[i] = z.at(i); });
      return Gamble(b, std::move(values));
    };

    bool stop = false;
    std::vector<char> seen_z(cz.pool_index.size());
    for (std::size_t zk = 0; zk < cz.pool_index.size() && !stop; ++zk) {
      // z gambles equal on b−a give the same validated tree.
      if (seen_z[cz.cls[zk]]) continue;
      seen_z[cz.cls[zk]] = 1;
      const std::size_t z_pool = cz.pool_index[zk];
      std::map<std::size_t, std::vector<Rational>> global_rows;
      auto global_row = [&](std::size_t x_cls) -> const std::vector<Rational>& {
        auto it = global_rows.find(x_cls);
        if (it == global_rows.end()) it = global_rows.emplace(x_cls, choice_.features(combined(x_cls, z_pool), model_, b)).first;
        return it->second;
      };
      auto global_gamble = [&](std::size_t x_cls) { return combined(x_cls, z_pool); };
      auto local_row = [&](std::size_t x_cls) -> const std::vector<Rational>& { return cx.rows[x_cls]; };
      for (std::size_t n = 1; n <= limits_.max_n && !stop; ++n) {
        stop = for_each_combination(cx.pool_index.size(), n, [&](const std::vector<std::size_t>& xs) {
          if (budget_spent()) return true;
          std::vector<std::size_t> pool_xs;
          for (std::size_t k : xs) pool_xs.push_back(cx.pool_index[k]);
          if (limits_.full_pipeline) return confirm(CanonicalShape::a, a, b, pool_xs, {}, z_pool, false);
          std::vector<std::size_t> cls;
          for (std::size_t k : xs) cls.push_back(cx.cls[k]);
          auto global = chosen_classes(cls, global_row, global_gamble, b);
          auto local = chosen_classes(cls, local_row, gamble_x, a);
          if (!node_fails(cls, global, local)) return false;
          return confirm(CanonicalShape::a, a, b, pool_xs, {}, z_pool, true);
        });
      }
    }
    return stop;
  }

  const ChoiceFunction& choice_;
  const UncertaintyModel& model_;
  const SpacePtr& space_;
  const std::vector<Gamble>& pool_;
  const CanonicalLimits& limits_;
  CanonicalReport report_;
};

}  // namespace

CanonicalReport check_canonical(const ChoiceFunction& choice, const UncertaintyModel& model, const SpacePtr& space,
                                const std::vector<Gamble>& pool, const CanonicalLimits& limits) {
  if (pool.empty()) throw Error(ErrorCode::empty_input, "canonical check needs a nonempty gamble pool");
  if (!space) throw Error(ErrorCode::instance_invalid, "canonical check needs a space");
  if (!choice.accepts(mode_of(model))) {
    throw Error(ErrorCode::mode_unsupported, choice.name() + " does not accept a model of mode " +
                                                 std::string(model_mode_name(mode_of(model))));
  }
  return Search(choice, model, space, pool, limits).run();
}

// ---------------------------------------------------------------------------
// Random trees

ModelSampler parse_model_sampler(std::string_view text) {
  ModelSampler s;
  std::string t(text);
  std::string head = t.substr(0, t.find('('));
  if (head == "joint") {
    s.kind = SamplerKind::joint;
    s.k = 1;
    if (head.size() != t.size()) throw Error(ErrorCode::invalid_config, "joint sampler takes no arguments");
    return s;
  }
  if (head == "credal") {
    s.kind = SamplerKind::credal;
  } else if (head == "product") {
    s.kind = SamplerKind::product;
  } else {
    throw Error(ErrorCode::invalid_config, "unknown model sampler '" + t + "'");
  }
  if (head.size() == t.size()) return s;
  const std::string args = t.substr(head.size());
  std::size_t k = 0;
  if (args.size() < 5 || args.rfind("(k=", 0) != 0 || args.back() != ')') {
    throw Error(ErrorCode::invalid_config, "expected " + head + "(k=<n>)");
  }
  try {
    std::size_t used = 0;
    k = std::stoul(args.substr(3, args.size() - 4), &used);
    if (used != args.size() - 4) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_config, "bad member count in '" + t + "'");
  }
  if (k == 0 || k > 8) throw Error(ErrorCode::invalid_config, "member count must be between 1 and 8");
  s.k = k;
  return s;
}

std::string describe(const ModelSampler& sampler) {
  switch (sampler.kind) {
    case SamplerKind::joint:
      return "joint";
    case SamplerKind::credal:
      return "credal(k=" + std::to_string(sampler.k) + ")";
    case SamplerKind::product:
      return "product(k=" + std::to_string(sampler.k) + ")";
  }
  return "?";
}

void validate(const FuzzConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_config, what); };
  if (cfg.tree_count == 0) bad("tree count must be positive");
  if (cfg.max_depth == 0) bad("max depth must be positive");
  if (cfg.max_branching < 2) bad("max branching must be at least 2");
  if (cfg.omega_size == 0 || cfg.omega_size > 6) bad("omega size must be between 1 and 6");
  if (cfg.sampler.kind == SamplerKind::product && cfg.omega_size < 2) bad("product sampler needs at least 2 atoms");
  if (cfg.sampler.k == 0) bad("sampler member count must be positive");
  if (cfg.reward_min > cfg.reward_max) bad("reward range is empty");
  mpz_class lo;
  mpz_class hi;
  mpz_cdiv_q(lo.get_mpz_t(), cfg.reward_min.get_num_mpz_t(), cfg.reward_min.get_den_mpz_t());
  mpz_fdiv_q(hi.get_mpz_t(), cfg.reward_max.get_num_mpz_t(), cfg.reward_max.get_den_mpz_t());
  if (lo > hi) bad("reward range holds no integer");
  if (cfg.max_strategies == 0) bad("strategy cap must be positive");
  if (cfg.threads == 0) bad("thread count must be positive");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Bounded draws by plain modulo: std distributions are not specified
// bit-for-bit across standard libraries, and runs must be reproducible.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool percent(std::size_t p) { return below(100) < p; }

 private:
  std::mt19937_64 engine_;
};

// Masses in hundredths, at least one hundredth per atom, uniform over such
// compositions: n-1 distinct cut points in 1..99.
std::vector<Rational> random_masses(Draw& draw, std::size_t n) {
  std::vector<long> cuts;
  while (cuts.size() + 1 < n) {
    long c = 1 + static_cast<long>(draw.below(99));
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(100);
  std::vector<Rational> out;
  long prev = 0;
  for (long c : cuts) {
    out.emplace_back(c - prev, 100);
    prev = c;
  }
  for (auto& q : out) q.canonicalize();
  return out;
}

MassFunction random_mass(Draw& draw, const SpacePtr& space, Event support) {
  std::vector<std::size_t> atoms;
  support.for_each([&](std::size_t i) { atoms.push_back(i); });
  std::vector<Rational> part = random_masses(draw, atoms.size());
  std::vector<Rational> mass(space->size());
  for (std::size_t k = 0; k < atoms.size(); ++k) mass[atoms[k]] = part[k];
  return MassFunction(space, std::move(mass));
}

class TreeMaker {
 public:
  TreeMaker(const FuzzConfig& cfg, Draw& draw, const SpacePtr& space, const std::vector<Event>& cells)
      : cfg_(cfg), draw_(draw), space_(space), cells_(cells) {
    mpz_cdiv_q(lo_.get_mpz_t(), cfg.reward_min.get_num_mpz_t(), cfg.reward_min.get_den_mpz_t());
    mpz_fdiv_q(hi_.get_mpz_t(), cfg.reward_max.get_num_mpz_t(), cfg.reward_max.get_den_mpz_t());
  }

  Node make(const std::string& id, Event scope, std::size_t depth) {
    Node n;
    n.id = id;
    const bool can_split = scope.count() >= 2;
    NodeKind kind = NodeKind::leaf;
    if (depth < cfg_.max_depth) {
      const std::size_t r = draw_.below(100);
      if (depth == 0) {
        kind = can_split && r < 40 ? NodeKind::chance : NodeKind::decision;
      } else if (r < 30) {
        kind = NodeKind::decision;
      } else if (r < 60 && can_split) {
        kind = NodeKind::chance;
      }
    }
    n.kind = kind;
    if (kind == NodeKind::leaf) {
      mpz_class span = hi_ - lo_ + 1;
      n.reward = Rational(lo_ + static_cast<unsigned long>(draw_.below(span.get_ui())));
      return n;
    }
    if (kind == NodeKind::decision) {
      const std::size_t arcs = 2 + draw_.below(cfg_.max_branching - 1);
      for (std::size_t i = 0; i < arcs; ++i) {
        std::string child = id + "." + std::to_string(i + 1);
        n.arcs.push_back(Arc{i, "d" + std::to_string(i + 1), Event{}, make(child, scope, depth + 1)});
      }
      return n;
    }
    std::vector<Event> blocks = split(scope);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::string child = id + "." + std::to_string(i + 1);
      n.arcs.push_back(Arc{i, space_->describe(blocks[i]), blocks[i], make(child, blocks[i], depth + 1)});
    }
    return n;
  }

 private:
  std::vector<Event> singletons(Event scope) const {
    std::vector<Event> out;
    scope.for_each([&](std::size_t i) { out.push_back(Event::atom(i)); });
    return out;
  }

  std::vector<Event> split(Event scope) {
    if (!cells_.empty()) {
      // Product models: split the whole space along the cells (or into
      // atoms), and a cell into its atoms.
      const bool spans = std::all_of(cells_.begin(), cells_.end(), [&](Event c) { return c.intersects(scope); });
      if (spans && draw_.percent(70)) {
        std::vector<Event> out;
        for (Event c : cells_) out.push_back(c & scope);
        return out;
      }
      return singletons(scope);
    }
    std::vector<std::size_t> atoms;
    scope.for_each([&](std::size_t i) { atoms.push_back(i); });
    for (std::size_t i = atoms.size(); i > 1; --i) std::swap(atoms[i - 1], atoms[draw_.below(i)]);
    const std::size_t count = std::min(atoms.size(), 2 + draw_.below(cfg_.max_branching - 1));
    std::vector<Event> blocks(count);
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const std::size_t to = k < count ? k : draw_.below(count);
      blocks[to] = blocks[to] | Event::atom(atoms[k]);
    }
    std::sort(blocks.begin(), blocks.end(), [](Event x, Event y) {
      return std::countr_zero(x.bits) < std::countr_zero(y.bits);
    });
    return blocks;
  }

  const FuzzConfig& cfg_;
  Draw& draw_;
  const SpacePtr& space_;
  const std::vector<Event>& cells_;
  mpz_class lo_;
  mpz_class hi_;
};

}  // namespace

RandomInstance gen_random_tree(const FuzzConfig& cfg, std::uint64_t index) {
  validate(cfg);
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < cfg.omega_size; ++i) atoms.push_back("w" + std::to_string(i + 1));
  SpacePtr space = make_space(std::move(atoms));

  for (std::uint64_t attempt = 0;; ++attempt) {
    Draw draw(splitmix64(splitmix64(cfg.seed) ^ splitmix64(index * 0x100000001b3ULL + attempt)));
    std::vector<Event> cells;
    if (cfg.sampler.kind == SamplerKind::product) {
      // Two nonempty cells: atom 0 in the first, another atom in the second.
      Event first = Event::atom(0);
      const std::size_t anchor = 1 + draw.below(cfg.omega_size - 1);
      for (std::size_t i = 1; i < cfg.omega_size; ++i) {
        if (i != anchor && draw.percent(50)) first = first | Event::atom(i);
      }
      cells = {first, space->all() - first};
    }
    Node root = TreeMaker(cfg, draw, space, cells).make("n", space->all(), 0);
    DecisionTree tree = validate_tree(DecisionTree{space, space->all(), std::move(root)}, space, PruneMode::reject);
    if (count_strategies(tree) > cfg.max_strategies) continue;

    switch (cfg.sampler.kind) {
      case SamplerKind::joint:
        return {std::move(tree), random_mass(draw, space, space->all())};
      case SamplerKind::credal: {
        std::vector<MassFunction> members;
        for (std::size_t k = 0; k < cfg.sampler.k; ++k) members.push_back(random_mass(draw, space, space->all()));
        return {std::move(tree), CredalSet(std::move(members))};
      }
      case SamplerKind::product: {
        SpacePtr coarse = make_space({"c1", "c2"});
        std::vector<MassFunction> marginals;
        for (std::size_t k = 0; k < cfg.sampler.k; ++k) marginals.push_back(random_mass(draw, coarse, coarse->all()));
        std::vector<std::vector<MassFunction>> conditionals(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
          for (std::size_t k = 0; k < cfg.sampler.k; ++k) conditionals[c].push_back(random_mass(draw, space, cells[c]));
        }
        return {std::move(tree), product_credal(cells, marginals, conditionals)};
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Fuzz harness

std::string_view reduction_name(Reduction r) {
  switch (r) {
    case Reduction::not_run:
      return "not-run";
    case Reduction::found_b:
      return "shape-b";
    case Reduction::found_a:
      return "shape-a";
    case Reduction::miss:
      return "miss";
    case Reduction::budget:
      return "budget";
    case Reduction::inconsistency:
      return "THEOREM_INCONSISTENCY";
  }
  return "?";
}

std::size_t FuzzReport::count(Reduction r) const {
  return static_cast<std::size_t>(
      std::count_if(failures.begin(), failures.end(), [&](const FuzzTreeResult& f) { return f.reduction == r; }));
}

std::string FuzzReport::text() const {
  std::ostringstream out;
  const auto nested = std::count_if(failures.begin(), failures.end(), [](const FuzzTreeResult& f) { return f.nested_decision; });
  out << "choice: " << choice << "\n";
  out << "sampler: " << sampler << "\n";
  out << "trees: " << trees << "\n";
  out << "trees with local solve errors: " << error_trees << "\n";
  out << "failing trees: " << failures.size() << " (with nested decisions: " << nested << ")\n";
  out << "reduction: shape-b " << count(Reduction::found_b) << ", shape-a " << count(Reduction::found_a)
      << ", miss " << count(Reduction::miss) << ", budget " << count(Reduction::budget)
      << ", THEOREM_INCONSISTENCY " << count(Reduction::inconsistency) << "\n";
  for (const auto& f : failures) {
    out << "tree " << f.index << ": fail at";
    for (const auto& id : f.failing_nodes) out << " " << id;
    out << "; nested=" << (f.nested_decision ? "yes" : "no") << "; reduction=" << reduction_name(f.reduction)
        << " after " << f.reduction_instances << " instances";
    if (!f.witness.empty()) out << "; " << f.witness;
    out << "\n";
  }
  return out.str();
}

namespace {

constexpr std::size_t kCompleteSearchPool = 6;

std::string pool_list(const std::vector<std::size_t>& idx) {
  std::string out = "[";
  for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? "," : "") + std::to_string(idx[i]);
  return out + "]";
}

void reduce(const ChoiceFunction& choice, const RandomInstance& inst, const FuzzConfig& cfg, FuzzTreeResult& result) {
  const DecisionTree& tree = inst.tree;
  const auto ids = node_ids(tree);

  // Failing nodes and their ancestors first, nearest first; then preorder.
  std::vector<std::string> order;
  auto push = [&](const std::string& id) {
    if (std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
  };
  for (const auto& id : result.failing_nodes) {
    push(id);
    for (std::string up = id; up.find('.') != std::string::npos;) {
      up = up.substr(0, up.rfind('.'));
      push(up);
    }
  }
  for (const auto& id : ids) push(id);

  std::vector<Gamble> pool;
  std::vector<Event> events;
  for (const auto& id : order) {
    DecisionTree sub = subtree_at(tree, id);
    for (const auto& s : enumerate_strategies(sub)) {
      Gamble g = gamble_of(s);
      if (std::find(pool.begin(), pool.end(), g) == pool.end()) pool.push_back(std::move(g));
    }
    if (std::find(events.begin(), events.end(), sub.root_scope) == events.end()) events.push_back(sub.root_scope);
  }
  // Close under intersection; new events go after the path events, ascending.
  std::vector<Event> extra;
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<Event> all = events;
    all.insert(all.end(), extra.begin(), extra.end());
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        Event e = all[i] & all[j];
        if (e.empty() || std::find(all.begin(), all.end(), e) != all.end() ||
            std::find(extra.begin(), extra.end(), e) != extra.end()) {
          continue;
        }
        extra.push_back(e);
        grew = true;
      }
    }
  }
  std::sort(extra.begin(), extra.end());
  events.insert(events.end(), extra.begin(), extra.end());

  CanonicalLimits limits;
  limits.max_n = cfg.reduce_max_n;
  limits.max_m = cfg.reduce_max_m;
  limits.events_b = events;
  limits.events_a = events;
  limits.max_instances = cfg.reduce_budget;
  CanonicalReport rep = check_canonical(choice, inst.model, tree.space, pool, limits);
  result.reduction_instances = rep.instances;

  if (rep.passed && rep.exhausted && pool.size() <= kCompleteSearchPool) {
    // Small pool: repeat with every event and no size limits. A pass here
    // contradicts the equivalence.
    CanonicalLimits complete;
    complete.max_n = pool.size();
    complete.max_m = pool.size();
    complete.max_instances = cfg.reduce_budget;
    rep = check_canonical(choice, inst.model, tree.space, pool, complete);
    result.reduction_instances += rep.instances;
    if (rep.passed && rep.exhausted) {
      result.reduction = Reduction::inconsistency;
      result.witness = "no canonical failure over all events and all gamble tuples";
      return;
    }
  }
  if (rep.failure) {
    const auto& f = *rep.failure;
    result.reduction = f.shape == CanonicalShape::b ? Reduction::found_b : Reduction::found_a;
    std::ostringstream w;
    w << "B=" << tree.space->describe(f.b);
    if (f.shape == CanonicalShape::a) w << " A=" << tree.space->describe(f.a) << " z=" << *f.z;
    w << " xs=" << pool_list(f.xs);
    if (f.shape == CanonicalShape::b) w << " ys=" << pool_list(f.ys);
    w << " (pool " << pool.size() << ")";
    result.witness = w.str();
  } else {
    result.reduction = rep.exhausted ? Reduction::miss : Reduction::budget;
    result.witness = "pool " + std::to_string(pool.size()) + ", events " + std::to_string(events.size());
  }
}

struct Slot {
  bool failed = false;
  bool error = false;
  FuzzTreeResult result;
};

Slot run_one(const ChoiceFunction& choice, const FuzzConfig& cfg, std::uint64_t index) {
  Slot slot;
  RandomInstance inst = gen_random_tree(cfg, index);
  PerfectnessReport rep = check_subtree_perfect(inst.tree, choice, inst.model);
  slot.result.index = index;
  for (const auto& v : rep.verdicts) {
    if (v.outcome == Outcome::error) slot.error = true;
    if (!v.ok()) slot.result.failing_nodes.push_back(v.node_id);
  }
  slot.failed = !rep.perfect;
  if (!slot.failed) return slot;
  slot.result.nested_decision = has_nested_decision(inst.tree);
  reduce(choice, inst, cfg, slot.result);
  return slot;
}

}  // namespace

FuzzReport fuzz_equivalence(const ChoiceFunction& choice, const ModelSampler& sampler, const FuzzConfig& cfg_in) {
  FuzzConfig cfg = cfg_in;
  cfg.sampler = sampler;
  validate(cfg);
  std::vector<Slot> slots(cfg.tree_count);
  const std::size_t workers = std::min<std::size_t>(cfg.threads, cfg.tree_count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.tree_count; ++i) slots[i] = run_one(choice, cfg, i);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < cfg.tree_count; i += workers) slots[i] = run_one(choice, cfg, i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  FuzzReport report;
  report.choice = choice.name();
  report.sampler = describe(sampler);
  report.trees = cfg.tree_count;
  for (auto& s : slots) {
    if (s.error) ++report.error_trees;
    if (s.failed) report.failures.push_back(std::move(s.result));
  }
  return report;
}

}  // namespace subtree
