// Independent reference computations. Nothing here calls into the choice,
// solver or LP code; expectations are summed directly from mass tables.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "subtree/trees.hpp"
#include "subtree/uncertainty.hpp"

namespace oracle {

using namespace subtree;
using Table = std::vector<Rational>;  // one mass per atom
using Index = std::vector<std::size_t>;

inline Rational expect(const Table& p, const Gamble& x, Event b) {
  Rational num = 0;
  Rational den = 0;
  b.for_each([&](std::size_t w) {
    num += p[w] * x.value(w);
    den += p[w];
  });
  return num / den;
}

inline std::vector<Table> tables(const CredalSet& m) {
  std::vector<Table> out;
  for (const auto& p : m.members()) out.push_back(p.masses());
  return out;
}

inline Rational lower(const std::vector<Table>& ps, const Gamble& x, Event b) {
  Rational best = expect(ps[0], x, b);
  for (const auto& p : ps) best = std::min(best, expect(p, x, b));
  return best;
}

inline Rational upper(const std::vector<Table>& ps, const Gamble& x, Event b) {
  Rational best = expect(ps[0], x, b);
  for (const auto& p : ps) best = std::max(best, expect(p, x, b));
  return best;
}

inline Gamble difference(const Gamble& y, const Gamble& x, Event b) {
  std::vector<Rational> v(x.space_size());
  b.for_each([&](std::size_t w) { v[w] = y.value(w) - x.value(w); });
  return Gamble::numeric(b, v);
}

/// Indices whose score is maximal.
inline Index argmax(const std::vector<Rational>& s) {
  Index out;
  Rational best = *std::max_element(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == best) out.push_back(i);
  }
  return out;
}

inline Index eu(const Table& p, const std::vector<Gamble>& xs, Event b) {
  std::vector<Rational> s;
  for (const auto& x : xs) s.push_back(expect(p, x, b));
  return argmax(s);
}

inline Index maximin(const std::vector<Gamble>& xs, Event b) {
  std::vector<Rational> s;
  for (const auto& x : xs) {
    std::optional<Rational> m;
    b.for_each([&](std::size_t w) {
      if (!m || x.value(w) < *m) m = x.value(w);
    });
    s.push_back(*m);
  }
  return argmax(s);
}

inline Index gamma(const std::vector<Table>& ps, const std::vector<Gamble>& xs, Event b, bool maximax) {
  std::vector<Rational> s;
  for (const auto& x : xs) s.push_back(maximax ? upper(ps, x, b) : lower(ps, x, b));
  return argmax(s);
}

/// Lower expectation of each difference, pair by pair.
inline Index maximality(const std::vector<Table>& ps, const std::vector<Gamble>& xs, Event b) {
  Index out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < xs.size() && !dominated; ++j) {
      dominated = lower(ps, difference(xs[j], xs[i], b), b) > 0;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

inline Index e_admissible_vertex(const std::vector<Table>& ps, const std::vector<Gamble>& xs, Event b) {
  std::set<std::size_t> out;
  for (const auto& p : ps) {
    for (std::size_t i : eu(p, xs, b)) out.insert(i);
  }
  return Index(out.begin(), out.end());
}

/// Solves a square system exactly; false when singular.
inline bool solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs, std::vector<Rational>& x) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return false;
    std::swap(a[c], a[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / a[i][i];
  return true;
}

/// Hull E-admissibility by vertex enumeration of
/// { λ ≥ 0, Σλ = 1, Σ_k λ_k (E_k x − E_k y) ≥ 0 for all y }: the polytope is
/// bounded, so it is nonempty iff one of its vertices exists.
inline Index e_admissible_hull(const std::vector<Table>& ps, const std::vector<Gamble>& xs, Event b) {
  const std::size_t k = ps.size();
  std::vector<std::vector<Rational>> e(xs.size(), std::vector<Rational>(k));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t p = 0; p < k; ++p) e[i][p] = expect(ps[p], xs[i], b);
  }
  Index out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    // Inequalities g · λ ≥ 0.
    std::vector<std::vector<Rational>> g;
    for (std::size_t p = 0; p < k; ++p) {
      std::vector<Rational> row(k, 0);
      row[p] = 1;
      g.push_back(row);
    }
    for (std::size_t j = 0; j < xs.size(); ++j) {
      std::vector<Rational> row(k);
      for (std::size_t p = 0; p < k; ++p) row[p] = e[i][p] - e[j][p];
      g.push_back(row);
    }
    bool found = false;
    std::vector<bool> pick(g.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(k - 1), true);
    do {
      std::vector<std::vector<Rational>> a{std::vector<Rational>(k, 1)};
      std::vector<Rational> rhs{1};
      for (std::size_t r = 0; r < g.size(); ++r) {
        if (pick[r]) {
          a.push_back(g[r]);
          rhs.push_back(0);
        }
      }
      std::vector<Rational> lambda;
      if (!solve_square(a, rhs, lambda)) continue;
      found = std::all_of(g.begin(), g.end(), [&](const std::vector<Rational>& row) {
        Rational s = 0;
        for (std::size_t p = 0; p < k; ++p) s += row[p] * lambda[p];
        return s >= 0;
      });
    } while (!found && std::prev_permutation(pick.begin(), pick.end()));
    if (found) out.push_back(i);
  }
  return out;
}

inline Index interval_dominance(const std::vector<Table>& ps, const std::vector<Gamble>& xs, Event b) {
  Rational best_lower = lower(ps, xs[0], b);
  for (const auto& y : xs) best_lower = std::max(best_lower, lower(ps, y, b));
  Index out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (upper(ps, xs[i], b) >= best_lower) out.push_back(i);
  }
  return out;
}

inline Index pointwise(const std::vector<Gamble>& xs, Event b) {
  Index out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < xs.size() && !dominated; ++j) {
      bool ge = true;
      bool gt = false;
      b.for_each([&](std::size_t w) {
        ge = ge && xs[j].value(w) >= xs[i].value(w);
        gt = gt || xs[j].value(w) > xs[i].value(w);
      });
      dominated = ge && gt;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

/// Every combination of one arc per decision node of the whole tree, reduced
/// to the choices actually reached, deduplicated.
using ChoiceList = std::vector<std::pair<std::string, std::size_t>>;

inline std::set<ChoiceList> strategies_by_combination(const DecisionTree& tree) {
  std::vector<const Node*> decisions;
  std::function<void(const Node&)> collect = [&](const Node& n) {
    if (n.kind == NodeKind::decision) decisions.push_back(&n);
    for (const auto& a : n.arcs) collect(a.child);
  };
  collect(tree.root);
  std::set<ChoiceList> out;
  std::vector<std::size_t> pick(decisions.size(), 0);
  while (true) {
    std::map<std::string, std::size_t> arc_of;
    for (std::size_t i = 0; i < decisions.size(); ++i) arc_of[decisions[i]->id] = decisions[i]->arcs[pick[i]].index;
    ChoiceList reached;
    std::function<void(const Node&)> walk = [&](const Node& n) {
      if (n.kind == NodeKind::decision) {
        std::size_t kept = arc_of[n.id];
        reached.emplace_back(n.id, kept);
        for (const auto& a : n.arcs) {
          if (a.index == kept) walk(a.child);
        }
        return;
      }
      for (const auto& a : n.arcs) walk(a.child);
    };
    walk(tree.root);
    out.insert(reached);
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == decisions[i]->arcs.size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

inline std::uint64_t arc_product(const DecisionTree& tree) {
  std::uint64_t out = 1;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.kind == NodeKind::decision) out *= n.arcs.size();
    for (const auto& a : n.arcs) walk(a.child);
  };
  walk(tree.root);
  return out;
}

/// The reward reached at each atom, found by walking down from the root.
inline Reward reward_at(const DecisionTree& tree, const Strategy& s, std::size_t atom) {
  std::map<std::string, std::size_t> arc_of;
  for (const auto& c : s.choices) arc_of[c.node_id] = c.arc;
  const Node* n = &tree.root;
  while (!n->is_terminal()) {
    const Node* next = nullptr;
    for (const auto& a : n->arcs) {
      if (n->kind == NodeKind::decision ? a.index == arc_of.at(n->id) : a.event.contains(atom)) next = &a.child;
    }
    n = next;
  }
  return n->kind == NodeKind::leaf ? n->reward : n->gamble.at(atom);
}

}  // namespace oracle
