#include "subtree/exact_lp.hpp"

#include <cstddef>
#include <stdexcept>

namespace subtree {

bool feasible_nonnegative(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& rhs) {
  const std::size_t m = rows.size();
  if (rhs.size() != m) throw std::invalid_argument("feasible_nonnegative: row/rhs size mismatch");
  if (m == 0) return true;
  const std::size_t n = rows.front().size();
  const std::size_t width = n + m;  // original columns, then one artificial per row

  // tableau[i][width] holds the right-hand side.
  std::vector<std::vector<Rational>> tableau(m, std::vector<Rational>(width + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n) throw std::invalid_argument("feasible_nonnegative: ragged rows");
    const bool flip = sgn(rhs[i]) < 0;
    for (std::size_t j = 0; j < n; ++j) tableau[i][j] = flip ? Rational(-rows[i][j]) : rows[i][j];
    tableau[i][n + i] = 1;
    tableau[i][width] = flip ? Rational(-rhs[i]) : rhs[i];
    basis[i] = n + i;
  }

  // Reduced costs of "minimize the sum of artificials"; cost[width] is -objective.
  std::vector<Rational> cost(width + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= tableau[i][j];
    cost[width] -= tableau[i][width];
  }

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < width; ++j) {
      if (sgn(cost[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(tableau[i][enter]) <= 0) continue;
      Rational ratio = tableau[i][width] / tableau[i][enter];
      if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen for phase one

    Rational pivot = tableau[leave][enter];
    for (auto& v : tableau[leave]) v /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(tableau[i][enter]) == 0) continue;
      Rational factor = tableau[i][enter];
      for (std::size_t j = 0; j <= width; ++j) tableau[i][j] -= factor * tableau[leave][j];
    }
    Rational factor = cost[enter];
    for (std::size_t j = 0; j <= width; ++j) cost[j] -= factor * tableau[leave][j];
    basis[leave] = enter;
  }
  return sgn(cost[width]) == 0;
}

}  // namespace subtree
