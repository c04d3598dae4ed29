// Exact rational feasibility for small linear systems.
#pragma once

#include <vector>

#include "subtree/rational.hpp"

namespace subtree {

/// Decides whether { v >= 0 : rows · v = rhs } is nonempty. Phase-one simplex
/// over exact rationals with Bland's rule, so it always terminates.
bool feasible_nonnegative(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& rhs);

}  // namespace subtree
