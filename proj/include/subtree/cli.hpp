#pragma once

#include <ostream>

namespace subtree {

/// Exit codes: 0 success, 1 a subtree perfectness failure was found,
/// 2 usage or validation error (one diagnostic line on err).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subtree
