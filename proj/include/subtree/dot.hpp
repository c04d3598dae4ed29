// Graphviz DOT text for trees, strategies and solutions.
#pragma once

#include <string>
#include <vector>

#include "subtree/trees.hpp"

namespace subtree {

/// The whole tree.
std::string export_dot(const DecisionTree& tree);

/// A strategy drawn against its parent tree: deleted arcs are dashed, carry a
/// "∥" label suffix and lead only to the first node below them.
std::string export_dot(const DecisionTree& tree, const Strategy& s, const std::string& graph_name = "strategy");

/// One digraph per strategy, named s1, s2, ...
std::string export_dot(const DecisionTree& tree, const std::vector<Strategy>& solution);

}  // namespace subtree
