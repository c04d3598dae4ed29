#include "subtree/dot.hpp"

#include <sstream>

namespace subtree {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string leaf_text(const DecisionTree& tree, const Node& n) {
  if (n.kind == NodeKind::leaf) return reward_text(n.reward);
  std::string out;
  n.gamble.scope().for_each([&](std::size_t i) {
    if (!out.empty()) out += ", ";
    out += tree.space->atom(i) + ": " + reward_text(n.gamble.at(i));
  });
  return out;
}

std::string shape(NodeKind kind) {
  switch (kind) {
    case NodeKind::decision: return "box";
    case NodeKind::chance: return "ellipse";
    default: return "plaintext";
  }
}

class Writer {
 public:
  Writer(const DecisionTree& tree, const Strategy* s) : tree_(tree), s_(s) {}

  std::string run(const std::string& name) {
    out_ << "digraph " << quote(name) << " {\n";
    node(tree_.root, true);
    out_ << "}\n";
    return out_.str();
  }

 private:
  std::size_t kept(const Node& n) const {
    for (const auto& c : s_->choices) {
      if (c.node_id == n.id) return c.arc;
    }
    return n.arcs.size();  // not reached by the strategy
  }

  void node(const Node& n, bool expand) {
    std::string label = n.is_terminal() ? leaf_text(tree_, n) : n.id;
    out_ << "  " << quote(n.id) << " [shape=" << shape(n.kind) << ", label=" << quote(label) << "];\n";
    if (!expand) return;
    for (const auto& arc : n.arcs) {
      bool deleted = s_ != nullptr && n.kind == NodeKind::decision && arc.index != kept(n);
      out_ << "  " << quote(n.id) << " -> " << quote(arc.child.id) << " [label="
           << quote(deleted ? arc.label + " ∥" : arc.label) << (deleted ? ", style=dashed" : "") << "];\n";
    }
    for (const auto& arc : n.arcs) {
      bool deleted = s_ != nullptr && n.kind == NodeKind::decision && arc.index != kept(n);
      node(arc.child, !deleted);
    }
  }

  const DecisionTree& tree_;
  const Strategy* s_;
  std::ostringstream out_;
};

}  // namespace

std::string export_dot(const DecisionTree& tree) { return Writer(tree, nullptr).run("tree"); }

std::string export_dot(const DecisionTree& tree, const Strategy& s, const std::string& graph_name) {
  DecisionTree base = subtree_at(tree, s.tree.root.id);
  return Writer(base, &s).run(graph_name);
}

std::string export_dot(const DecisionTree& tree, const std::vector<Strategy>& solution) {
  std::string out;
  for (std::size_t i = 0; i < solution.size(); ++i) out += export_dot(tree, solution[i], "s" + std::to_string(i + 1));
  return out;
}

}  // namespace subtree
