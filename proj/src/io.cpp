#include "subtree/io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "subtree/error.hpp"

namespace subtree {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::parse, what); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
}

const json& member(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + ": missing \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) parse_error(where + ": expected a string");
  return j.get<std::string>();
}

Rational as_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return parse_rational(j.dump());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_float()) {
    parse_error(where + ": write non-integer numbers as strings (\"3/5\" or \"0.6\") so they stay exact");
  }
  parse_error(where + ": expected a number");
}

json rational_json(const Rational& q) { return to_short_string(q); }

json event_json(const PossibilitySpace& space, Event e) {
  json out = json::array();
  e.for_each([&](std::size_t i) { out.push_back(space.atom(i)); });
  return out;
}

Event event_ref(const PossibilitySpace& space, const std::map<std::string, Event>& events, const json& ref,
                const std::string& where) {
  if (ref.is_array()) {
    Event e;
    for (const auto& a : ref) e = e | Event::atom(space.index_of(as_string(a, where)));
    return e;
  }
  std::string name = as_string(ref, where);
  if (auto it = events.find(name); it != events.end()) return it->second;
  if (name == "Omega" || name == "Ω") return space.all();
  if (auto i = space.find(name)) return Event::atom(*i);
  throw Error(ErrorCode::unknown_event, where + ": unknown event '" + name + "'");
}

class TreeReader {
 public:
  TreeReader(const PossibilitySpace& space, const std::map<std::string, Event>& events)
      : space_(space), events_(events) {}

  Node node(const json& j) {
    if (!j.is_object()) parse_error("tree node must be an object");
    Node n;
    n.id = as_string(member(j, "id", "node"), "node id");
    const std::string where = "node '" + n.id + "'";
    const std::string kind = as_string(member(j, "kind", where), where);
    if (kind == "decision" || kind == "chance") {
      n.kind = kind == "decision" ? NodeKind::decision : NodeKind::chance;
      const json& children = member(j, "children", where);
      if (!children.is_array()) parse_error(where + ": children must be a list");
      for (const auto& c : children) {
        Arc arc;
        arc.index = n.arcs.size();
        if (n.kind == NodeKind::chance) {
          const json& ref = member(c, "event", where);
          arc.event = event_ref(space_, events_, ref, where);
          if (auto l = c.find("label"); l != c.end()) {
            arc.label = as_string(*l, where);
          } else {
            arc.label = ref.is_string() ? ref.get<std::string>() : space_.describe(arc.event);
          }
        } else {
          arc.label = as_string(member(c, "label", where), where);
        }
        arc.child = node(member(c, "node", where));
        n.arcs.push_back(std::move(arc));
      }
    } else if (kind == "leaf") {
      n.kind = NodeKind::leaf;
      if (auto r = j.find("reward"); r != j.end()) {
        n.reward = as_rational(*r, where);
      } else if (auto l = j.find("reward_label"); l != j.end()) {
        n.reward = as_string(*l, where);
      } else {
        parse_error(where + ": leaf needs \"reward\" or \"reward_label\"");
      }
    } else if (kind == "gamble" || kind == "gamble_leaf") {
      n.kind = NodeKind::gamble_leaf;
      n.gamble = gamble(j, where);
    } else {
      parse_error(where + ": unknown node kind '" + kind + "'");
    }
    return n;
  }

 private:
  Gamble gamble(const json& j, const std::string& where) {
    const bool labels = j.contains("gamble_labels");
    const json& values = member(j, labels ? "gamble_labels" : "gamble", where);
    if (!values.is_object()) parse_error(where + ": gamble must map events to values");
    Event scope;
    std::vector<Reward> dense(space_.size(), Rational(0));
    for (const auto& [key, value] : values.items()) {
      Event e = event_ref(space_, events_, json(key), where);
      Reward r = labels ? Reward(as_string(value, where)) : Reward(as_rational(value, where));
      bool clash = false;
      (e & scope).for_each([&](std::size_t i) { clash = clash || dense[i] != r; });
      if (clash) {
        throw Error(ErrorCode::overlapping_events,
                    where + ": gamble entries disagree on " + space_.describe(e & scope));
      }
      e.for_each([&](std::size_t i) { dense[i] = r; });
      scope = scope | e;
    }
    return Gamble(scope, std::move(dense));
  }

  const PossibilitySpace& space_;
  const std::map<std::string, Event>& events_;
};

json node_json(const PossibilitySpace& space, const Node& n) {
  json j;
  j["id"] = n.id;
  switch (n.kind) {
    case NodeKind::decision:
    case NodeKind::chance: {
      j["kind"] = n.kind == NodeKind::decision ? "decision" : "chance";
      json children = json::array();
      for (const auto& arc : n.arcs) {
        json c;
        c["label"] = arc.label;
        if (n.kind == NodeKind::chance) c["event"] = event_json(space, arc.event);
        c["node"] = node_json(space, arc.child);
        children.push_back(std::move(c));
      }
      j["children"] = std::move(children);
      break;
    }
    case NodeKind::leaf:
      j["kind"] = "leaf";
      if (is_numeric(n.reward)) {
        j["reward"] = rational_json(std::get<Rational>(n.reward));
      } else {
        j["reward_label"] = std::get<std::string>(n.reward);
      }
      break;
    case NodeKind::gamble_leaf: {
      j["kind"] = "gamble";
      json values = json::object();
      bool labels = false;
      n.gamble.scope().for_each([&](std::size_t i) {
        const Reward& r = n.gamble.at(i);
        labels = labels || !is_numeric(r);
        values[space.atom(i)] = is_numeric(r) ? rational_json(std::get<Rational>(r)) : json(std::get<std::string>(r));
      });
      j[labels ? "gamble_labels" : "gamble"] = std::move(values);
      break;
    }
  }
  return j;
}

MassFunction mass_from(const SpacePtr& space, const json& j, const std::string& where) {
  if (!j.is_object()) parse_error(where + ": mass must map atoms to probabilities");
  std::vector<Rational> mass(space->size());
  std::vector<char> seen(space->size());
  for (const auto& [atom, value] : j.items()) {
    std::size_t i = space->index_of(atom);
    mass[i] = as_rational(value, where);
    seen[i] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw Error(ErrorCode::invalid_mass, where + ": no mass given for atom '" + space->atom(i) + "'");
  }
  return MassFunction(space, std::move(mass));
}

json mass_json(const MassFunction& p) {
  json j = json::object();
  for (std::size_t i = 0; i < p.masses().size(); ++i) j[p.space()->atom(i)] = rational_json(p[i]);
  return j;
}

UncertaintyModel model_from(const json& j, const Problem& problem) {
  const std::string mode = as_string(member(j, "mode", "model"), "model mode");
  const SpacePtr& space = problem.space;
  if (mode == "none") return NoModel{};
  if (mode == "joint") return mass_from(space, member(j, "mass", "joint model"), "joint model");
  if (mode == "factored") {
    const json& arcs = member(j, "arcs", "factored model");
    std::map<std::string, std::vector<Rational>> table;
    for (const auto& [id, probs] : arcs.items()) {
      if (!probs.is_array()) parse_error("factored model: arcs of '" + id + "' must be a list");
      const Node* n = find_node(*problem.tree, id);
      if (!n) throw Error(ErrorCode::unknown_node, "factored model names unknown node '" + id + "'");
      if (n->kind != NodeKind::chance) {
        throw Error(ErrorCode::malformed_tree, "factored model: '" + id + "' is not a chance node");
      }
      auto& row = table[id];
      for (const auto& p : probs) row.push_back(as_rational(p, "factored model '" + id + "'"));
    }
    return TreeFactoredAssessment(problem.tree, std::move(table));
  }
  if (mode == "credal") {
    if (auto members = j.find("members"); members != j.end()) {
      std::vector<MassFunction> out;
      for (const auto& m : *members) out.push_back(mass_from(space, m, "credal member " + std::to_string(out.size() + 1)));
      return CredalSet(std::move(out));
    }
    const json& product = member(j, "product", "credal model");
    std::vector<Event> partition;
    for (const auto& ref : member(product, "partition", "product")) {
      partition.push_back(event_ref(*space, problem.events, ref, "product partition"));
    }
    std::vector<std::string> cells;
    for (std::size_t c = 0; c < partition.size(); ++c) cells.push_back("c" + std::to_string(c + 1));
    SpacePtr coarse = make_space(cells);
    std::vector<MassFunction> marginals;
    for (const auto& m : member(product, "marginals", "product")) {
      std::vector<Rational> mass;
      for (const auto& p : m) mass.push_back(as_rational(p, "product marginal"));
      if (mass.size() != cells.size()) {
        throw Error(ErrorCode::partition_invalid, "product marginal needs one probability per cell");
      }
      marginals.emplace_back(coarse, std::move(mass));
    }
    std::vector<std::vector<MassFunction>> conditionals;
    for (const auto& cell : member(product, "conditionals", "product")) {
      auto& list = conditionals.emplace_back();
      for (const auto& m : cell) list.push_back(mass_from(space, m, "product conditional"));
    }
    return product_credal(partition, marginals, conditionals);
  }
  if (mode == "utilities") {
    UtilityModel u;
    for (const auto& f : member(j, "functions", "utility model")) {
      auto& fn = u.utilities.functions.emplace_back();
      for (const auto& [label, value] : f.items()) fn[label] = as_rational(value, "utility of '" + label + "'");
    }
    if (auto c = j.find("chance"); c != j.end()) {
      UncertaintyModel inner = model_from(*c, problem);
      if (auto* p = std::get_if<MassFunction>(&inner)) {
        u.chance = std::move(*p);
      } else if (auto* f = std::get_if<TreeFactoredAssessment>(&inner)) {
        u.chance = std::move(*f);
      } else if (!std::holds_alternative<NoModel>(inner)) {
        throw Error(ErrorCode::mode_unsupported, "utility model chance part must be joint, factored or none");
      }
    }
    return u;
  }
  throw Error(ErrorCode::mode_unsupported, "unknown model mode '" + mode + "'");
}

json model_json(const UncertaintyModel& model) {
  json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NoModel>) {
          j["mode"] = "none";
        } else if constexpr (std::is_same_v<T, MassFunction>) {
          j["mode"] = "joint";
          j["mass"] = mass_json(m);
        } else if constexpr (std::is_same_v<T, TreeFactoredAssessment>) {
          j["mode"] = "factored";
          json arcs = json::object();
          for (const auto& [id, probs] : m.arc_probabilities()) {
            json row = json::array();
            for (const auto& p : probs) row.push_back(rational_json(p));
            arcs[id] = std::move(row);
          }
          j["arcs"] = std::move(arcs);
        } else if constexpr (std::is_same_v<T, CredalSet>) {
          j["mode"] = "credal";
          json members = json::array();
          for (const auto& p : m.members()) members.push_back(mass_json(p));
          j["members"] = std::move(members);
        } else {
          j["mode"] = "utilities";
          json fns = json::array();
          for (const auto& f : m.utilities.functions) {
            json fj = json::object();
            for (const auto& [label, u] : f) fj[label] = rational_json(u);
            fns.push_back(std::move(fj));
          }
          j["functions"] = std::move(fns);
          if (const auto* p = std::get_if<MassFunction>(&m.chance)) j["chance"] = model_json(*p);
          if (const auto* f = std::get_if<TreeFactoredAssessment>(&m.chance)) j["chance"] = model_json(*f);
        }
      },
      model);
  return j;
}

bool identical_nodes(const Node& a, const Node& b) {
  if (a.id != b.id || a.kind != b.kind || a.arcs.size() != b.arcs.size()) return false;
  if (a.kind == NodeKind::leaf && a.reward != b.reward) return false;
  if (a.kind == NodeKind::gamble_leaf && !(a.gamble == b.gamble)) return false;
  for (std::size_t i = 0; i < a.arcs.size(); ++i) {
    const Arc& x = a.arcs[i];
    const Arc& y = b.arcs[i];
    if (x.index != y.index || x.label != y.label || x.event != y.event) return false;
    if (!identical_nodes(x.child, y.child)) return false;
  }
  return true;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem parse_problem(std::string_view text) {
  json j = parse_json(text);
  if (!j.is_object()) parse_error("problem file must be a JSON object");
  std::vector<std::string> atoms;
  for (const auto& a : member(j, "atoms", "problem")) atoms.push_back(as_string(a, "atom"));
  Problem p;
  p.space = make_space(std::move(atoms));
  if (auto ev = j.find("events"); ev != j.end()) {
    for (const auto& [name, list] : ev->items()) {
      if (p.space->find(name) || name == "Omega" || name == "Ω") {
        parse_error("event name '" + name + "' clashes with an atom or Omega");
      }
      if (!list.is_array()) parse_error("event '" + name + "' must be a list of atoms");
      p.events[name] = event_ref(*p.space, {}, list, "event '" + name + "'");
    }
  }
  if (auto pr = j.find("prune"); pr != j.end()) {
    std::string mode = as_string(*pr, "prune");
    if (mode == "auto") {
      p.prune = PruneMode::auto_prune;
    } else if (mode != "reject") {
      parse_error("prune must be \"reject\" or \"auto\"");
    }
  }
  DecisionTree raw;
  raw.root_scope = p.space->all();
  if (auto rs = j.find("root_scope"); rs != j.end()) raw.root_scope = event_ref(*p.space, p.events, *rs, "root_scope");
  raw.root = TreeReader(*p.space, p.events).node(member(j, "tree", "problem"));
  p.tree = std::make_shared<const DecisionTree>(validate_tree(std::move(raw), p.space, p.prune));
  return p;
}

Problem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::string serialize_problem(const Problem& problem) {
  json j;
  j["atoms"] = problem.space->atoms();
  json events = json::object();
  for (const auto& [name, e] : problem.events) events[name] = event_json(*problem.space, e);
  j["events"] = std::move(events);
  j["prune"] = problem.prune == PruneMode::auto_prune ? "auto" : "reject";
  j["root_scope"] = event_json(*problem.space, problem.tree->root_scope);
  j["tree"] = node_json(*problem.space, problem.tree->root);
  return j.dump(2) + "\n";
}

Event resolve_event(const Problem& problem, std::string_view ref) {
  std::string text(ref);
  if (text.find(',') == std::string::npos) return event_ref(*problem.space, problem.events, json(text), "condition");
  json list = json::array();
  std::stringstream ss(text);
  for (std::string atom; std::getline(ss, atom, ',');) list.push_back(atom);
  return event_ref(*problem.space, problem.events, list, "condition");
}

UncertaintyModel parse_model(std::string_view text, const Problem& problem) {
  json j = parse_json(text);
  if (!j.is_object()) parse_error("model file must be a JSON object");
  return model_from(j, problem);
}

UncertaintyModel load_model(const std::string& path, const Problem& problem) {
  return parse_model(read_file(path), problem);
}

std::string serialize_model(const UncertaintyModel& model) { return model_json(model).dump(2) + "\n"; }

bool identical(const DecisionTree& a, const DecisionTree& b) {
  return a.space->atoms() == b.space->atoms() && a.root_scope == b.root_scope && identical_nodes(a.root, b.root);
}

bool identical(const Problem& a, const Problem& b) {
  return a.space->atoms() == b.space->atoms() && a.events == b.events && a.prune == b.prune &&
         identical(*a.tree, *b.tree);
}

bool identical(const UncertaintyModel& a, const UncertaintyModel& b) {
  return model_json(a) == model_json(b);
}

}  // namespace subtree
