// Python module: JSON text in, JSON text out, so the Python side never sees
// rationals as floats.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "subtree/cli.hpp"
#include "subtree/dot.hpp"
#include "subtree/error.hpp"
#include "subtree/io.hpp"
#include "subtree/report.hpp"
#include "subtree/theoremlab.hpp"

namespace py = pybind11;
using namespace subtree;

namespace {

UncertaintyModel model_of(const std::string& text, const Problem& p) {
  if (text.empty()) return NoModel{};
  return parse_model(text, p);
}

std::string strategies(const std::string& problem) { return strategies_json(parse_problem(problem)).dump(); }

std::string solve_problem(const std::string& problem, const std::string& model, const std::string& choice,
                          const std::string& condition) {
  Problem p = parse_problem(problem);
  UncertaintyModel m = model_of(model, p);
  ChoiceFunction c = parse_choice(choice);
  Event b = condition.empty() ? p.tree->root_scope : resolve_event(p, condition);
  return solve_json(p, c, m, solve(*p.tree, c, m, b)).dump();
}

std::string check(const std::string& problem, const std::string& model, const std::string& choice) {
  Problem p = parse_problem(problem);
  UncertaintyModel m = model_of(model, p);
  ChoiceFunction c = parse_choice(choice);
  return check_json(p, c, m, check_subtree_perfect(*p.tree, c, m)).dump();
}

std::string check_node(const std::string& problem, const std::string& model, const std::string& choice,
                       const std::string& node) {
  Problem p = parse_problem(problem);
  UncertaintyModel m = model_of(model, p);
  ChoiceFunction c = parse_choice(choice);
  return verdict_json(*p.tree, c, m, check_subtree_perfect_at(*p.tree, c, m, node)).dump();
}

std::string fuzz(const std::string& choice, const std::string& sampler, std::uint64_t seed, std::size_t trees) {
  FuzzConfig cfg;
  cfg.seed = seed;
  cfg.tree_count = trees;
  cfg.sampler = parse_model_sampler(sampler);
  return fuzz_json(fuzz_equivalence(parse_choice(choice), cfg.sampler, cfg)).dump();
}

std::string dot(const std::string& problem) { return export_dot(*parse_problem(problem).tree); }

py::tuple cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"subtree"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "SubtreeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });
  m.def("strategies", &strategies, py::arg("problem"));
  m.def("solve", &solve_problem, py::arg("problem"), py::arg("model"), py::arg("choice"), py::arg("condition") = "");
  m.def("check", &check, py::arg("problem"), py::arg("model"), py::arg("choice"));
  m.def("check_node", &check_node, py::arg("problem"), py::arg("model"), py::arg("choice"), py::arg("node"));
  m.def("fuzz", &fuzz, py::arg("choice"), py::arg("sampler"), py::arg("seed") = 1, py::arg("trees") = 200);
  m.def("export_dot", &dot, py::arg("problem"));
  m.def("run", &cli, py::arg("args"));
  m.def("choice_names", &choice_names);
}
