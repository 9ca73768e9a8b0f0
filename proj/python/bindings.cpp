// Python bindings for the core operations: parse, type inference, path
// enumeration, concrete execution, constraint translation, and the full
// solve pipeline. Values cross the boundary as plain Python objects
// (dicts, lists, strings) rather than wrapped C++ types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pathforge/cfg.hpp"
#include "pathforge/harness.hpp"
#include "pathforge/interp.hpp"
#include "pathforge/parser.hpp"
#include "pathforge/solver.hpp"
#include "pathforge/testcase.hpp"
#include "pathforge/translate.hpp"
#include "pathforge/typing.hpp"

namespace py = pybind11;
using namespace pathforge;

namespace {

struct Loaded {
  SourceUnit unit;
  const FunctionDef* fn;
  TypeEnv env;
  Cfg cfg;
};

Loaded load(const std::string& source, const std::string& function) {
  Loaded l{parse_unit(source, "<python>"), nullptr, {}, {}};
  if (l.unit.functions.empty())
    throw std::invalid_argument("source defines no function");
  for (const auto& f : l.unit.functions)
    if (function.empty() || f.name == function) {
      l.fn = &f;
      break;
    }
  if (!l.fn) throw std::invalid_argument("no function named '" + function + "'");
  l.env = infer_types(*l.fn);
  l.cfg = build_cfg(*l.fn);
  augment_env(l.cfg, l.env);
  return l;
}

PathBounds bounds_of(int max_steps, int max_loop_iterations, int max_paths) {
  PathBounds b;
  b.max_steps = max_steps;
  b.max_loop_iterations = max_loop_iterations;
  b.max_paths = max_paths;
  return b;
}

ConcreteValue value_from_py(const py::handle& o) {
  if (py::isinstance<py::bool_>(o)) return ConcreteValue::of_bool(o.cast<bool>());
  if (py::isinstance<py::int_>(o)) return ConcreteValue::of_int(o.cast<long long>());
  if (py::isinstance<py::float_>(o)) return ConcreteValue::of_float(o.cast<double>());
  if (py::isinstance<py::list>(o)) {
    ConcreteValue v;
    v.kind = ConcreteValue::Kind::List;
    for (const auto& el : o.cast<py::list>()) v.list.push_back(value_from_py(el));
    return v;
  }
  throw std::invalid_argument("unsupported argument type (int/float/bool/list only)");
}

py::object value_to_py(const ConcreteValue& v) {
  switch (v.kind) {
    case ConcreteValue::Kind::Int: return py::int_(v.i);
    case ConcreteValue::Kind::Float: return py::float_(v.f);
    case ConcreteValue::Kind::Bool: return py::bool_(v.b);
    case ConcreteValue::Kind::List: {
      py::list out;
      for (const auto& el : v.list) out.append(value_to_py(el));
      return out;
    }
  }
  return py::none();
}

}  // namespace

PYBIND11_MODULE(_pathforge, m) {
  m.doc() = "Symbolic path exploration for a statically analyzable Python subset";

  m.def(
      "functions",
      [](const std::string& source) {
        SourceUnit u = parse_unit(source, "<python>");
        std::vector<std::string> names;
        for (const auto& f : u.functions) names.push_back(f.name);
        return names;
      },
      py::arg("source"), "Parses the source and returns the function names.");

  m.def(
      "infer_types",
      [](const std::string& source, const std::string& function) {
        Loaded l = load(source, function);
        py::dict out;
        for (const auto& [name, t] : l.env.vars) out[py::str(name)] = to_string(t);
        return out;
      },
      py::arg("source"), py::arg("function") = "",
      "Returns the inferred variable types as a name -> type-string dict.");

  m.def(
      "paths",
      [](const std::string& source, const std::string& function, int max_steps,
         int max_loop_iterations, int max_paths) {
        Loaded l = load(source, function);
        std::vector<py::dict> out;
        for (const auto& p :
             enumerate_paths(l.cfg, bounds_of(max_steps, max_loop_iterations, max_paths))) {
          py::dict d;
          d["id"] = path_id_of(p);
          d["truncated"] = p.truncated;
          d["steps"] = format_path(p);
          out.push_back(d);
        }
        return out;
      },
      py::arg("source"), py::arg("function") = "", py::arg("max_steps") = 20,
      py::arg("max_loop_iterations") = 3, py::arg("max_paths") = 256,
      "Enumerates bounded control-flow paths.");

  m.def(
      "run",
      [](const std::string& source, const py::list& args, const std::string& function) {
        Loaded l = load(source, function);
        std::vector<ConcreteValue> cargs;
        for (const auto& a : args) cargs.push_back(value_from_py(a));
        RunResult rr = run(l.cfg, l.env, cargs);
        py::dict d;
        d["outcome"] = rr.outcome_name();
        d["value"] = rr.value ? value_to_py(*rr.value) : py::none();
        d["trace"] = format_path(rr.trace);
        d["steps_executed"] = rr.steps_executed;
        return d;
      },
      py::arg("source"), py::arg("args"), py::arg("function") = "",
      "Interprets the function on concrete arguments, recording the trace.");

  m.def(
      "translate",
      [](const std::string& source, int path_index, const std::string& function,
         int max_steps, int max_loop_iterations, int max_paths) {
        Loaded l = load(source, function);
        auto paths =
            enumerate_paths(l.cfg, bounds_of(max_steps, max_loop_iterations, max_paths));
        if (path_index < 0 || static_cast<size_t>(path_index) >= paths.size())
          throw std::out_of_range("path index out of range");
        auto outcome = translate_path(paths[path_index], l.cfg, l.env, *l.fn);
        if (!outcome.ok())
          throw std::invalid_argument("unsupported construct: " +
                                      outcome.unsupported().construct);
        return emit_smtlib(outcome.script());
      },
      py::arg("source"), py::arg("path_index"), py::arg("function") = "",
      py::arg("max_steps") = 20, py::arg("max_loop_iterations") = 3,
      py::arg("max_paths") = 256,
      "Translates one enumerated path into an SMT-LIB script.");

  m.def(
      "solve_path",
      [](const std::string& source, int path_index, const std::string& function,
         const std::string& solver_cmd, int max_steps, int max_loop_iterations,
         int max_paths) {
        Loaded l = load(source, function);
        auto paths =
            enumerate_paths(l.cfg, bounds_of(max_steps, max_loop_iterations, max_paths));
        if (path_index < 0 || static_cast<size_t>(path_index) >= paths.size())
          throw std::out_of_range("path index out of range");
        HarnessConfig hc;
        hc.bounds = bounds_of(max_steps, max_loop_iterations, max_paths);
        if (!solver_cmd.empty()) {
          std::istringstream ss(solver_cmd);
          hc.solver.command.clear();
          for (std::string tok; ss >> tok;) hc.solver.command.push_back(tok);
        }
        PipelineResult r = run_pipeline(*l.fn, l.cfg, l.env, paths[path_index], hc);
        py::dict d;
        d["source"] = to_string(r.source);
        d["solver_verdict"] = r.solver_verdict;
        d["test_verdict"] = r.test_verdict;
        d["unsupported"] = r.unsupported;
        d["detail"] = r.detail;
        if (r.input) {
          py::dict args;
          for (const auto& [name, v] : r.input->args) args[py::str(name)] = value_to_py(v);
          d["input"] = args;
        } else {
          d["input"] = py::none();
        }
        return d;
      },
      py::arg("source"), py::arg("path_index"), py::arg("function") = "",
      py::arg("solver_cmd") = "", py::arg("max_steps") = 20,
      py::arg("max_loop_iterations") = 3, py::arg("max_paths") = 256,
      "Runs the full pipeline on one path: translate, solve, decode, replay. "
      "An empty solver_cmd falls back to the PATHFORGE_SOLVER environment "
      "variable.");
}
