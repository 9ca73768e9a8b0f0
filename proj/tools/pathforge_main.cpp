#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pathforge/harness.hpp"
#include "pathforge/interp.hpp"
#include "pathforge/parser.hpp"

namespace pf = pathforge;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitDataError = 65;
constexpr int kExitNoSolver = 69;

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct Loaded {
  pf::SourceUnit unit;
  pf::FunctionDef fn;
  pf::TypeEnv env;
  pf::Cfg cfg;
};

Loaded load_function(const std::string& file, const std::string& function) {
  Loaded l;
  l.unit = pf::parse_unit(read_file(file), file);
  if (l.unit.functions.empty())
    throw pf::ParseError("syntax-error", "no function definitions in " + file, {});
  const pf::FunctionDef* fn = nullptr;
  if (function.empty()) {
    fn = &l.unit.functions.front();
  } else {
    for (const auto& f : l.unit.functions)
      if (f.name == function) fn = &f;
    if (!fn)
      throw pf::ParseError("syntax-error", "no function named " + function, {});
  }
  l.fn = *fn;
  l.env = pf::infer_types(l.fn);
  l.cfg = pf::build_cfg(l.fn);
  pf::augment_env(l.cfg, l.env);
  return l;
}

pf::ExecutionPath select_path(const Loaded& l, int path_index,
                              const std::string& trace_file,
                              const pf::PathBounds& bounds) {
  if (!trace_file.empty()) {
    std::vector<int> lines;
    std::istringstream is(read_file(trace_file));
    int n;
    while (is >> n) lines.push_back(n);
    auto aligned = pf::align_trace(l.cfg, lines);
    if (std::holds_alternative<pf::AlignError>(aligned))
      throw CLI::ValidationError("trace alignment failed: " +
                                 std::get<pf::AlignError>(aligned).message);
    pf::ExecutionPath p = std::get<pf::ExecutionPath>(aligned);
    if (static_cast<int>(p.steps.size()) > bounds.max_steps) {
      p.steps.resize(static_cast<size_t>(bounds.max_steps));
      p.truncated = true;
    }
    return p;
  }
  auto paths = pf::enumerate_paths(l.cfg, bounds);
  if (path_index < 0 || static_cast<size_t>(path_index) >= paths.size())
    throw CLI::ValidationError("path index out of range (have " +
                               std::to_string(paths.size()) + ")");
  return paths[static_cast<size_t>(path_index)];
}

bool solver_missing(const std::string& detail) {
  return detail.find("failed to launch") != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-based test input generation for a Python subset"};
  app.require_subcommand(1);
  app.fallthrough();

  pf::HarnessConfig hc;
  std::string solver_cmd, bridge_mode = "off", chunking = "line", out_dir;
  std::string fixture_dir;
  double timeout_s = 10.0;
  app.add_option("--solver-cmd", solver_cmd, "solver command line");
  app.add_option("--timeout", timeout_s, "solver timeout in seconds");
  app.add_option("--max-steps", hc.bounds.max_steps, "path step bound");
  app.add_option("--max-loop-iterations", hc.bounds.max_loop_iterations,
                 "loop unrolling bound");
  app.add_option("--max-paths", hc.bounds.max_paths, "enumeration cap");
  app.add_option("--jobs", hc.jobs, "parallel path tasks");
  app.add_flag("--keep-smt", hc.keep_smt, "keep solver queries under --out");
  app.add_option("--bridge", bridge_mode, "off|replay|live");
  app.add_option("--fixtures", fixture_dir, "replay fixture directory");
  app.add_option("--templates-k", hc.bridge.k, "retrieved template count");
  app.add_option("--chunking", chunking, "line|condition");
  app.add_option("--out", out_dir, "output directory");

  std::string file, function, args_text, trace_file, corpus, report_file;
  int path_index = -1;

  auto* c_parse = app.add_subcommand("parse", "parse and print the AST");
  c_parse->add_option("file", file)->required();
  c_parse->add_option("--function", function);

  auto* c_types = app.add_subcommand("types", "print inferred variable types");
  c_types->add_option("file", file)->required();
  c_types->add_option("--function", function);

  auto* c_cfg = app.add_subcommand("cfg", "print the control-flow graph");
  c_cfg->add_option("file", file)->required();
  c_cfg->add_option("--function", function);

  auto* c_paths = app.add_subcommand("paths", "enumerate bounded paths");
  c_paths->add_option("file", file)->required();
  c_paths->add_option("--function", function);

  auto* c_run = app.add_subcommand("run", "interpret with concrete arguments");
  c_run->add_option("file", file)->required();
  c_run->add_option("--function", function);
  c_run->add_option("--args", args_text, "comma-separated literals")->required();

  auto* c_translate = app.add_subcommand("translate", "emit the SMT-LIB query");
  c_translate->add_option("file", file)->required();
  c_translate->add_option("--function", function);
  c_translate->add_option("--path", path_index, "index from the paths listing");
  c_translate->add_option("--trace", trace_file, "recorded line-trace file");

  auto* c_solve = app.add_subcommand("solve-path", "run the full pipeline on one path");
  c_solve->add_option("file", file)->required();
  c_solve->add_option("--function", function);
  c_solve->add_option("--path", path_index);
  c_solve->add_option("--trace", trace_file);

  auto* c_bench = app.add_subcommand("bench", "run the corpus and report metrics");
  c_bench->add_option("corpus", corpus)->required();

  auto* c_report = app.add_subcommand("report", "render a saved report");
  c_report->add_option("file", report_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (!solver_cmd.empty()) {
    hc.solver.command.clear();
    std::istringstream is(solver_cmd);
    std::string tok;
    while (is >> tok) hc.solver.command.push_back(tok);
  }
  hc.solver.timeout =
      std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
  hc.out_dir = out_dir;
  hc.bridge.mode = bridge_mode == "replay" ? pf::BridgeMode::Replay
                   : bridge_mode == "live" ? pf::BridgeMode::Live
                                           : pf::BridgeMode::Off;
  hc.bridge.fixture_dir = fixture_dir;
  hc.bridge.chunking = chunking == "condition" ? pf::ChunkStrategy::ByCondition
                                               : pf::ChunkStrategy::ByLine;

  try {
    if (*c_parse) {
      Loaded l;
      l.unit = pf::parse_unit(read_file(file), file);
      auto diags = pf::validate_subset(l.unit);
      for (const auto& d : diags)
        std::cerr << d.code << ": " << d.message << " (line " << d.span.line
                  << ")\n";
      std::cout << pf::pretty_print(l.unit);
      return diags.empty() ? 0 : 1;
    }
    if (*c_types) {
      Loaded l = load_function(file, function);
      for (const auto& [name, ty] : l.env.vars) {
        std::cout << name << ": " << pf::to_string(ty) << "\n";
      }
      for (const auto& w : l.env.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }
    if (*c_cfg) {
      Loaded l = load_function(file, function);
      for (const auto& n : l.cfg.nodes) {
        std::cout << n.id << "\t" << n.line << "\t" << pf::to_string(n.kind)
                  << "\t" << n.text;
        if (n.is_loop_guard) std::cout << "\t[loop]";
        if (n.synthetic) std::cout << "\t[synthetic]";
        std::cout << "\n";
      }
      for (const auto& e : l.cfg.edges) {
        const char* lbl = e.label == pf::EdgeLabel::TrueBranch    ? "T"
                          : e.label == pf::EdgeLabel::FalseBranch ? "F"
                                                                  : "-";
        std::cout << e.from << " -> " << e.to << " [" << lbl << "]\n";
      }
      return 0;
    }
    if (*c_paths) {
      Loaded l = load_function(file, function);
      auto paths = pf::enumerate_paths(l.cfg, hc.bounds);
      for (size_t i = 0; i < paths.size(); i++) {
        std::cout << "# path " << i << (paths[i].truncated ? " (truncated)" : "")
                  << "\n"
                  << pf::format_path(paths[i]);
      }
      return 0;
    }
    if (*c_run) {
      Loaded l = load_function(file, function);
      auto args = pf::parse_arg_tuple(args_text);
      pf::RunResult rr = pf::run(l.cfg, l.env, args);
      std::cout << pf::format_path(rr.trace);
      std::cout << "outcome: " << rr.outcome_name() << "\n";
      if (rr.value) std::cout << "return: " << pf::render_literal(*rr.value) << "\n";
      return rr.raised() ? 1 : 0;
    }
    if (*c_translate) {
      Loaded l = load_function(file, function);
      pf::ExecutionPath p =
          select_path(l, path_index, trace_file, hc.bounds);
      auto outcome = pf::translate_path(p, l.cfg, l.env, l.fn);
      if (!outcome.ok()) {
        std::cerr << "unsupported: " << outcome.unsupported().construct
                  << " at step " << outcome.unsupported().step_index << "\n";
        return 3;
      }
      std::cout << pf::emit_smtlib(outcome.script(), hc.solver.logic);
      return 0;
    }
    if (*c_solve) {
      Loaded l = load_function(file, function);
      pf::ExecutionPath p =
          select_path(l, path_index, trace_file, hc.bounds);
      pf::PipelineResult pr = pf::run_pipeline(l.fn, l.cfg, l.env, p, hc);
      std::cout << "source: " << pf::to_string(pr.source) << "\n";
      std::cout << "solver: " << pr.solver_verdict << "\n";
      if (pr.input) {
        pf::TestArtifact a = pf::emit_artifact(*pr.input, l.fn, p);
        a.file = file;
        a.verdict = pr.test_verdict;
        std::cout << "input: " << a.snippet << "\n";
        std::cout << "verdict: " << pr.test_verdict << "\n";
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          std::ofstream os(std::filesystem::path(out_dir) / "artifacts.jsonl",
                           std::ios::app);
          os << pf::artifact_to_json(a) << "\n";
        }
      }
      if (!pr.detail.empty()) std::cerr << pr.detail << "\n";
      if (pr.unsupported) {
        std::cerr << "unsupported: " << pr.unsupported_construct << "\n";
        return 3;
      }
      if (solver_missing(pr.detail)) return kExitNoSolver;
      if (pr.test_verdict == "PathCorrect") return 0;
      if (pr.solver_verdict == "sat") return 1;
      return 2;
    }
    if (*c_bench) {
      pf::RunReport report = pf::bench(corpus, hc);
      std::cout << pf::render_report(report);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream os(std::filesystem::path(out_dir) / "report.json");
        os << pf::report_to_json(report);
      }
      for (const auto& r : report.records)
        if (solver_missing(r.solver_verdict)) return kExitNoSolver;
      return 0;
    }
    if (*c_report) {
      try {
        pf::RunReport r = pf::report_from_json(read_file(report_file));
        std::cout << pf::render_report(r);
        return 0;
      } catch (const std::exception& ex) {
        std::cerr << "report parse error: " << ex.what() << "\n";
        return kExitDataError;
      }
    }
  } catch (const pf::ParseError& ex) {
    std::cerr << ex.code() << ": " << ex.what() << "\n";
    return 1;
  } catch (const pf::TypeError& ex) {
    std::cerr << "type-error: " << ex.what() << "\n";
    return 1;
  } catch (const CLI::ValidationError& ex) {
    std::cerr << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
