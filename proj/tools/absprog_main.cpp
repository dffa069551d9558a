// absprog: a workbench for finite-space relational programs. Programs are
// given in the guarded-command DSL or as extensional JSON tables; commands
// parse, run, transform and check them. All output is deterministic.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "absprog/analysis.hpp"
#include "absprog/error.hpp"
#include "absprog/interp.hpp"
#include "absprog/json_io.hpp"
#include "absprog/parser.hpp"
#include "absprog/printer.hpp"
#include "absprog/rewrite.hpp"

using namespace absprog;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

struct CommonOptions {
  std::uint64_t max_steps = 100000;
  std::uint32_t max_depth = 64;
  std::string format = "text";
  bool allow_globals = false;
  std::size_t counterexample_limit = kDefaultCounterexampleLimit;

  RunBudget budget() const { return RunBudget{max_steps, max_depth}; }
};

void add_common(CLI::App* cmd, CommonOptions& options, bool with_format = true) {
  cmd->add_option("--max-steps", options.max_steps, "Step budget per path")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-depth", options.max_depth, "Call-frame budget")
      ->check(CLI::PositiveNumber);
  if (with_format)
    cmd->add_option("--format", options.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--allow-globals", options.allow_globals,
                "Let subprogram bodies use host base variables");
}

struct IoFailure {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure{"cannot read '" + path + "'"};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw IoFailure{"malformed JSON in " + what + ": " + e.what()};
  }
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    return c == '{';
  }
  return false;
}

// A program file is either DSL text or an extensional JSON table.
struct LoadedProgram {
  std::optional<ProgramAst> ast;           // DSL route
  std::optional<ExtensionalProgram> ext;   // JSON route
};

LoadedProgram load_program(const std::string& path,
                           const CommonOptions& options) {
  std::string text = read_file(path);
  LoadedProgram out;
  if (looks_like_json(text)) {
    ExtensionalProgram p = program_from_json(parse_json(text, path));
    ValidationReport report = validate_program(p);
    if (!report.ok()) {
      std::string message = path + ": not a program:";
      for (const auto& v : report.violations)
        message += "\n  " + std::string(program_rule_name(v.rule)) + " at " +
                   dump_state_text(v.state) + ": " + v.detail;
      throw IoFailure{message};
    }
    out.ext = std::move(p);
    return out;
  }
  ParseOptions popts;
  popts.allow_globals = options.allow_globals;
  ParseResult r = parse_program(text, popts);
  if (!r.ok()) {
    std::string message;
    for (const auto& d : r.diagnostics) {
      if (!message.empty()) message += "\n";
      message += path + ":" + format_diagnostic(d);
    }
    throw IoFailure{message};
  }
  out.ast = std::move(*r.ast);
  return out;
}

// Extensionalizes when needed; JSON-loaded programs are total by themselves.
ExtensionalResult materialize(const LoadedProgram& p,
                              const CommonOptions& options) {
  if (p.ext) return ExtensionalResult{*p.ext, {}};
  return to_extensional(*p.ast, options.budget());
}

std::string format_execution_line(const Execution& e) {
  std::string out = "⟨";
  for (std::size_t i = 0; i < e.prefix().size(); ++i) {
    if (i > 0) out += ", ";
    out += dump_state_text(*e.prefix()[i]);
  }
  out += "⟩";
  if (!e.is_finite()) {
    out += " (cycle: ";
    for (std::size_t i = 0; i < e.cycle().size(); ++i) {
      if (i > 0) out += ", ";
      out += dump_state_text(*e.cycle()[i]);
    }
    out += ")*";
  }
  return out;
}

int report_verdict(const Verdict& v, const CommonOptions& options) {
  if (options.format == "json") {
    Json j;
    j["verdict"] = v.is_holds() ? "holds" : v.is_fails() ? "fails" : "unknown";
    if (v.is_fails()) {
      j["total_failures"] = v.total_failures;
      Json list = Json::array();
      for (const auto& c : v.counterexamples) {
        Json item;
        item["state"] = state_to_json(c.state);
        item["reason"] = c.reason;
        list.push_back(std::move(item));
      }
      j["counterexamples"] = std::move(list);
    }
    if (v.is_unknown()) {
      Json list = Json::array();
      for (const State& s : v.unknown_states) list.push_back(state_to_json(s));
      j["unknown"] = std::move(list);
    }
    std::cout << dump_canonical(j);
  } else {
    if (v.is_holds()) {
      std::cout << "verdict: holds\n";
    } else if (v.is_fails()) {
      std::cout << "verdict: fails (" << v.total_failures
                << " counterexample(s), showing " << v.counterexamples.size()
                << ")\n";
      for (const auto& c : v.counterexamples)
        std::cout << "  " << dump_state_text(c.state) << ": " << c.reason
                  << "\n";
    } else {
      std::cout << "verdict: unknown (" << v.unknown_states.size()
                << " undecided state(s))\n";
      for (const State& s : v.unknown_states)
        std::cout << "  " << dump_state_text(s) << "\n";
    }
  }
  return v.is_holds() ? kExitHolds : v.is_fails() ? kExitFails : kExitUnknown;
}

int cmd_check(const std::string& path, const CommonOptions& options) {
  std::string text = read_file(path);
  ParseOptions popts;
  popts.allow_globals = options.allow_globals;
  ParseResult r = parse_program(text, popts);
  for (const auto& w : r.warnings)
    std::cout << path << ":" << w.pos.line << ":" << w.pos.column
              << ": warning: " << w.message << "\n";
  if (r.ok()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& d : r.diagnostics)
    std::cout << path << ":" << format_diagnostic(d) << "\n";
  return 1;
}

int cmd_trace(const std::string& path, const std::string& init_json, bool one,
              const CommonOptions& options) {
  LoadedProgram p = load_program(path, options);
  if (!p.ast)
    throw IoFailure{"trace needs a DSL program, not an extensional table"};
  State init;
  try {
    init = state_from_json(parse_json(init_json, "--init"));
  } catch (const Error& e) {
    std::cout << "invalid initial state: " << e.what() << "\n";
    return 2;
  }
  if (!is_state_of(init, p.ast->space)) {
    std::cout << "invalid initial state: not a point of the declared space\n";
    return 2;
  }
  RunAllResult r = run_all(*p.ast, init, options.budget());
  if (options.format == "json") {
    Json j;
    Json execs = Json::array();
    for (const Execution& e : r.executions) {
      execs.push_back(execution_to_json(e));
      if (one) break;
    }
    j["executions"] = std::move(execs);
    Json exceeded = Json::array();
    if (!one)
      for (const Execution& e : r.exceeded)
        exceeded.push_back(execution_to_json(e));
    j["exceeded"] = std::move(exceeded);
    std::cout << dump_canonical(j);
    return 0;
  }
  for (const Execution& e : r.executions) {
    std::cout << format_execution_line(e) << "\n";
    if (one) return 0;
  }
  for (const Execution& e : r.exceeded)
    std::cout << format_execution_line(e) << " (budget exceeded)\n";
  return 0;
}

int cmd_effect(const std::string& path, const CommonOptions& options) {
  LoadedProgram p = load_program(path, options);
  ExtensionalResult ext = materialize(p, options);
  EffectResult e = effect(ext.program, ext.partial);
  if (options.format == "json") {
    std::cout << dump_canonical(effect_to_json(e.relation, e.unknown));
  } else {
    const StateSpace& space = e.relation.space();
    std::cout << "domain: " << e.relation.graph().size() << " of "
              << space.state_count().value_or(0) << " state(s)\n";
    for (const auto& [a, bs] : e.relation.graph()) {
      std::cout << dump_state_text(a) << " ->";
      for (const State& b : bs) std::cout << " " << dump_state_text(b);
      std::cout << "\n";
    }
    std::cout << "unknown: " << e.unknown.size() << "\n";
    for (const State& s : e.unknown)
      std::cout << "  " << dump_state_text(s) << "\n";
  }
  if (!e.unknown.empty())
    std::cerr << "warning: budget exhausted for " << e.unknown.size()
              << " start state(s); their rows are undecided\n";
  return 0;
}

int cmd_solves(const std::string& problem_path, const std::string& program_path,
               const std::string& transform_path,
               const CommonOptions& options) {
  Problem f = problem_from_json(
      parse_json(read_file(problem_path), problem_path));
  LoadedProgram p = load_program(program_path, options);
  ExtensionalResult ext = materialize(p, options);
  Verdict v;
  if (!transform_path.empty()) {
    std::vector<TransformStep> steps = steps_from_json(
        parse_json(read_file(transform_path), transform_path));
    v = solves_via_transform(f, ext.program, steps, ext.partial,
                             options.counterexample_limit);
  } else {
    v = solves(f, ext.program, ext.partial, options.counterexample_limit);
  }
  return report_verdict(v, options);
}

int cmd_equiv(const std::string& p1, const std::string& p2,
              const CommonOptions& options) {
  ExtensionalResult a = materialize(load_program(p1, options), options);
  ExtensionalResult b = materialize(load_program(p2, options), options);
  Verdict v = equivalent(a.program, b.program, a.partial, b.partial,
                         options.counterexample_limit);
  return report_verdict(v, options);
}

int cmd_identical(const std::string& p1, const std::string& p2,
                  const std::string& witness_path,
                  const CommonOptions& options) {
  IdentityWitness w;
  if (!witness_path.empty())
    w = witness_from_json(parse_json(read_file(witness_path), witness_path));
  ExtensionalResult a = materialize(load_program(p1, options), options);
  ExtensionalResult b = materialize(load_program(p2, options), options);
  if (!a.partial.empty() || !b.partial.empty()) {
    std::cout << "identical: unknown (budget exhausted during "
                 "extensionalization)\n";
    return kExitUnknown;
  }
  bool same = check_identical(a.program, b.program, w);
  std::cout << (same ? "identical: yes\n" : "identical: no\n");
  return same ? kExitHolds : kExitFails;
}

int cmd_transform(const std::string& path, const std::string& steps_path,
                  const std::string& rename_json, const std::string& aux_json,
                  const std::string& extend_decl,
                  const std::string& restrict_names,
                  const CommonOptions& options) {
  ExtensionalResult ext = materialize(load_program(path, options), options);
  ExtensionalProgram p = ext.program;
  if (!ext.partial.empty())
    std::cerr << "warning: " << ext.partial.size()
              << " start state(s) were cut by the budget; the transformed "
                 "table is incomplete there\n";

  std::vector<TransformStep> steps;
  if (!steps_path.empty())
    steps = steps_from_json(parse_json(read_file(steps_path), steps_path));
  if (!rename_json.empty() || !aux_json.empty()) {
    RenameStep step;
    if (!rename_json.empty()) {
      Json j = parse_json(rename_json, "--rename");
      for (auto it = j.begin(); it != j.end(); ++it)
        step.base.emplace(it.key(), it.value().get<std::string>());
    }
    if (!aux_json.empty()) {
      Json j = parse_json(aux_json, "--aux");
      for (auto it = j.begin(); it != j.end(); ++it)
        step.aux.emplace(it.key(), it.value().get<std::string>());
    }
    steps.push_back(std::move(step));
  }
  if (!extend_decl.empty()) {
    VarDecl decl = parse_vardecl_text(extend_decl);
    steps.push_back(ExtendStep{decl.name, decl.domain});
  }
  if (!restrict_names.empty()) {
    std::map<std::string, Domain> keep;
    std::stringstream ss(restrict_names);
    std::string name;
    while (std::getline(ss, name, ',')) {
      while (!name.empty() && name.front() == ' ') name.erase(name.begin());
      while (!name.empty() && name.back() == ' ') name.pop_back();
      const Domain* d = p.base().find(name);
      if (!d)
        fail(Errc::not_a_subspace,
             "'" + name + "' is not a variable of the base space");
      keep.emplace(name, *d);
    }
    steps.push_back(RestrictStep{StateSpace(std::move(keep))});
  }

  ExtensionalProgram out = apply_steps(p, steps);
  std::cout << dump_canonical(program_to_json(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for finite-space relational programs"};
  app.require_subcommand(1);

  CommonOptions options;

  std::string program_path, problem_path, second_path;
  std::string init_json, witness_path, transform_path, steps_path;
  std::string rename_json, aux_json, extend_decl, restrict_names;
  bool all_flag = false, one_flag = false;

  CLI::App* check = app.add_subcommand("check", "Parse and validate a program");
  check->add_option("program", program_path)->required();
  add_common(check, options, false);

  CLI::App* trace = app.add_subcommand("trace", "Run from an initial state");
  trace->add_option("program", program_path)->required();
  trace->add_option("--init", init_json, "Initial state as JSON")->required();
  trace->add_flag("--all", all_flag, "Print every execution (default)");
  trace->add_flag("--one", one_flag, "Print only the canonically first");
  add_common(trace, options);

  CLI::App* eff = app.add_subcommand("effect", "Compute the effect relation");
  eff->add_option("program", program_path)->required();
  add_common(eff, options);

  CLI::App* solves_cmd =
      app.add_subcommand("solves", "Check a program against a problem");
  solves_cmd->add_option("problem", problem_path)->required();
  solves_cmd->add_option("program", program_path)->required();
  solves_cmd->add_option("--transform", transform_path,
                         "Transform steps (JSON) applied to the program first");
  solves_cmd->add_option("--limit-counterexamples",
                         options.counterexample_limit, "Report at most N");
  add_common(solves_cmd, options);

  CLI::App* equiv = app.add_subcommand("equiv", "Compare two programs' effects");
  equiv->add_option("first", program_path)->required();
  equiv->add_option("second", second_path)->required();
  equiv->add_option("--limit-counterexamples", options.counterexample_limit,
                    "Report at most N");
  add_common(equiv, options);

  CLI::App* ident = app.add_subcommand(
      "identical", "Check a transformation witness between two programs");
  ident->add_option("first", program_path)->required();
  ident->add_option("second", second_path)->required();
  ident->add_option("--witness", witness_path, "Witness JSON file");
  add_common(ident, options);

  CLI::App* transform = app.add_subcommand(
      "transform", "Apply base-space transformations, emit extensional JSON");
  transform->add_option("program", program_path)->required();
  transform->add_option("--steps", steps_path, "Steps JSON file");
  transform->add_option("--rename", rename_json, "Base renaming as JSON map");
  transform->add_option("--aux", aux_json, "Auxiliary renaming as JSON map");
  transform->add_option("--extend", extend_decl, "New variable, e.g. k:int[0..1]");
  transform->add_option("--restrict", restrict_names,
                        "Comma-separated base variables to keep");
  add_common(transform, options);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(program_path, options);
    if (trace->parsed()) {
      if (all_flag && one_flag) {
        std::cerr << "--all and --one are mutually exclusive\n";
        return kExitUsage;
      }
      return cmd_trace(program_path, init_json, one_flag, options);
    }
    if (eff->parsed()) return cmd_effect(program_path, options);
    if (solves_cmd->parsed())
      return cmd_solves(problem_path, program_path, transform_path, options);
    if (equiv->parsed()) return cmd_equiv(program_path, second_path, options);
    if (ident->parsed())
      return cmd_identical(program_path, second_path, witness_path, options);
    if (transform->parsed())
      return cmd_transform(program_path, steps_path, rename_json, aux_json,
                           extend_decl, restrict_names, options);
  } catch (const IoFailure& e) {
    std::cerr << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
