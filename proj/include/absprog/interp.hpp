#ifndef ABSPROG_INTERP_HPP
#define ABSPROG_INTERP_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absprog/ast.hpp"
#include "absprog/program.hpp"

namespace absprog {

struct RunBudget {
  std::uint64_t max_steps = 100000;  // steps per explored path
  std::uint32_t max_depth = 64;      // simultaneously active call frames
};

// Maps source-level names to store names. Subprogram activations and var
// blocks get fresh store names, so recursion never aliases an outer frame.
struct Env {
  std::map<std::string, std::string> names;

  bool operator==(const Env& other) const { return names == other.names; }
  bool operator<(const Env& other) const { return names < other.names; }
};
using EnvRef = std::shared_ptr<const Env>;

struct CopyOut {
  std::string host;    // store name of the bound host variable
  Domain domain;       // the host variable's domain
  std::string formal;  // store name of the output formal

  auto tie() const { return std::tie(host, domain, formal); }
  bool operator==(const CopyOut& o) const { return tie() == o.tie(); }
  bool operator<(const CopyOut& o) const { return tie() < o.tie(); }
};

// One pending piece of work. The control stack is a vector with the next
// task at the back.
struct Task {
  enum class Kind { Run, PopVar, EndCall, Diverge };

  Kind kind = Kind::Diverge;
  const Stmt* stmt = nullptr;        // Run
  EnvRef env;                        // Run
  std::string name;                  // PopVar
  std::vector<CopyOut> copy_outs;    // EndCall
  std::vector<std::string> destroy;  // EndCall
  std::string callee;                // EndCall

  static Task run(const Stmt* stmt, EnvRef env);
  static Task pop_var(std::string store_name);
  static Task diverge();

  bool operator==(const Task& other) const;
  bool operator<(const Task& other) const;
};

struct Config {
  std::vector<Task> control;
  ExtendedState store;
  std::uint32_t depth = 0;

  bool terminal() const { return control.empty(); }

  bool operator==(const Config& other) const;
  bool operator<(const Config& other) const;
};

struct StepContext {
  const ProgramAst* ast = nullptr;
};

Config initial_config(const ProgramAst& ast, const State& start);

// The immediate successors, in canonical order: guard/branch order for
// dispatch, declaration order and domain order for output-formal branching.
// Evaluation failures, out-of-domain writes and guardless dispatch yield the
// self-looping diverge configuration.
std::vector<Config> step(const Config& c, const StepContext& ctx);

bool is_diverge_config(const Config& c);

struct RunAllResult {
  // Finite executions and proven-divergent lassos starting at the state.
  std::set<Execution> executions;
  // Recorded state sequences of paths cut off by the step or depth budget.
  std::set<Execution> exceeded;

  bool complete() const { return exceeded.empty(); }
};

// Exhaustively explores the successor tree from the given base state. Call
// expressions are lifted to call statements up front, so traces may bind
// compiler-introduced temporaries.
RunAllResult run_all(const ProgramAst& ast, const State& start,
                     const RunBudget& budget = {});

struct ExtensionalResult {
  ExtensionalProgram program;
  // Start states with at least one budget-exceeded path; their rows list
  // only the executions found before the cut.
  std::set<State> partial;

  bool complete() const { return partial.empty(); }
};

ExtensionalResult to_extensional(
    const ProgramAst& ast, const RunBudget& budget = {},
    std::uint64_t enumeration_budget = kDefaultEnumerationBudget);

}  // namespace absprog

#endif
