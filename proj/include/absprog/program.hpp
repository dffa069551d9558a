#ifndef ABSPROG_PROGRAM_HPP
#define ABSPROG_PROGRAM_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "absprog/execution.hpp"
#include "absprog/state_space.hpp"

namespace absprog {

using ExecutionSet = std::set<Execution>;

// A program given pointwise: a base space and, for every base state, the set
// of executions starting there. Construction is permissive; conformance to
// the program conditions is checked by validate_program so that defective
// tables can be represented and diagnosed.
class ExtensionalProgram {
 public:
  ExtensionalProgram(StateSpace base, std::map<State, ExecutionSet> table)
      : base_(std::move(base)), table_(std::move(table)) {}

  const StateSpace& base() const { return base_; }
  const std::map<State, ExecutionSet>& table() const { return table_; }

  // Throws UnknownState when a is not a state of the base space or has no
  // table row.
  const ExecutionSet& executions_from(const State& a) const;

  // Union of all execution states' names outside the base space.
  std::set<std::string> auxiliary_names() const;

  bool operator==(const ExtensionalProgram& other) const {
    return base_ == other.base_ && table_ == other.table_;
  }
  bool operator!=(const ExtensionalProgram& other) const {
    return !(*this == other);
  }

 private:
  StateSpace base_;
  std::map<State, ExecutionSet> table_;
};

// The three defining conditions of a program, plus the closure requirement
// that every execution state keeps the base components bound.
enum class ProgramRule {
  domain_is_whole_space,   // condition 1: a row for exactly every base state
  finite_ends_in_base,     // condition 2
  starts_at_its_state,     // condition 3: first state equals the row's state
  execution_nonempty,      // condition 3: |execution| >= 1
  state_covers_base,       // every state binds all base variables, in domain
};

const char* program_rule_name(ProgramRule rule);

struct RuleViolation {
  ProgramRule rule;
  State state;  // the table row (or missing base state) concerned
  std::string detail;
};

struct ValidationReport {
  std::vector<RuleViolation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_program(
    const ExtensionalProgram& p,
    std::uint64_t budget = kDefaultEnumerationBudget);

// The always-terminating program that does nothing: one singleton execution
// per base state.
ExtensionalProgram skip_program(const StateSpace& base,
                                std::uint64_t budget = kDefaultEnumerationBudget);

// The relation mapping each surely terminating start state to its possible
// final states. Keys of the graph are exactly the domain.
class EffectRelation {
 public:
  EffectRelation(StateSpace space, std::map<State, std::set<State>> graph)
      : space_(std::move(space)), graph_(std::move(graph)) {}

  const StateSpace& space() const { return space_; }
  const std::map<State, std::set<State>>& graph() const { return graph_; }
  std::set<State> domain() const;

  bool operator==(const EffectRelation& other) const {
    return space_ == other.space_ && graph_ == other.graph_;
  }
  bool operator!=(const EffectRelation& other) const {
    return !(*this == other);
  }

 private:
  StateSpace space_;
  std::map<State, std::set<State>> graph_;
};

// A binary relation over a state space: initial states to acceptable goal
// states. The domain is the key set of the graph.
struct Problem {
  StateSpace space;
  std::map<State, std::set<State>> graph;
};

}  // namespace absprog

#endif
