#include "absprog/program.hpp"

#include "absprog/error.hpp"

namespace absprog {

const ExecutionSet& ExtensionalProgram::executions_from(const State& a) const {
  if (!is_state_of(a, base_))
    fail(Errc::unknown_state,
         "state is not a point of the program's base space");
  auto it = table_.find(a);
  if (it == table_.end())
    fail(Errc::unknown_state, "no executions recorded for the given state");
  return it->second;
}

std::set<std::string> ExtensionalProgram::auxiliary_names() const {
  std::set<std::string> out;
  for (const auto& [state, executions] : table_) {
    (void)state;
    for (const auto& e : executions) {
      auto aux = auxiliary_names_of(e, base_);
      out.insert(aux.begin(), aux.end());
    }
  }
  return out;
}

const char* program_rule_name(ProgramRule rule) {
  switch (rule) {
    case ProgramRule::domain_is_whole_space:
      return "condition 1 (domain is the whole base space)";
    case ProgramRule::finite_ends_in_base:
      return "condition 2 (finite executions end in the base space)";
    case ProgramRule::starts_at_its_state:
      return "condition 3 (executions start at their state)";
    case ProgramRule::execution_nonempty:
      return "condition 3 (executions are nonempty)";
    case ProgramRule::state_covers_base:
      return "base components present in every state";
  }
  return "unknown condition";
}

ValidationReport validate_program(const ExtensionalProgram& p,
                                  std::uint64_t budget) {
  ValidationReport report;
  auto blame = [&](ProgramRule rule, const State& state, std::string detail) {
    report.violations.push_back({rule, state, std::move(detail)});
  };

  for (const State& a : enumerate_states(p.base(), budget)) {
    auto it = p.table().find(a);
    if (it == p.table().end() || it->second.empty()) {
      blame(ProgramRule::domain_is_whole_space, a,
            "no execution starts from this base state");
    }
  }

  for (const auto& [a, executions] : p.table()) {
    if (!is_state_of(a, p.base())) {
      blame(ProgramRule::domain_is_whole_space, a,
            "table row is not a state of the base space");
      continue;
    }
    for (const Execution& e : executions) {
      if (e.first() != a) {
        blame(ProgramRule::starts_at_its_state, a,
              "an execution starts at a different state");
      }
      if (e.is_finite() && !is_state_of(e.last(), p.base())) {
        blame(ProgramRule::finite_ends_in_base, a,
              "a finite execution ends outside the base space");
      }
      bool covered = true;
      for (const auto& s : e.prefix())
        covered = covered && covers_base(*s, p.base());
      for (const auto& s : e.cycle())
        covered = covered && covers_base(*s, p.base());
      if (!covered) {
        blame(ProgramRule::state_covers_base, a,
              "an execution state drops or corrupts a base variable");
      }
    }
  }
  return report;
}

ExtensionalProgram skip_program(const StateSpace& base, std::uint64_t budget) {
  std::map<State, ExecutionSet> table;
  for (const State& a : enumerate_states(base, budget)) {
    ExecutionSet set;
    set.insert(Execution::finite({make_state(a)}));
    table.emplace(a, std::move(set));
  }
  return ExtensionalProgram(base, std::move(table));
}

std::set<State> EffectRelation::domain() const {
  std::set<State> out;
  for (const auto& [a, b] : graph_) {
    (void)b;
    out.insert(a);
  }
  return out;
}

}  // namespace absprog
