#include "absprog/transforms.hpp"

#include <algorithm>

#include "absprog/error.hpp"

namespace absprog {

namespace {

State rename_state(const State& s, const RenamingMap& base_map,
                   const RenamingMap& aux_map) {
  std::map<std::string, Value> bindings;
  for (const auto& [name, value] : s.bindings()) {
    auto it = base_map.find(name);
    if (it == base_map.end()) it = aux_map.find(name);
    const std::string& target = it->second;
    bindings.emplace(target, value);
  }
  return State(std::move(bindings));
}

Execution rename_execution(const Execution& e, const RenamingMap& base_map,
                           const RenamingMap& aux_map) {
  auto map_states = [&](const std::vector<StateRef>& states) {
    std::vector<StateRef> out;
    out.reserve(states.size());
    for (const auto& s : states)
      out.push_back(make_state(rename_state(*s, base_map, aux_map)));
    return out;
  };
  if (e.is_finite()) return Execution::finite(map_states(e.prefix()));
  return Execution::lasso(map_states(e.prefix()), map_states(e.cycle()));
}

// Threads var through one state: states already binding it are kept
// verbatim, the others inherit the carried value.
ExtendedState thread_state(const ExtendedState& s, const std::string& var,
                           Value& carried) {
  const Value* own = s.find(var);
  if (own) {
    carried = *own;
    return s;
  }
  return s.with(var, carried);
}

Execution extend_execution(const Execution& e, const std::string& var,
                           Value start_value) {
  Value carried = std::move(start_value);
  std::vector<StateRef> prefix;
  prefix.reserve(e.prefix().size());
  for (const auto& s : e.prefix())
    prefix.push_back(make_state(thread_state(*s, var, carried)));
  if (e.is_finite()) return Execution::finite(std::move(prefix));

  // Unroll the cycle until the carried value at the cycle entry repeats;
  // the threaded sequence is periodic from the first repeated entry value.
  std::map<Value, std::size_t> entry_passes;
  std::vector<std::vector<StateRef>> passes;
  for (;;) {
    auto seen = entry_passes.find(carried);
    if (seen != entry_passes.end()) {
      for (std::size_t i = 0; i < seen->second; ++i)
        prefix.insert(prefix.end(), passes[i].begin(), passes[i].end());
      std::vector<StateRef> cycle;
      for (std::size_t i = seen->second; i < passes.size(); ++i)
        cycle.insert(cycle.end(), passes[i].begin(), passes[i].end());
      return Execution::lasso(std::move(prefix), std::move(cycle));
    }
    entry_passes.emplace(carried, passes.size());
    std::vector<StateRef> pass;
    pass.reserve(e.cycle().size());
    for (const auto& s : e.cycle())
      pass.push_back(make_state(thread_state(*s, var, carried)));
    passes.push_back(std::move(pass));
  }
}

}  // namespace

ExtensionalProgram rename_program(const ExtensionalProgram& p,
                                  const RenamingMap& base_map,
                                  const RenamingMap& aux_map) {
  const StateSpace& base = p.base();
  if (base_map.size() != base.variable_count())
    fail(Errc::invalid_argument,
         "base renaming must cover exactly the base variables");
  for (const auto& [from, to] : base_map) {
    if (!base.has(from))
      fail(Errc::invalid_argument,
           "base renaming mentions '" + from + "', not a base variable");
    if (!is_valid_variable_name(to))
      fail(Errc::invalid_argument, "invalid target name '" + to + "'");
  }

  std::set<std::string> aux = p.auxiliary_names();
  RenamingMap aux_used;
  for (const std::string& name : aux) {
    auto it = aux_map.find(name);
    if (it == aux_map.end())
      fail(Errc::incomplete_auxiliary_map,
           "auxiliary variable '" + name + "' has no renaming");
    if (!is_valid_variable_name(it->second))
      fail(Errc::invalid_argument, "invalid target name '" + it->second + "'");
    aux_used.emplace(name, it->second);
  }

  std::set<std::string> targets;
  for (const auto& [from, to] : base_map) {
    (void)from;
    if (!targets.insert(to).second)
      fail(Errc::name_collision, "renaming target '" + to + "' used twice");
  }
  for (const auto& [from, to] : aux_used) {
    (void)from;
    if (!targets.insert(to).second)
      fail(Errc::name_collision,
           "auxiliary target '" + to +
               "' collides with another renamed variable");
  }

  std::map<std::string, Domain> components;
  for (const auto& [name, domain] : base.components())
    components.emplace(base_map.at(name), domain);
  StateSpace renamed_base{std::move(components)};

  std::map<State, ExecutionSet> table;
  for (const auto& [a, executions] : p.table()) {
    ExecutionSet set;
    for (const Execution& e : executions)
      set.insert(rename_execution(e, base_map, aux_used));
    table.emplace(rename_state(a, base_map, aux_used), std::move(set));
  }
  return ExtensionalProgram(std::move(renamed_base), std::move(table));
}

RenamingMap complete_aux_map(const ExtensionalProgram& p,
                             const RenamingMap& base_map,
                             const RenamingMap& aux_map) {
  (void)base_map;
  RenamingMap out = aux_map;
  for (const std::string& name : p.auxiliary_names()) out.emplace(name, name);
  return out;
}

ExtensionalProgram extend_program(const ExtensionalProgram& p,
                                  const std::string& var, const Domain& domain,
                                  std::uint64_t budget) {
  const StateSpace& base = p.base();
  if (base.has(var))
    fail(Errc::variable_already_in_base,
         "'" + var + "' is already a base variable");
  if (!is_valid_variable_name(var))
    fail(Errc::invalid_argument, "invalid variable name '" + var + "'");

  for (const auto& [a, executions] : p.table()) {
    (void)a;
    for (const Execution& e : executions) {
      auto check = [&](const std::vector<StateRef>& states) {
        for (const auto& s : states) {
          const Value* v = s->find(var);
          if (v && !domain.contains(*v))
            fail(Errc::auxiliary_domain_mismatch,
                 "auxiliary '" + var + "' takes value " + value_to_string(*v) +
                     " outside " + domain.to_text());
        }
      };
      check(e.prefix());
      check(e.cycle());
    }
  }

  auto components = base.components();
  components.emplace(var, domain);
  StateSpace extended{std::move(components)};

  std::map<State, ExecutionSet> table;
  for (const State& c : enumerate_states(extended, budget)) {
    const State a = c.without(var);
    auto row = p.table().find(a);
    if (row == p.table().end()) continue;
    ExecutionSet set;
    for (const Execution& e : row->second) {
      Execution extended_exec = extend_execution(e, var, c.at(var));
      set.insert(std::move(extended_exec));
    }
    table.emplace(c, std::move(set));
  }
  return ExtensionalProgram(std::move(extended), std::move(table));
}

ExtensionalProgram extend_program_to(const ExtensionalProgram& p,
                                     const StateSpace& superspace,
                                     std::uint64_t budget) {
  if (!is_subspace(p.base(), superspace))
    fail(Errc::not_a_subspace,
         "the program's base space is not a subspace of the target");
  ExtensionalProgram out = p;
  for (const auto& [name, domain] : superspace.components()) {
    if (out.base().has(name)) continue;
    out = extend_program(out, name, domain, budget);
  }
  return out;
}

ExtensionalProgram restrict_program(const ExtensionalProgram& p,
                                    const StateSpace& subspace,
                                    std::uint64_t budget) {
  (void)budget;
  if (!is_subspace(subspace, p.base()))
    fail(Errc::not_a_subspace, "target is not a subspace of the base space");
  if (subspace.empty())
    return ExtensionalProgram(subspace, {});

  std::map<State, ExecutionSet> table;
  for (const auto& [a, executions] : p.table()) {
    State c = project(a, subspace);
    ExecutionSet& row = table[c];
    StateRef c_ref = make_state(c);
    for (const Execution& e : executions) {
      std::vector<StateRef> prefix;
      prefix.reserve(e.prefix().size() + 2);
      prefix.push_back(c_ref);
      prefix.insert(prefix.end(), e.prefix().begin(), e.prefix().end());
      if (e.is_finite()) {
        prefix.push_back(make_state(project(e.last(), subspace)));
        row.insert(Execution::finite(std::move(prefix)));
      } else {
        row.insert(Execution::lasso(std::move(prefix), e.cycle()));
      }
    }
  }
  return ExtensionalProgram(subspace, std::move(table));
}

ExtensionalProgram apply_step(const ExtensionalProgram& p,
                              const TransformStep& step,
                              std::uint64_t budget) {
  if (const auto* r = std::get_if<RenameStep>(&step))
    return rename_program(p, r->base, complete_aux_map(p, r->base, r->aux));
  if (const auto* e = std::get_if<ExtendStep>(&step))
    return extend_program(p, e->var, e->domain, budget);
  return restrict_program(p, std::get<RestrictStep>(step).space, budget);
}

ExtensionalProgram apply_steps(const ExtensionalProgram& p,
                               std::span<const TransformStep> steps,
                               const std::string& side_label,
                               std::uint64_t budget) {
  ExtensionalProgram out = p;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      out = apply_step(out, steps[i], budget);
    } catch (const Error& e) {
      std::string where = side_label.empty() ? "step " : side_label + " step ";
      fail(Errc::inapplicable_step,
           where + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

bool check_identical(const ExtensionalProgram& p, const ExtensionalProgram& q,
                     const IdentityWitness& witness, std::uint64_t budget) {
  ExtensionalProgram left = apply_steps(p, witness.left, "left", budget);
  ExtensionalProgram right = apply_steps(q, witness.right, "right", budget);
  return left == right;
}

std::set<State> transform_state_set(const std::set<State>& states,
                                    const StateSpace& before,
                                    const TransformStep& step) {
  std::set<State> out;
  if (const auto* r = std::get_if<RenameStep>(&step)) {
    for (const State& s : states) out.insert(rename_state(s, r->base, {}));
    return out;
  }
  if (const auto* e = std::get_if<ExtendStep>(&step)) {
    for (const State& s : states)
      for (std::uint64_t i = 0; i < e->domain.size(); ++i)
        out.insert(s.with(e->var, e->domain.value_at(i)));
    return out;
  }
  const StateSpace& target = std::get<RestrictStep>(step).space;
  (void)before;
  for (const State& s : states) out.insert(project(s, target));
  return out;
}

}  // namespace absprog
