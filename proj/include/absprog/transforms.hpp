#ifndef ABSPROG_TRANSFORMS_HPP
#define ABSPROG_TRANSFORMS_HPP

#include <span>
#include <variant>
#include <vector>

#include "absprog/program.hpp"

namespace absprog {

struct RenameStep {
  RenamingMap base;  // bijection over the base index set
  RenamingMap aux;   // bijection over the auxiliary names
};

struct ExtendStep {
  std::string var;
  Domain domain;
};

struct RestrictStep {
  StateSpace space;
};

using TransformStep = std::variant<RenameStep, ExtendStep, RestrictStep>;

struct IdentityWitness {
  std::vector<TransformStep> left;
  std::vector<TransformStep> right;
};

// Renames base variables by base_map and auxiliaries by aux_map in the base
// space and in every state of every execution. base_map must be a bijection
// over the base index set; aux_map must cover every auxiliary name; targets
// must be collision-free across the two maps.
ExtensionalProgram rename_program(const ExtensionalProgram& p,
                                  const RenamingMap& base_map,
                                  const RenamingMap& aux_map);

// aux_map completed with identity entries for unmapped auxiliaries; clashes
// with renamed base names still fail, forcing an explicit fresh name.
RenamingMap complete_aux_map(const ExtensionalProgram& p,
                             const RenamingMap& base_map,
                             const RenamingMap& aux_map);

// Promotes var (a fresh name or an existing auxiliary) to a base variable
// with the given domain, threading its value through every state that does
// not already bind it.
ExtensionalProgram extend_program(
    const ExtensionalProgram& p, const std::string& var, const Domain& domain,
    std::uint64_t budget = kDefaultEnumerationBudget);

// Iterated single-variable extension onto a superspace, in name-sorted order
// of the missing variables. The result is order-independent.
ExtensionalProgram extend_program_to(
    const ExtensionalProgram& p, const StateSpace& superspace,
    std::uint64_t budget = kDefaultEnumerationBudget);

// Demotes the base variables outside the subspace to auxiliaries: each
// execution is wrapped in a projected start state and, when finite, a
// projected final state.
ExtensionalProgram restrict_program(
    const ExtensionalProgram& p, const StateSpace& subspace,
    std::uint64_t budget = kDefaultEnumerationBudget);

ExtensionalProgram apply_step(const ExtensionalProgram& p,
                              const TransformStep& step,
                              std::uint64_t budget = kDefaultEnumerationBudget);

// Applies the steps in order. Failures are reported as InapplicableStep
// naming the 1-based index (and side label, when given).
ExtensionalProgram apply_steps(const ExtensionalProgram& p,
                               std::span<const TransformStep> steps,
                               const std::string& side_label = "",
                               std::uint64_t budget = kDefaultEnumerationBudget);

// True iff transforming p by the witness's left steps and q by its right
// steps yields equal programs.
bool check_identical(const ExtensionalProgram& p, const ExtensionalProgram& q,
                     const IdentityWitness& witness,
                     std::uint64_t budget = kDefaultEnumerationBudget);

// Carries a set of base states through a transform step, used to keep
// under-explored states attached to transformed programs.
std::set<State> transform_state_set(const std::set<State>& states,
                                    const StateSpace& before,
                                    const TransformStep& step);

}  // namespace absprog

#endif
