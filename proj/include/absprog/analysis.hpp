#ifndef ABSPROG_ANALYSIS_HPP
#define ABSPROG_ANALYSIS_HPP

#include <span>

#include "absprog/program.hpp"
#include "absprog/transforms.hpp"

namespace absprog {

struct Counterexample {
  State state;
  std::string reason;
};

// Three-valued check result. Budgets can leave termination undecided, and an
// undecided state never turns into a Holds.
struct Verdict {
  enum class Kind { Holds, Fails, Unknown };

  Kind kind = Kind::Holds;
  std::vector<Counterexample> counterexamples;  // Fails; possibly truncated
  std::uint64_t total_failures = 0;             // untruncated count
  std::set<State> unknown_states;               // Unknown

  static Verdict holds() { return Verdict{}; }

  bool is_holds() const { return kind == Kind::Holds; }
  bool is_fails() const { return kind == Kind::Fails; }
  bool is_unknown() const { return kind == Kind::Unknown; }
};

inline constexpr std::size_t kDefaultCounterexampleLimit = 20;

struct EffectResult {
  EffectRelation relation;
  // Start states whose termination the budget left undecided; disjoint from
  // the relation's domain.
  std::set<State> unknown;
};

// The effect of a program: start states all of whose executions are finite,
// mapped to the set of final states. Start states listed in partial have
// unexplored paths and are reported as unknown unless a recorded execution
// already disproves termination.
EffectResult effect(const ExtensionalProgram& p,
                    const std::set<State>& partial = {});

// Does the program solve the problem: the problem's domain lies inside the
// effect's domain, and on it every possible final state is acceptable.
Verdict solves(const Problem& f, const ExtensionalProgram& p,
               const std::set<State>& partial = {},
               std::size_t counterexample_limit = kDefaultCounterexampleLimit);

// Equal effects over the common base space.
Verdict equivalent(const ExtensionalProgram& p, const ExtensionalProgram& q,
                   const std::set<State>& partial_p = {},
                   const std::set<State>& partial_q = {},
                   std::size_t counterexample_limit = kDefaultCounterexampleLimit);

// Transforms the program first (reporting InapplicableStep on failure), then
// checks the solution against the problem.
Verdict solves_via_transform(
    const Problem& f, const ExtensionalProgram& p,
    std::span<const TransformStep> steps, const std::set<State>& partial = {},
    std::size_t counterexample_limit = kDefaultCounterexampleLimit,
    std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace absprog

#endif
