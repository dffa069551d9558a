#ifndef ABSPROG_EXECUTION_HPP
#define ABSPROG_EXECUTION_HPP

#include <memory>
#include <optional>
#include <vector>

#include "absprog/state_space.hpp"

namespace absprog {

// Trace states are shared so that branching explorations reuse common
// prefixes instead of copying them.
using StateRef = std::shared_ptr<const ExtendedState>;

inline StateRef make_state(ExtendedState s) {
  return std::make_shared<const ExtendedState>(std::move(s));
}

// A nonempty state sequence: finite when the cycle is empty, otherwise the
// eventually periodic infinite sequence prefix . cycle . cycle . ...
//
// Lassos are stored canonically (shortest prefix of length >= 1, primitive
// cycle), so value equality coincides with equality of the denoted infinite
// sequences.
class Execution {
 public:
  static Execution finite(std::vector<StateRef> states);
  static Execution lasso(std::vector<StateRef> prefix,
                         std::vector<StateRef> cycle);

  bool is_finite() const { return cycle_.empty(); }
  // Number of states; nullopt for infinite executions.
  std::optional<std::uint64_t> length() const;

  const std::vector<StateRef>& prefix() const { return prefix_; }
  const std::vector<StateRef>& cycle() const { return cycle_; }

  const ExtendedState& first() const { return *prefix_.front(); }
  // Final state; finite executions only.
  const ExtendedState& last() const;

  bool operator==(const Execution& other) const;
  bool operator!=(const Execution& other) const { return !(*this == other); }
  bool operator<(const Execution& other) const;

 private:
  Execution(std::vector<StateRef> prefix, std::vector<StateRef> cycle)
      : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {}

  std::vector<StateRef> prefix_;
  std::vector<StateRef> cycle_;
};

// Pointwise projection; prefix and cycle are projected independently, so the
// lasso shape is preserved.
Execution project_execution(const Execution& e, const StateSpace& b);

// Names bound anywhere in the execution that are not variables of base.
std::set<std::string> auxiliary_names_of(const Execution& e,
                                         const StateSpace& base);

}  // namespace absprog

#endif
