#ifndef ABSPROG_STATE_SPACE_HPP
#define ABSPROG_STATE_SPACE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "absprog/value.hpp"

namespace absprog {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1u << 20;

// A direct product of finite domains indexed by variable names. The empty
// index set is representable and denotes the empty product: no states at all.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::map<std::string, Domain> components);

  bool empty() const { return components_.empty(); }
  std::size_t variable_count() const { return components_.size(); }
  bool has(const std::string& name) const;
  const Domain* find(const std::string& name) const;
  const Domain& at(const std::string& name) const;
  const std::map<std::string, Domain>& components() const { return components_; }
  std::set<std::string> names() const;

  // Number of states, capped: returns nullopt when the product exceeds cap.
  std::optional<std::uint64_t> state_count(
      std::uint64_t cap = kDefaultEnumerationBudget) const;

  bool operator==(const StateSpace& other) const {
    return components_ == other.components_;
  }
  bool operator!=(const StateSpace& other) const { return !(*this == other); }

 private:
  std::map<std::string, Domain> components_;
};

// A finite binding of variable names to values. Serves both as a point of a
// known state space and as an extended state over some superspace; which one
// is meant is contextual, so the two roles share one representation.
class State {
 public:
  State() = default;
  explicit State(std::map<std::string, Value> bindings)
      : bindings_(std::move(bindings)) {}

  const std::map<std::string, Value>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  bool has(const std::string& name) const;
  const Value* find(const std::string& name) const;
  const Value& at(const std::string& name) const;

  State with(const std::string& name, Value v) const;
  State without(const std::string& name) const;

  bool operator==(const State& other) const {
    return bindings_ == other.bindings_;
  }
  bool operator!=(const State& other) const { return !(*this == other); }
  bool operator<(const State& other) const {
    return bindings_ < other.bindings_;
  }

 private:
  std::map<std::string, Value> bindings_;
};

// States of spaces strictly larger than a base space; same shape, different
// reading.
using ExtendedState = State;

// Exact membership: bound names equal the space's index set, values in their
// carriers.
bool is_state_of(const State& s, const StateSpace& space);

// Membership in the base space's closure: the state binds at least every
// base variable, with in-carrier values. Extra bindings are auxiliaries.
bool covers_base(const ExtendedState& s, const StateSpace& base);

// Every state of the space in canonical order: variables sorted by name and
// treated as odometer digits with the last name varying fastest, values in
// domain order. The empty space yields no states.
std::vector<State> enumerate_states(
    const StateSpace& space,
    std::uint64_t budget = kDefaultEnumerationBudget);

// True iff b's index set is a subset of a's and shared variables have equal
// domains.
bool is_subspace(const StateSpace& b, const StateSpace& a);

// An injective variable renaming. Bijectivity onto the image is validated by
// the operations that consume one.
using RenamingMap = std::map<std::string, std::string>;

bool is_injective(const RenamingMap& m);
RenamingMap inverse_of(const RenamingMap& m);

// Some bijection v with A_i = B_v(i) for all i, if one exists; ties are
// broken toward the lexicographically smallest target per source name.
std::optional<RenamingMap> spaces_equivalent(const StateSpace& a,
                                             const StateSpace& b);

// Restriction of the binding map to b's index set. Fails with NotASuperstate
// when a b-variable is unbound or carries a value outside its carrier.
State project(const ExtendedState& s, const StateSpace& b);

std::vector<State> project_sequence(const std::vector<ExtendedState>& seq,
                                    const StateSpace& b);

// Smallest name of the shape base, base_1, base_2, ... not present in used.
std::string fresh_name(const std::string& base,
                       const std::set<std::string>& used);

}  // namespace absprog

#endif
