#include "absprog/execution.hpp"

#include <algorithm>

#include "absprog/error.hpp"

namespace absprog {

namespace {

bool states_equal(const StateRef& a, const StateRef& b) {
  return a == b || *a == *b;
}

bool state_less(const StateRef& a, const StateRef& b) { return *a < *b; }

// Shortest word w with cycle = w^k.
void primitive_cycle(std::vector<StateRef>& cycle) {
  const std::size_t n = cycle.size();
  for (std::size_t d = 1; d <= n / 2; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i)
      repeats = states_equal(cycle[i], cycle[i % d]);
    if (repeats) {
      cycle.resize(d);
      return;
    }
  }
}

}  // namespace

Execution Execution::finite(std::vector<StateRef> states) {
  if (states.empty())
    fail(Errc::invalid_argument, "an execution has at least one state");
  return Execution(std::move(states), {});
}

Execution Execution::lasso(std::vector<StateRef> prefix,
                           std::vector<StateRef> cycle) {
  if (prefix.empty())
    fail(Errc::invalid_argument, "an execution has at least one state");
  if (cycle.empty())
    fail(Errc::invalid_argument, "a lasso requires a nonempty cycle");
  primitive_cycle(cycle);
  // Roll the repetition point as far left as it goes; the prefix stays
  // nonempty so purely periodic sequences keep their first state up front.
  while (prefix.size() > 1 && states_equal(prefix.back(), cycle.back())) {
    prefix.pop_back();
    std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
  }
  return Execution(std::move(prefix), std::move(cycle));
}

std::optional<std::uint64_t> Execution::length() const {
  if (!is_finite()) return std::nullopt;
  return prefix_.size();
}

const ExtendedState& Execution::last() const {
  if (!is_finite())
    fail(Errc::invalid_state, "infinite execution has no last state");
  return *prefix_.back();
}

bool Execution::operator==(const Execution& other) const {
  if (prefix_.size() != other.prefix_.size() ||
      cycle_.size() != other.cycle_.size())
    return false;
  for (std::size_t i = 0; i < prefix_.size(); ++i)
    if (!states_equal(prefix_[i], other.prefix_[i])) return false;
  for (std::size_t i = 0; i < cycle_.size(); ++i)
    if (!states_equal(cycle_[i], other.cycle_[i])) return false;
  return true;
}

bool Execution::operator<(const Execution& other) const {
  if (std::lexicographical_compare(prefix_.begin(), prefix_.end(),
                                   other.prefix_.begin(), other.prefix_.end(),
                                   state_less))
    return true;
  if (std::lexicographical_compare(other.prefix_.begin(), other.prefix_.end(),
                                   prefix_.begin(), prefix_.end(), state_less))
    return false;
  return std::lexicographical_compare(cycle_.begin(), cycle_.end(),
                                      other.cycle_.begin(), other.cycle_.end(),
                                      state_less);
}

Execution project_execution(const Execution& e, const StateSpace& b) {
  auto map_states = [&](const std::vector<StateRef>& states) {
    std::vector<StateRef> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(make_state(project(*s, b)));
    return out;
  };
  if (e.is_finite()) return Execution::finite(map_states(e.prefix()));
  return Execution::lasso(map_states(e.prefix()), map_states(e.cycle()));
}

std::set<std::string> auxiliary_names_of(const Execution& e,
                                         const StateSpace& base) {
  std::set<std::string> out;
  auto scan = [&](const std::vector<StateRef>& states) {
    for (const auto& s : states)
      for (const auto& [name, value] : s->bindings()) {
        (void)value;
        if (!base.has(name)) out.insert(name);
      }
  };
  scan(e.prefix());
  scan(e.cycle());
  return out;
}

}  // namespace absprog
