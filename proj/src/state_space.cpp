#include "absprog/state_space.hpp"

#include <algorithm>

#include "absprog/error.hpp"

namespace absprog {

StateSpace::StateSpace(std::map<std::string, Domain> components)
    : components_(std::move(components)) {
  for (const auto& [name, domain] : components_) {
    (void)domain;
    if (!is_valid_variable_name(name))
      fail(Errc::invalid_argument, "invalid variable name '" + name + "'");
  }
}

bool StateSpace::has(const std::string& name) const {
  return components_.count(name) != 0;
}

const Domain* StateSpace::find(const std::string& name) const {
  auto it = components_.find(name);
  return it == components_.end() ? nullptr : &it->second;
}

const Domain& StateSpace::at(const std::string& name) const {
  const Domain* d = find(name);
  if (!d) fail(Errc::invalid_argument, "no variable '" + name + "' in space");
  return *d;
}

std::set<std::string> StateSpace::names() const {
  std::set<std::string> out;
  for (const auto& [name, domain] : components_) {
    (void)domain;
    out.insert(name);
  }
  return out;
}

std::optional<std::uint64_t> StateSpace::state_count(std::uint64_t cap) const {
  // The empty index set denotes the empty product: zero states.
  if (components_.empty()) return 0;
  unsigned __int128 total = 1;
  for (const auto& [name, domain] : components_) {
    (void)name;
    total *= domain.size();
    if (total > cap) return std::nullopt;
  }
  return static_cast<std::uint64_t>(total);
}

bool State::has(const std::string& name) const {
  return bindings_.count(name) != 0;
}

const Value* State::find(const std::string& name) const {
  auto it = bindings_.find(name);
  return it == bindings_.end() ? nullptr : &it->second;
}

const Value& State::at(const std::string& name) const {
  const Value* v = find(name);
  if (!v) fail(Errc::invalid_state, "no binding for '" + name + "'");
  return *v;
}

State State::with(const std::string& name, Value v) const {
  auto bindings = bindings_;
  bindings.insert_or_assign(name, std::move(v));
  return State(std::move(bindings));
}

State State::without(const std::string& name) const {
  auto bindings = bindings_;
  bindings.erase(name);
  return State(std::move(bindings));
}

bool is_state_of(const State& s, const StateSpace& space) {
  // The empty product denotes the empty set: no state belongs to it.
  if (space.empty()) return false;
  if (s.size() != space.variable_count()) return false;
  auto it = space.components().begin();
  for (const auto& [name, value] : s.bindings()) {
    if (name != it->first || !it->second.contains(value)) return false;
    ++it;
  }
  return true;
}

bool covers_base(const ExtendedState& s, const StateSpace& base) {
  for (const auto& [name, domain] : base.components()) {
    const Value* v = s.find(name);
    if (!v || !domain.contains(*v)) return false;
  }
  return true;
}

std::vector<State> enumerate_states(const StateSpace& space,
                                    std::uint64_t budget) {
  auto count = space.state_count(budget);
  if (!count)
    fail(Errc::budget_exceeded,
         "state space exceeds enumeration budget of " + std::to_string(budget));
  std::vector<State> out;
  if (*count == 0) return out;
  out.reserve(*count);

  std::vector<const std::string*> names;
  std::vector<const Domain*> domains;
  for (const auto& [name, domain] : space.components()) {
    names.push_back(&name);
    domains.push_back(&domain);
  }
  std::vector<std::uint64_t> odometer(names.size(), 0);
  for (;;) {
    std::map<std::string, Value> bindings;
    for (std::size_t i = 0; i < names.size(); ++i)
      bindings.emplace(*names[i], domains[i]->value_at(odometer[i]));
    out.push_back(State(std::move(bindings)));
    // Advance with the last (greatest) name fastest.
    std::size_t i = names.size();
    while (i > 0) {
      --i;
      if (++odometer[i] < domains[i]->size()) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
  }
}

bool is_subspace(const StateSpace& b, const StateSpace& a) {
  for (const auto& [name, domain] : b.components()) {
    const Domain* in_a = a.find(name);
    if (!in_a || *in_a != domain) return false;
  }
  return true;
}

bool is_injective(const RenamingMap& m) {
  std::set<std::string> targets;
  for (const auto& [from, to] : m) {
    (void)from;
    if (!targets.insert(to).second) return false;
  }
  return true;
}

RenamingMap inverse_of(const RenamingMap& m) {
  RenamingMap inv;
  for (const auto& [from, to] : m) {
    if (!inv.emplace(to, from).second)
      fail(Errc::invalid_argument, "renaming map is not injective at '" + to + "'");
  }
  return inv;
}

std::optional<RenamingMap> spaces_equivalent(const StateSpace& a,
                                             const StateSpace& b) {
  if (a.variable_count() != b.variable_count()) return std::nullopt;
  // Greedy per source name in sorted order; picking the smallest unused
  // target with an equal domain yields the lexicographically smallest
  // bijection whenever any exists.
  std::set<std::string> taken;
  RenamingMap out;
  for (const auto& [name, domain] : a.components()) {
    bool matched = false;
    for (const auto& [target, target_domain] : b.components()) {
      if (taken.count(target) || target_domain != domain) continue;
      out.emplace(name, target);
      taken.insert(target);
      matched = true;
      break;
    }
    if (!matched) return std::nullopt;
  }
  return out;
}

State project(const ExtendedState& s, const StateSpace& b) {
  std::map<std::string, Value> bindings;
  for (const auto& [name, domain] : b.components()) {
    const Value* v = s.find(name);
    if (!v)
      fail(Errc::not_a_superstate,
           "state does not bind variable '" + name + "'");
    if (!domain.contains(*v))
      fail(Errc::not_a_superstate, "value of '" + name +
                                       "' lies outside the target domain " +
                                       domain.to_text());
    bindings.emplace(name, *v);
  }
  return State(std::move(bindings));
}

std::vector<State> project_sequence(const std::vector<ExtendedState>& seq,
                                    const StateSpace& b) {
  std::vector<State> out;
  out.reserve(seq.size());
  for (const auto& s : seq) out.push_back(project(s, b));
  return out;
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (std::uint64_t n = 1;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!used.count(candidate)) return candidate;
  }
}

}  // namespace absprog
