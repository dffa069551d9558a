#include "absprog/analysis.hpp"

#include "absprog/error.hpp"
#include "absprog/json_io.hpp"

namespace absprog {

namespace {

void add_failure(Verdict& v, const State& state, std::string reason,
                 std::size_t limit) {
  v.kind = Verdict::Kind::Fails;
  v.total_failures += 1;
  if (v.counterexamples.size() < limit)
    v.counterexamples.push_back({state, std::move(reason)});
}

}  // namespace

EffectResult effect(const ExtensionalProgram& p,
                    const std::set<State>& partial) {
  std::map<State, std::set<State>> graph;
  std::set<State> unknown;
  for (const auto& [a, executions] : p.table()) {
    bool diverges = false;
    std::set<State> finals;
    for (const Execution& e : executions) {
      if (!e.is_finite()) {
        diverges = true;
        break;
      }
      finals.insert(e.last());
    }
    // A recorded infinite execution settles nontermination even when other
    // paths were cut off; otherwise a cut leaves the state undecided.
    if (diverges) continue;
    if (partial.count(a)) {
      unknown.insert(a);
      continue;
    }
    if (finals.empty()) {
      // No execution at all: not a program state we can decide anything
      // about; leave it outside the domain.
      continue;
    }
    graph.emplace(a, std::move(finals));
  }
  return EffectResult{EffectRelation(p.base(), std::move(graph)),
                      std::move(unknown)};
}

Verdict solves(const Problem& f, const ExtensionalProgram& p,
               const std::set<State>& partial,
               std::size_t counterexample_limit) {
  if (f.space != p.base())
    fail(Errc::space_mismatch,
         "the problem's space differs from the program's base space; "
         "transform the program first (rename, extend or restrict)");

  EffectResult eff = effect(p, partial);
  Verdict verdict;
  std::set<State> undecided;
  for (const auto& [a, goals] : f.graph) {
    if (eff.unknown.count(a)) {
      undecided.insert(a);
      continue;
    }
    auto row = eff.relation.graph().find(a);
    if (row == eff.relation.graph().end()) {
      add_failure(verdict, a, "the program may diverge from this state",
                  counterexample_limit);
      continue;
    }
    for (const State& b : row->second) {
      if (!goals.count(b))
        add_failure(verdict, a,
                    "the program can end in " + dump_state_text(b) +
                        ", which the problem does not allow",
                    counterexample_limit);
    }
  }
  if (verdict.is_fails()) return verdict;
  if (!undecided.empty()) {
    verdict.kind = Verdict::Kind::Unknown;
    verdict.unknown_states = std::move(undecided);
  }
  return verdict;
}

Verdict equivalent(const ExtensionalProgram& p, const ExtensionalProgram& q,
                   const std::set<State>& partial_p,
                   const std::set<State>& partial_q,
                   std::size_t counterexample_limit) {
  if (p.base() != q.base())
    fail(Errc::space_mismatch,
         "the programs have different base spaces; transform them onto a "
         "common space first");

  EffectResult ep = effect(p, partial_p);
  EffectResult eq = effect(q, partial_q);
  Verdict verdict;
  std::set<State> undecided;
  for (const State& a : enumerate_states(p.base())) {
    bool unknown_p = ep.unknown.count(a) != 0;
    bool unknown_q = eq.unknown.count(a) != 0;
    auto row_p = ep.relation.graph().find(a);
    auto row_q = eq.relation.graph().find(a);
    bool in_p = row_p != ep.relation.graph().end();
    bool in_q = row_q != eq.relation.graph().end();
    if (unknown_p || unknown_q) {
      // A definite difference can still show through one undecided side:
      // a decided domain membership on one side conflicting with a decided
      // non-membership on the other cannot, but unequal decided rows can.
      if (!unknown_p && !unknown_q && in_p != in_q) {
        add_failure(verdict, a, "effect domains differ", counterexample_limit);
      } else {
        undecided.insert(a);
      }
      continue;
    }
    if (in_p != in_q) {
      add_failure(verdict, a,
                  in_p ? "only the first program surely terminates here"
                       : "only the second program surely terminates here",
                  counterexample_limit);
      continue;
    }
    if (in_p && row_p->second != row_q->second)
      add_failure(verdict, a, "the sets of final states differ",
                  counterexample_limit);
  }
  if (verdict.is_fails()) return verdict;
  if (!undecided.empty()) {
    verdict.kind = Verdict::Kind::Unknown;
    verdict.unknown_states = std::move(undecided);
  }
  return verdict;
}

Verdict solves_via_transform(const Problem& f, const ExtensionalProgram& p,
                             std::span<const TransformStep> steps,
                             const std::set<State>& partial,
                             std::size_t counterexample_limit,
                             std::uint64_t budget) {
  ExtensionalProgram transformed = p;
  std::set<State> transformed_partial = partial;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      StateSpace before = transformed.base();
      transformed = apply_step(transformed, steps[i], budget);
      transformed_partial =
          transform_state_set(transformed_partial, before, steps[i]);
    } catch (const Error& e) {
      if (e.code() == Errc::inapplicable_step) throw;
      fail(Errc::inapplicable_step,
           "step " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return solves(f, transformed, transformed_partial, counterexample_limit);
}

}  // namespace absprog
