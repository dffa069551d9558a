#ifndef ABSPROG_JSON_IO_HPP
#define ABSPROG_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "absprog/program.hpp"
#include "absprog/transforms.hpp"

namespace absprog {

using Json = nlohmann::json;

// State space: {"vars": {"x": {"type":"int","min":0,"max":3}, ...}}
Json space_to_json(const StateSpace& space);
StateSpace space_from_json(const Json& j);

Json domain_to_json(const Domain& d);
Domain domain_from_json(const Json& j);

// State: {"x": 1, "b": true, "c": "red"}
Json state_to_json(const State& s);
State state_from_json(const Json& j);

// Execution: {"prefix": [state...], "cycle": [state...]}
Json execution_to_json(const Execution& e);
Execution execution_from_json(const Json& j);

// Extensional program:
// {"space": {...}, "table": [{"from": state, "executions": [...]}, ...]}
Json program_to_json(const ExtensionalProgram& p);
ExtensionalProgram program_from_json(const Json& j);

// Effect relation with its undecided start states:
// {"space": {...}, "effect": [{"from": state, "to": [state...]}], "unknown": [...]}
Json effect_to_json(const EffectRelation& r, const std::set<State>& unknown);
std::pair<EffectRelation, std::set<State>> effect_from_json(const Json& j);

// Problem, either {"space":…, "pairs": [[a, b], ...]} or
// {"space":…, "pre": "...", "post": "..."} with primed names in post.
// Intensional problems are expanded by enumeration.
Problem problem_from_json(const Json& j,
                          std::uint64_t budget = kDefaultEnumerationBudget);

// Witness: {"left": [step...], "right": [step...]} where a step is one of
//   {"op":"rename","base":{..},"aux":{..}}
//   {"op":"extend","var":"k","domain":{...}}
//   {"op":"restrict","space":{...}}
Json witness_to_json(const IdentityWitness& w);
IdentityWitness witness_from_json(const Json& j);
Json step_to_json(const TransformStep& step);
TransformStep step_from_json(const Json& j);
std::vector<TransformStep> steps_from_json(const Json& j);

std::string dump_canonical(const Json& j);

// Compact one-line rendering of a state, valid JSON: {"x":0,"b":true}.
std::string dump_state_text(const State& s);

}  // namespace absprog

#endif
