#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "absprog/error.hpp"
#include "absprog/json_io.hpp"
#include "support/gen.hpp"

using namespace absprog;

namespace {

State st(std::map<std::string, Value> m) { return State(std::move(m)); }

}  // namespace

TEST_CASE("state space format matches the documented shape") {
  Json j = Json::parse(R"({"vars": {"x": {"type": "int", "min": 0, "max": 3},
                                    "b": {"type": "bool"},
                                    "c": {"type": "enum", "labels": ["red","green"]}}})");
  StateSpace space = space_from_json(j);
  CHECK(space.variable_count() == 3);
  CHECK(space.at("x") == Domain::integer(0, 3));
  CHECK(space.at("b") == Domain::boolean());
  CHECK(space.at("c") == Domain::enumeration({"red", "green"}));
  // Canonical output sorts variables by name.
  Json out = space_to_json(space);
  std::vector<std::string> keys;
  for (auto it = out.at("vars").begin(); it != out.at("vars").end(); ++it)
    keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"b", "c", "x"});
  CHECK(space_from_json(out) == space);
}

TEST_CASE("state round trip") {
  State s = st({{"b", true}, {"c", std::string("red")}, {"x", std::int64_t(2)}});
  CHECK(state_from_json(state_to_json(s)) == s);
  CHECK(dump_state_text(s) == R"({"b":true,"c":"red","x":2})");
  CHECK_THROWS_AS(state_from_json(Json::parse("[1]")), Error);
  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"x": 1.5})")), Error);
}

TEST_CASE("execution round trip preserves the lasso split") {
  Execution finite = Execution::finite(
      {make_state(st({{"x", std::int64_t(0)}})),
       make_state(st({{"x", std::int64_t(1)}}))});
  CHECK(execution_from_json(execution_to_json(finite)) == finite);

  Execution lasso = Execution::lasso(
      {make_state(st({{"x", std::int64_t(0)}}))},
      {make_state(st({{"x", std::int64_t(1)}})),
       make_state(st({{"x", std::int64_t(0)}}))});
  Json j = execution_to_json(lasso);
  CHECK(j.at("prefix").size() == lasso.prefix().size());
  CHECK(j.at("cycle").size() == lasso.cycle().size());
  CHECK(execution_from_json(j) == lasso);
}

TEST_CASE("loading canonicalizes lasso representations") {
  Json j = Json::parse(R"({"prefix": [{"x":9},{"x":0},{"x":1}],
                           "cycle": [{"x":0},{"x":1},{"x":0},{"x":1}]})");
  Execution e = execution_from_json(j);
  CHECK(e.prefix().size() == 1);
  CHECK(e.cycle().size() == 2);
}

TEST_CASE("program round trip") {
  testgen::Rng rng(501);
  for (int round = 0; round < 10; ++round) {
    StateSpace space = testgen::random_space(rng, 2, 16);
    ExtensionalProgram p = testgen::random_program(rng, space);
    ExtensionalProgram back = program_from_json(program_to_json(p));
    CHECK(back == p);
  }
}

TEST_CASE("program json dumps are stable") {
  testgen::Rng rng(503);
  StateSpace space = testgen::random_space(rng, 2, 8);
  ExtensionalProgram p = testgen::random_program(rng, space);
  std::string once = dump_canonical(program_to_json(p));
  std::string twice = dump_canonical(program_to_json(program_from_json(
      Json::parse(once))));
  CHECK(once == twice);
}

TEST_CASE("effect round trip") {
  StateSpace space({{"x", Domain::integer(0, 1)}});
  EffectRelation r(space, {{st({{"x", std::int64_t(0)}}),
                            {st({{"x", std::int64_t(1)}})}}});
  std::set<State> unknown = {st({{"x", std::int64_t(1)}})};
  auto [r2, u2] = effect_from_json(effect_to_json(r, unknown));
  CHECK(r2 == r);
  CHECK(u2 == unknown);
}

TEST_CASE("witness and step round trip") {
  IdentityWitness w;
  w.left.push_back(ExtendStep{"k", Domain::integer(0, 1)});
  w.left.push_back(RestrictStep{StateSpace({{"x", Domain::boolean()}})});
  w.right.push_back(RenameStep{{{"x", "y"}}, {{"k", "k_1"}}});
  Json j = witness_to_json(w);
  IdentityWitness back = witness_from_json(j);
  REQUIRE(back.left.size() == 2);
  REQUIRE(back.right.size() == 1);
  CHECK(std::get<ExtendStep>(back.left[0]).var == "k");
  CHECK(std::get<ExtendStep>(back.left[0]).domain == Domain::integer(0, 1));
  CHECK(std::get<RestrictStep>(back.left[1]).space ==
        StateSpace({{"x", Domain::boolean()}}));
  CHECK(std::get<RenameStep>(back.right[0]).base.at("x") == "y");
  CHECK(std::get<RenameStep>(back.right[0]).aux.at("k") == "k_1");
}

TEST_CASE("steps accept a bare array or a steps object") {
  Json arr = Json::parse(R"([{"op":"extend","var":"k","domain":{"type":"bool"}}])");
  CHECK(steps_from_json(arr).size() == 1);
  Json obj = Json::parse(R"({"steps":[{"op":"restrict","space":{"vars":{}}}]})");
  CHECK(steps_from_json(obj).size() == 1);
  CHECK_THROWS_AS(steps_from_json(Json::parse(R"({"op":"frobnicate"})")), Error);
}

TEST_CASE("problems from pairs validate their states") {
  Json j = Json::parse(R"({"space": {"vars": {"x": {"type":"int","min":0,"max":1}}},
                           "pairs": [[{"x":0},{"x":1}]]})");
  Problem f = problem_from_json(j);
  CHECK(f.graph.size() == 1);
  Json bad = Json::parse(R"({"space": {"vars": {"x": {"type":"int","min":0,"max":1}}},
                             "pairs": [[{"x":0},{"x":7}]]})");
  CHECK_THROWS_AS(problem_from_json(bad), Error);
  Json neither = Json::parse(R"({"space": {"vars": {}}})");
  CHECK_THROWS_AS(problem_from_json(neither), Error);
}

TEST_CASE("malformed domains are rejected") {
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"int","min":3})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"quux"})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"enum","labels":[]})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse("7")), Error);
}
