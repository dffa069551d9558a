#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "absprog/analysis.hpp"
#include "absprog/error.hpp"
#include "absprog/interp.hpp"
#include "absprog/parser.hpp"
#include "absprog/printer.hpp"
#include "absprog/rewrite.hpp"
#include "support/gen.hpp"

using namespace absprog;

namespace {

ProgramAst parse_ok(const std::string& text) {
  ParseResult r = parse_program(text);
  if (!r.ok())
    for (const auto& d : r.diagnostics) MESSAGE(format_diagnostic(d));
  REQUIRE(r.ok());
  return *r.ast;
}

EffectRelation effect_of(const ProgramAst& ast) {
  ExtensionalResult r = to_extensional(ast);
  REQUIRE(r.complete());
  return effect(r.program).relation;
}

State st(std::map<std::string, Value> m) { return State(std::move(m)); }

}  // namespace

TEST_CASE("desugar hoists a call expression into a temporary") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := inc(p: int[0..7]) r := p + 1 end "
      "begin x := inc(1) end");
  ProgramAst flat = desugar_call_expressions(ast);
  CHECK(!contains_call_expressions(flat));
  const Stmt* block = flat.body.get();
  REQUIRE(block->kind == Stmt::Kind::VarBlock);
  CHECK(block->var == "t");
  REQUIRE(block->body->kind == Stmt::Kind::Seq);
  CHECK(block->body->children[0]->kind == Stmt::Kind::Call);
  CHECK(block->body->children[1]->kind == Stmt::Kind::Assign);
  // The hoist is semantics-preserving.
  CHECK(effect_of(ast) == effect_of(flat));
}

TEST_CASE("two call sites hoist left to right") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := inc(p: int[0..7]) r := p + 1 end "
      "begin x := inc(1) + inc(2) end");
  ProgramAst flat = desugar_call_expressions(ast);
  const Stmt* outer = flat.body.get();
  REQUIRE(outer->kind == Stmt::Kind::VarBlock);
  CHECK(outer->var == "t");
  const Stmt* call1 = outer->body->children[0].get();
  CHECK(call1->ins[0]->literal == Value(std::int64_t(1)));
  const Stmt* inner = outer->body->children[1].get();
  REQUIRE(inner->kind == Stmt::Kind::VarBlock);
  CHECK(inner->var == "t_1");
  const Stmt* call2 = inner->body->children[0].get();
  CHECK(call2->ins[0]->literal == Value(std::int64_t(2)));

  // inc(1) + inc(2) = 5 everywhere.
  EffectRelation e = effect_of(ast);
  for (const auto& [a, bs] : e.graph()) {
    (void)a;
    CHECK(bs == std::set<State>{st({{"x", std::int64_t(5)}})});
  }
}

TEST_CASE("nested call expressions evaluate inner first") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := inc(p: int[0..7]) r := p + 1 end "
      "begin x := inc(inc(0)) end");
  EffectRelation e = effect_of(ast);
  for (const auto& [a, bs] : e.graph()) {
    (void)a;
    CHECK(bs == std::set<State>{st({{"x", std::int64_t(2)}})});
  }
}

TEST_CASE("call in a while guard re-evaluates every pass") {
  ProgramAst ast = parse_ok(
      "space n: int[0..3] "
      "sub (r: bool) := pos(p: int[0..3]) r := p > 0 end "
      "begin while pos(n) do n := n - 1 od end");
  ProgramAst flat = desugar_call_expressions(ast);
  CHECK(!contains_call_expressions(flat));
  EffectRelation e = effect_of(ast);
  for (const auto& [a, bs] : e.graph()) {
    (void)a;
    CHECK(bs == std::set<State>{st({{"n", std::int64_t(0)}})});
  }
  CHECK(e.graph().size() == 4);
}

TEST_CASE("call in an if guard") {
  ProgramAst ast = parse_ok(
      "space x: int[0..3], y: int[0..3] "
      "sub (r: bool) := isz(p: int[0..3]) r := p = 0 end "
      "begin if isz(x) -> y := 1 [] not isz(x) -> y := 2 fi end");
  EffectRelation e = effect_of(ast);
  CHECK(e.graph().at(st({{"x", std::int64_t(0)}, {"y", std::int64_t(0)}})) ==
        std::set<State>{st({{"x", std::int64_t(0)}, {"y", std::int64_t(1)}})});
  CHECK(e.graph().at(st({{"x", std::int64_t(3)}, {"y", std::int64_t(0)}})) ==
        std::set<State>{st({{"x", std::int64_t(3)}, {"y", std::int64_t(2)}})});
}

TEST_CASE("multi-output callee cannot be an expression") {
  // Hand-built: the resolver would reject this at parse time.
  ProgramAst ast;
  ast.space = StateSpace({{"x", Domain::integer(0, 3)}});
  Subprogram two;
  two.name = "two";
  two.outs = {{"q", Domain::integer(0, 3), {}}, {"r", Domain::integer(0, 3), {}}};
  two.body = Stmt::make_assign({"q", "r"},
                               {Domain::integer(0, 3), Domain::integer(0, 3)},
                               {Expr::make_int(0), Expr::make_int(0)});
  ast.subs.push_back(two);
  ast.body = Stmt::make_assign({"x"}, {Domain::integer(0, 3)},
                               {Expr::make_call("two", {})});
  CHECK_THROWS_AS(desugar_call_expressions(ast), Error);
}

TEST_CASE("inline_calls leaves call-free programs untouched") {
  ProgramAst ast = parse_ok("space x: int[0..3] begin x := x + 1 end");
  ProgramAst inlined = inline_calls(ast);
  CHECK(structurally_equal(ast.body, inlined.body));
}

TEST_CASE("inlining a single call matches the call semantics") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := inc(p: int[0..7]) r := p + 1 end "
      "begin (x) := inc(x) end");
  ProgramAst inlined = inline_calls(ast);
  CHECK(!contains_call_statements(inlined));
  CHECK(!contains_call_expressions(inlined));
  CHECK(inlined.subs.empty());
  // Shape: input block wrapping output block wrapping body and copy-out.
  const Stmt* p_block = inlined.body.get();
  REQUIRE(p_block->kind == Stmt::Kind::VarBlock);
  CHECK(p_block->var == "p_1");
  const Stmt* r_block = p_block->body.get();
  REQUIRE(r_block->kind == Stmt::Kind::VarBlock);
  CHECK(r_block->var == "r_1");
  CHECK(effect_of(ast) == effect_of(inlined));
}

TEST_CASE("inlining reproduces output-entry branching") {
  ProgramAst ast = parse_ok(
      "space x: int[0..2] "
      "sub (r: int[0..2]) := seed() if r < 2 -> skip [] r = 2 -> r := 0 fi end "
      "begin (x) := seed() end");
  ProgramAst inlined = inline_calls(ast);
  CHECK(effect_of(ast) == effect_of(inlined));
}

TEST_CASE("nested non-recursive calls inline to the same effect") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := inc(p: int[0..7]) r := p + 1 end "
      "sub (r: int[0..7]) := twice_inc(p: int[0..7]) "
      "  var t: int[0..7] := 0 in (t) := inc(p); (r) := inc(t) end "
      "end "
      "begin (x) := twice_inc(x) end");
  ProgramAst inlined = inline_calls(ast);
  CHECK(!contains_call_statements(inlined));
  CHECK(effect_of(ast) == effect_of(inlined));
}

TEST_CASE("value-result lets a variable be input and output at once") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := bump(p: int[0..7]) r := p + 1 end "
      "begin (x) := bump(x) end");
  ProgramAst inlined = inline_calls(ast);
  CHECK(effect_of(ast) == effect_of(inlined));
}

TEST_CASE("recursive call graphs are rejected") {
  ProgramAst ast = parse_ok(
      "space n: int[0..4], r: int[0..1] "
      "sub (r: int[0..1]) := cd(n: int[0..4]) "
      "  if n = 0 -> r := 0 [] n /= 0 -> (r) := cd(n - 1) fi "
      "end "
      "begin (r) := cd(n) end");
  try {
    inline_calls(ast);
    FAIL("expected RecursiveCallGraph");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::recursive_call_graph);
  }
}

TEST_CASE("mutually recursive subprograms are rejected") {
  ParseResult r = parse_program(
      "space x: int[0..1] "
      "sub (r: int[0..1]) := a(p: int[0..1]) (r) := b(p) end "
      "sub (r: int[0..1]) := b(p: int[0..1]) (r) := a(p) end "
      "begin (x) := a(x) end");
  REQUIRE(r.ok());
  CHECK_THROWS_AS(inline_calls(*r.ast), Error);
}

TEST_CASE("inlined programs parse and print") {
  ProgramAst ast = parse_ok(
      "space x: int[0..7] "
      "sub (r: int[0..7]) := inc(p: int[0..7]) r := p + 1 end "
      "begin x := inc(1); (x) := inc(x) end");
  ProgramAst inlined = inline_calls(ast);
  std::string printed = format_program(inlined);
  ParseResult back = parse_program(printed);
  REQUIRE(back.ok());
  CHECK(structurally_equal(inlined, *back.ast));
}

TEST_CASE("inlining agrees with call semantics on random programs") {
  testgen::Rng rng(307);
  for (int round = 0; round < 25; ++round) {
    ProgramAst ast = testgen::random_ast(rng, {.sub_count = 2});
    ProgramAst inlined = inline_calls(ast);
    CHECK(!contains_call_statements(inlined));
    ExtensionalResult direct = to_extensional(ast);
    ExtensionalResult flat = to_extensional(inlined);
    REQUIRE(direct.complete());
    REQUIRE(flat.complete());
    CHECK(effect(direct.program).relation == effect(flat.program).relation);
  }
}
