#include "absprog/json_io.hpp"

#include "absprog/error.hpp"
#include "absprog/parser.hpp"

namespace absprog {

namespace {

Value value_from_json(const Json& j) {
  if (j.is_boolean()) return Value(j.get<bool>());
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value(j.get<std::string>());
  fail(Errc::invalid_argument,
       "state values must be booleans, integers or enum labels");
}

Json value_to_json(const Value& v) {
  switch (v.index()) {
    case 0: return Json(std::get<bool>(v));
    case 1: return Json(std::get<std::int64_t>(v));
    default: return Json(std::get<std::string>(v));
  }
}

std::vector<StateRef> states_from_json(const Json& j) {
  std::vector<StateRef> out;
  if (!j.is_array())
    fail(Errc::invalid_argument, "expected an array of states");
  for (const auto& item : j) out.push_back(make_state(state_from_json(item)));
  return out;
}

Json states_to_json(const std::vector<StateRef>& states) {
  Json out = Json::array();
  for (const auto& s : states) out.push_back(state_to_json(*s));
  return out;
}

// Evaluates a resolved condition over a combined pre/post binding map.
// Conditions are call-free, so this tiny evaluator suffices.
Value eval_condition(const ExprPtr& e, const State& bindings);

std::int64_t eval_int(const ExprPtr& e, const State& bindings) {
  Value v = eval_condition(e, bindings);
  if (!std::holds_alternative<std::int64_t>(v))
    fail(Errc::invalid_argument, "condition subexpression is not an integer");
  return std::get<std::int64_t>(v);
}

bool eval_bool(const ExprPtr& e, const State& bindings) {
  Value v = eval_condition(e, bindings);
  if (!std::holds_alternative<bool>(v))
    fail(Errc::invalid_argument, "condition subexpression is not a boolean");
  return std::get<bool>(v);
}

Value eval_condition(const ExprPtr& e, const State& bindings) {
  switch (e->kind) {
    case Expr::Kind::BoolLit:
    case Expr::Kind::IntLit:
    case Expr::Kind::EnumLit:
      return e->literal;
    case Expr::Kind::Var:
      return bindings.at(e->name);
    case Expr::Kind::Unary:
      if (e->un == UnOp::Neg) return Value(-eval_int(e->args[0], bindings));
      return Value(!eval_bool(e->args[0], bindings));
    case Expr::Kind::Binary: {
      switch (e->bin) {
        case BinOp::And:
          return Value(eval_bool(e->args[0], bindings) &&
                       eval_bool(e->args[1], bindings));
        case BinOp::Or:
          return Value(eval_bool(e->args[0], bindings) ||
                       eval_bool(e->args[1], bindings));
        case BinOp::Eq:
          return Value(eval_condition(e->args[0], bindings) ==
                       eval_condition(e->args[1], bindings));
        case BinOp::Ne:
          return Value(eval_condition(e->args[0], bindings) !=
                       eval_condition(e->args[1], bindings));
        default: {
          std::int64_t lhs = eval_int(e->args[0], bindings);
          std::int64_t rhs = eval_int(e->args[1], bindings);
          switch (e->bin) {
            case BinOp::Add: return Value(lhs + rhs);
            case BinOp::Sub: return Value(lhs - rhs);
            case BinOp::Mul: return Value(lhs * rhs);
            case BinOp::Div:
              if (rhs == 0)
                fail(Errc::invalid_argument, "division by zero in condition");
              return Value(lhs / rhs);
            case BinOp::Mod:
              if (rhs == 0)
                fail(Errc::invalid_argument, "division by zero in condition");
              return Value(lhs % rhs);
            case BinOp::Lt: return Value(lhs < rhs);
            case BinOp::Le: return Value(lhs <= rhs);
            case BinOp::Gt: return Value(lhs > rhs);
            case BinOp::Ge: return Value(lhs >= rhs);
            default: break;
          }
        }
      }
      fail(Errc::invalid_argument, "unsupported condition operator");
    }
    case Expr::Kind::Call:
      fail(Errc::invalid_argument, "calls are not allowed in conditions");
  }
  fail(Errc::invalid_argument, "unsupported condition expression");
}

}  // namespace

Json domain_to_json(const Domain& d) {
  Json out;
  switch (d.kind()) {
    case Domain::Kind::Boolean:
      out["type"] = "bool";
      break;
    case Domain::Kind::Integer:
      out["type"] = "int";
      out["min"] = d.low();
      out["max"] = d.high();
      break;
    case Domain::Kind::Enumeration:
      out["type"] = "enum";
      out["labels"] = d.labels();
      break;
  }
  return out;
}

Domain domain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type"))
    fail(Errc::invalid_argument, "a domain needs a \"type\" field");
  std::string type = j.at("type").get<std::string>();
  if (type == "bool") return Domain::boolean();
  if (type == "int") {
    if (!j.contains("min") || !j.contains("max"))
      fail(Errc::invalid_argument, "an int domain needs \"min\" and \"max\"");
    return Domain::integer(j.at("min").get<std::int64_t>(),
                           j.at("max").get<std::int64_t>());
  }
  if (type == "enum") {
    if (!j.contains("labels"))
      fail(Errc::invalid_argument, "an enum domain needs \"labels\"");
    return Domain::enumeration(j.at("labels").get<std::vector<std::string>>());
  }
  fail(Errc::invalid_argument, "unknown domain type '" + type + "'");
}

Json space_to_json(const StateSpace& space) {
  Json vars = Json::object();
  for (const auto& [name, domain] : space.components())
    vars[name] = domain_to_json(domain);
  Json out;
  out["vars"] = std::move(vars);
  return out;
}

StateSpace space_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vars"))
    fail(Errc::invalid_argument, "a state space needs a \"vars\" object");
  const Json& vars = j.at("vars");
  if (!vars.is_object())
    fail(Errc::invalid_argument, "\"vars\" must be an object");
  std::map<std::string, Domain> components;
  for (auto it = vars.begin(); it != vars.end(); ++it)
    components.emplace(it.key(), domain_from_json(it.value()));
  return StateSpace(std::move(components));
}

Json state_to_json(const State& s) {
  Json out = Json::object();
  for (const auto& [name, value] : s.bindings())
    out[name] = value_to_json(value);
  return out;
}

State state_from_json(const Json& j) {
  if (!j.is_object())
    fail(Errc::invalid_argument, "a state must be a JSON object");
  std::map<std::string, Value> bindings;
  for (auto it = j.begin(); it != j.end(); ++it)
    bindings.emplace(it.key(), value_from_json(it.value()));
  return State(std::move(bindings));
}

Json execution_to_json(const Execution& e) {
  Json out;
  out["prefix"] = states_to_json(e.prefix());
  out["cycle"] = states_to_json(e.cycle());
  return out;
}

Execution execution_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("prefix"))
    fail(Errc::invalid_argument, "an execution needs a \"prefix\" array");
  std::vector<StateRef> prefix = states_from_json(j.at("prefix"));
  std::vector<StateRef> cycle;
  if (j.contains("cycle")) cycle = states_from_json(j.at("cycle"));
  if (prefix.empty())
    fail(Errc::invalid_argument, "an execution has at least one state");
  if (cycle.empty()) return Execution::finite(std::move(prefix));
  return Execution::lasso(std::move(prefix), std::move(cycle));
}

Json program_to_json(const ExtensionalProgram& p) {
  Json out;
  out["space"] = space_to_json(p.base());
  Json table = Json::array();
  for (const auto& [a, executions] : p.table()) {
    Json row;
    row["from"] = state_to_json(a);
    Json list = Json::array();
    for (const Execution& e : executions) list.push_back(execution_to_json(e));
    row["executions"] = std::move(list);
    table.push_back(std::move(row));
  }
  out["table"] = std::move(table);
  return out;
}

ExtensionalProgram program_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("table"))
    fail(Errc::invalid_argument,
         "an extensional program needs \"space\" and \"table\"");
  StateSpace space = space_from_json(j.at("space"));
  std::map<State, ExecutionSet> table;
  for (const auto& row : j.at("table")) {
    State from = state_from_json(row.at("from"));
    ExecutionSet& set = table[from];
    for (const auto& e : row.at("executions"))
      set.insert(execution_from_json(e));
  }
  return ExtensionalProgram(std::move(space), std::move(table));
}

Json effect_to_json(const EffectRelation& r, const std::set<State>& unknown) {
  Json out;
  out["space"] = space_to_json(r.space());
  Json rows = Json::array();
  for (const auto& [a, bs] : r.graph()) {
    Json row;
    row["from"] = state_to_json(a);
    Json to = Json::array();
    for (const State& b : bs) to.push_back(state_to_json(b));
    row["to"] = std::move(to);
    rows.push_back(std::move(row));
  }
  out["effect"] = std::move(rows);
  Json u = Json::array();
  for (const State& s : unknown) u.push_back(state_to_json(s));
  out["unknown"] = std::move(u);
  return out;
}

std::pair<EffectRelation, std::set<State>> effect_from_json(const Json& j) {
  StateSpace space = space_from_json(j.at("space"));
  std::map<State, std::set<State>> graph;
  for (const auto& row : j.at("effect")) {
    State from = state_from_json(row.at("from"));
    std::set<State>& to = graph[from];
    for (const auto& b : row.at("to")) to.insert(state_from_json(b));
  }
  std::set<State> unknown;
  if (j.contains("unknown"))
    for (const auto& s : j.at("unknown")) unknown.insert(state_from_json(s));
  return {EffectRelation(std::move(space), std::move(graph)),
          std::move(unknown)};
}

Problem problem_from_json(const Json& j, std::uint64_t budget) {
  if (!j.is_object() || !j.contains("space"))
    fail(Errc::invalid_argument, "a problem needs a \"space\"");
  Problem out;
  out.space = space_from_json(j.at("space"));
  if (j.contains("pairs")) {
    for (const auto& pair : j.at("pairs")) {
      if (!pair.is_array() || pair.size() != 2)
        fail(Errc::invalid_argument, "each pair must be [from, to]");
      State a = state_from_json(pair[0]);
      State b = state_from_json(pair[1]);
      if (!is_state_of(a, out.space) || !is_state_of(b, out.space))
        fail(Errc::invalid_state,
             "problem pair mentions a state outside the space");
      out.graph[a].insert(b);
    }
    return out;
  }
  if (j.contains("pre") && j.contains("post")) {
    ExprPtr pre = parse_condition(j.at("pre").get<std::string>(), out.space,
                                  false);
    ExprPtr post = parse_condition(j.at("post").get<std::string>(), out.space,
                                   true);
    // Expand by enumeration; the domain is wherever some pair exists, never
    // the precondition alone.
    std::vector<State> states = enumerate_states(out.space, budget);
    for (const State& a : states) {
      if (!eval_bool(pre, a)) continue;
      for (const State& b : states) {
        std::map<std::string, Value> combined = a.bindings();
        for (const auto& [name, value] : b.bindings())
          combined.emplace(name + "'", value);
        if (eval_bool(post, State(std::move(combined)))) out.graph[a].insert(b);
      }
    }
    return out;
  }
  fail(Errc::invalid_argument,
       "a problem needs either \"pairs\" or \"pre\"/\"post\"");
}

Json step_to_json(const TransformStep& step) {
  Json out;
  if (const auto* r = std::get_if<RenameStep>(&step)) {
    out["op"] = "rename";
    out["base"] = Json::object();
    for (const auto& [from, to] : r->base) out["base"][from] = to;
    out["aux"] = Json::object();
    for (const auto& [from, to] : r->aux) out["aux"][from] = to;
    return out;
  }
  if (const auto* e = std::get_if<ExtendStep>(&step)) {
    out["op"] = "extend";
    out["var"] = e->var;
    out["domain"] = domain_to_json(e->domain);
    return out;
  }
  out["op"] = "restrict";
  out["space"] = space_to_json(std::get<RestrictStep>(step).space);
  return out;
}

TransformStep step_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("op"))
    fail(Errc::invalid_argument, "a transform step needs an \"op\"");
  std::string op = j.at("op").get<std::string>();
  if (op == "rename") {
    RenameStep step;
    if (j.contains("base"))
      for (auto it = j.at("base").begin(); it != j.at("base").end(); ++it)
        step.base.emplace(it.key(), it.value().get<std::string>());
    if (j.contains("aux"))
      for (auto it = j.at("aux").begin(); it != j.at("aux").end(); ++it)
        step.aux.emplace(it.key(), it.value().get<std::string>());
    return step;
  }
  if (op == "extend") {
    return ExtendStep{j.at("var").get<std::string>(),
                      domain_from_json(j.at("domain"))};
  }
  if (op == "restrict") {
    return RestrictStep{space_from_json(j.at("space"))};
  }
  fail(Errc::invalid_argument, "unknown transform op '" + op + "'");
}

std::vector<TransformStep> steps_from_json(const Json& j) {
  // Accepts a bare array, {"steps": [...]}, or a witness object (in which
  // case the left-hand steps apply).
  const Json* steps = &j;
  if (j.is_object() && j.contains("steps")) steps = &j.at("steps");
  else if (j.is_object() && j.contains("left")) steps = &j.at("left");
  if (!steps->is_array())
    fail(Errc::invalid_argument, "expected an array of transform steps");
  std::vector<TransformStep> out;
  for (const auto& s : *steps) out.push_back(step_from_json(s));
  return out;
}

Json witness_to_json(const IdentityWitness& w) {
  Json out;
  out["left"] = Json::array();
  for (const auto& s : w.left) out["left"].push_back(step_to_json(s));
  out["right"] = Json::array();
  for (const auto& s : w.right) out["right"].push_back(step_to_json(s));
  return out;
}

IdentityWitness witness_from_json(const Json& j) {
  IdentityWitness w;
  if (j.contains("left")) w.left = steps_from_json(j.at("left"));
  if (j.contains("right")) w.right = steps_from_json(j.at("right"));
  return w;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string dump_state_text(const State& s) { return state_to_json(s).dump(); }

}  // namespace absprog
