#include "absprog/interp.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <tuple>

#include "absprog/error.hpp"
#include "absprog/rewrite.hpp"

namespace absprog {

namespace {

// Raised when an expression cannot be evaluated (division by zero, overflow).
// The step function turns it into divergence.
struct EvalFailure {};

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw EvalFailure{};
  return static_cast<std::int64_t>(v);
}

const std::string& resolve_name(const Env& env, const std::string& name) {
  auto it = env.names.find(name);
  if (it == env.names.end())
    fail(Errc::invalid_state, "unresolved variable '" + name + "'");
  return it->second;
}

Value eval_expr(const Expr* e, const ExtendedState& store, const Env& env) {
  switch (e->kind) {
    case Expr::Kind::BoolLit:
    case Expr::Kind::IntLit:
    case Expr::Kind::EnumLit:
      return e->literal;
    case Expr::Kind::Var:
      return store.at(resolve_name(env, e->name));
    case Expr::Kind::Unary: {
      Value v = eval_expr(e->args[0].get(), store, env);
      if (e->un == UnOp::Neg) {
        if (!std::holds_alternative<std::int64_t>(v)) throw EvalFailure{};
        return Value(checked(-static_cast<__int128>(std::get<std::int64_t>(v))));
      }
      if (!std::holds_alternative<bool>(v)) throw EvalFailure{};
      return Value(!std::get<bool>(v));
    }
    case Expr::Kind::Binary: {
      if (e->bin == BinOp::And || e->bin == BinOp::Or) {
        Value lhs = eval_expr(e->args[0].get(), store, env);
        if (!std::holds_alternative<bool>(lhs)) throw EvalFailure{};
        Value rhs = eval_expr(e->args[1].get(), store, env);
        if (!std::holds_alternative<bool>(rhs)) throw EvalFailure{};
        bool l = std::get<bool>(lhs), r = std::get<bool>(rhs);
        return Value(e->bin == BinOp::And ? (l && r) : (l || r));
      }
      Value lhs = eval_expr(e->args[0].get(), store, env);
      Value rhs = eval_expr(e->args[1].get(), store, env);
      if (e->bin == BinOp::Eq) return Value(lhs == rhs);
      if (e->bin == BinOp::Ne) return Value(lhs != rhs);
      if (!std::holds_alternative<std::int64_t>(lhs) ||
          !std::holds_alternative<std::int64_t>(rhs))
        throw EvalFailure{};
      __int128 l = std::get<std::int64_t>(lhs);
      __int128 r = std::get<std::int64_t>(rhs);
      switch (e->bin) {
        case BinOp::Add: return Value(checked(l + r));
        case BinOp::Sub: return Value(checked(l - r));
        case BinOp::Mul: return Value(checked(l * r));
        case BinOp::Div:
          if (r == 0) throw EvalFailure{};
          return Value(checked(l / r));
        case BinOp::Mod:
          if (r == 0) throw EvalFailure{};
          return Value(checked(l % r));
        case BinOp::Lt: return Value(l < r);
        case BinOp::Le: return Value(l <= r);
        case BinOp::Gt: return Value(l > r);
        case BinOp::Ge: return Value(l >= r);
        default: break;
      }
      fail(Errc::invalid_state, "unexpected operator in evaluation");
    }
    case Expr::Kind::Call:
      fail(Errc::invalid_state,
           "call expression reached the stepper; desugar first");
  }
  fail(Errc::invalid_state, "unexpected expression kind");
}

Config diverged(const Config& c) {
  Config out;
  out.control = {Task::diverge()};
  out.store = c.store;
  out.depth = c.depth;
  return out;
}

std::set<std::string> store_names(const ExtendedState& store) {
  std::set<std::string> out;
  for (const auto& [name, value] : store.bindings()) {
    (void)value;
    out.insert(name);
  }
  return out;
}

void push_run(Config& c, const Stmt* stmt, const EnvRef& env) {
  c.control.push_back(Task::run(stmt, env));
}

}  // namespace

Task Task::run(const Stmt* stmt, EnvRef env) {
  Task t;
  t.kind = Kind::Run;
  t.stmt = stmt;
  t.env = std::move(env);
  return t;
}

Task Task::pop_var(std::string store_name) {
  Task t;
  t.kind = Kind::PopVar;
  t.name = std::move(store_name);
  return t;
}

Task Task::diverge() {
  Task t;
  t.kind = Kind::Diverge;
  return t;
}

bool Task::operator==(const Task& other) const {
  if (kind != other.kind || stmt != other.stmt || name != other.name ||
      copy_outs != other.copy_outs || destroy != other.destroy ||
      callee != other.callee)
    return false;
  if (env == other.env) return true;
  if (!env || !other.env) return false;
  return *env == *other.env;
}

bool Task::operator<(const Task& other) const {
  if (kind != other.kind) return kind < other.kind;
  if (stmt != other.stmt) return std::less<const Stmt*>()(stmt, other.stmt);
  if (name != other.name) return name < other.name;
  if (copy_outs != other.copy_outs) return copy_outs < other.copy_outs;
  if (destroy != other.destroy) return destroy < other.destroy;
  if (callee != other.callee) return callee < other.callee;
  if (env == other.env) return false;
  if (!env) return other.env != nullptr;
  if (!other.env) return false;
  return *env < *other.env;
}

bool Config::operator==(const Config& other) const {
  return depth == other.depth && store == other.store &&
         control == other.control;
}

bool Config::operator<(const Config& other) const {
  if (depth != other.depth) return depth < other.depth;
  if (store != other.store) return store < other.store;
  return control < other.control;
}

bool is_diverge_config(const Config& c) {
  return c.control.size() == 1 && c.control.back().kind == Task::Kind::Diverge;
}

Config initial_config(const ProgramAst& ast, const State& start) {
  if (!is_state_of(start, ast.space))
    fail(Errc::unknown_state,
         "initial state is not a point of the declared space");
  auto env = std::make_shared<Env>();
  for (const auto& [name, domain] : ast.space.components()) {
    (void)domain;
    env->names.emplace(name, name);
  }
  Config c;
  c.store = start;
  push_run(c, ast.body.get(), env);
  return c;
}

std::vector<Config> step(const Config& c, const StepContext& ctx) {
  if (c.terminal())
    fail(Errc::invalid_state, "cannot step a terminal configuration");
  Task task = c.control.back();
  Config rest = c;
  rest.control.pop_back();

  switch (task.kind) {
    case Task::Kind::Diverge:
      return {c};  // self-loop

    case Task::Kind::PopVar: {
      rest.store = rest.store.without(task.name);
      return {std::move(rest)};
    }

    case Task::Kind::EndCall: {
      ExtendedState store = rest.store;
      for (const CopyOut& co : task.copy_outs) {
        const Value& v = rest.store.at(co.formal);
        if (!co.domain.contains(v)) return {diverged(c)};
        store = store.with(co.host, v);
      }
      for (const auto& formal : task.destroy) store = store.without(formal);
      rest.store = std::move(store);
      rest.depth -= 1;
      return {std::move(rest)};
    }

    case Task::Kind::Run:
      break;
  }

  const Stmt* s = task.stmt;
  const EnvRef& env = task.env;
  switch (s->kind) {
    case Stmt::Kind::Skip:
      return {std::move(rest)};

    case Stmt::Kind::Assign: {
      std::vector<Value> values;
      values.reserve(s->values.size());
      try {
        for (const auto& e : s->values)
          values.push_back(eval_expr(e.get(), c.store, *env));
      } catch (const EvalFailure&) {
        return {diverged(c)};
      }
      for (std::size_t i = 0; i < values.size(); ++i)
        if (!s->target_domains[i].contains(values[i])) return {diverged(c)};
      ExtendedState store = std::move(rest.store);
      for (std::size_t i = 0; i < values.size(); ++i)
        store = store.with(resolve_name(*env, s->targets[i]),
                           std::move(values[i]));
      rest.store = std::move(store);
      return {std::move(rest)};
    }

    case Stmt::Kind::Seq: {
      for (auto it = s->children.rbegin(); it != s->children.rend(); ++it)
        push_run(rest, it->get(), env);
      return {std::move(rest)};
    }

    case Stmt::Kind::If: {
      std::vector<Config> out;
      try {
        for (const auto& arm : s->arms) {
          Value guard = eval_expr(arm.guard.get(), c.store, *env);
          if (!std::holds_alternative<bool>(guard)) throw EvalFailure{};
          if (!std::get<bool>(guard)) continue;
          Config succ = rest;
          push_run(succ, arm.body.get(), env);
          out.push_back(std::move(succ));
        }
      } catch (const EvalFailure&) {
        return {diverged(c)};
      }
      if (out.empty()) return {diverged(c)};
      return out;
    }

    case Stmt::Kind::While: {
      bool enter;
      try {
        Value guard = eval_expr(s->guard.get(), c.store, *env);
        if (!std::holds_alternative<bool>(guard)) throw EvalFailure{};
        enter = std::get<bool>(guard);
      } catch (const EvalFailure&) {
        return {diverged(c)};
      }
      if (enter) {
        push_run(rest, s, env);
        push_run(rest, s->body.get(), env);
      }
      return {std::move(rest)};
    }

    case Stmt::Kind::Choose: {
      std::vector<Config> out;
      out.reserve(s->children.size());
      for (const auto& branch : s->children) {
        Config succ = rest;
        push_run(succ, branch.get(), env);
        out.push_back(std::move(succ));
      }
      return out;
    }

    case Stmt::Kind::VarBlock: {
      Value init;
      try {
        init = eval_expr(s->init.get(), c.store, *env);
      } catch (const EvalFailure&) {
        return {diverged(c)};
      }
      if (!s->var_domain->contains(init)) return {diverged(c)};
      std::string store_name = fresh_name(s->var, store_names(c.store));
      auto inner = std::make_shared<Env>(*env);
      inner->names[s->var] = store_name;
      rest.control.push_back(Task::pop_var(store_name));
      push_run(rest, s->body.get(), std::move(inner));
      rest.store = rest.store.with(store_name, std::move(init));
      return {std::move(rest)};
    }

    case Stmt::Kind::Call: {
      const Subprogram* sub = ctx.ast->find_sub(s->callee);
      if (!sub)
        fail(Errc::invalid_state, "call of unknown subprogram '" + s->callee +
                                      "' reached the stepper");
      std::vector<Value> args;
      args.reserve(s->ins.size());
      try {
        for (const auto& e : s->ins)
          args.push_back(eval_expr(e.get(), c.store, *env));
      } catch (const EvalFailure&) {
        return {diverged(c)};
      }
      // Copy-in respects the formals' domains like any other write.
      for (std::size_t i = 0; i < args.size(); ++i)
        if (!sub->ins[i].domain.contains(args[i])) return {diverged(c)};

      std::set<std::string> used = store_names(c.store);
      std::vector<std::string> out_names, in_names;
      for (const auto& d : sub->outs) {
        std::string n = fresh_name(d.name, used);
        used.insert(n);
        out_names.push_back(std::move(n));
      }
      for (const auto& d : sub->ins) {
        std::string n = fresh_name(d.name, used);
        used.insert(n);
        in_names.push_back(std::move(n));
      }

      // The callee sees the host base variables (harmless when scope
      // checking already forbade referencing them) with formals on top.
      auto callee_env = std::make_shared<Env>();
      for (const auto& [name, domain] : ctx.ast->space.components()) {
        (void)domain;
        callee_env->names.emplace(name, name);
      }
      for (std::size_t i = 0; i < sub->outs.size(); ++i)
        callee_env->names[sub->outs[i].name] = out_names[i];
      for (std::size_t i = 0; i < sub->ins.size(); ++i)
        callee_env->names[sub->ins[i].name] = in_names[i];

      Task end_call;
      end_call.kind = Task::Kind::EndCall;
      end_call.callee = s->callee;
      for (std::size_t i = 0; i < s->outs.size(); ++i)
        end_call.copy_outs.push_back(CopyOut{resolve_name(*env, s->outs[i]),
                                             s->out_domains[i], out_names[i]});
      end_call.destroy = out_names;
      end_call.destroy.insert(end_call.destroy.end(), in_names.begin(),
                              in_names.end());

      // Output formals have no defined entry value: branch over the whole
      // carrier of each, in declaration order, values in domain order.
      std::vector<Config> out;
      std::vector<std::uint64_t> odometer(sub->outs.size(), 0);
      for (;;) {
        ExtendedState store = rest.store;
        for (std::size_t i = 0; i < out_names.size(); ++i)
          store = store.with(out_names[i],
                             sub->outs[i].domain.value_at(odometer[i]));
        for (std::size_t i = 0; i < in_names.size(); ++i)
          store = store.with(in_names[i], args[i]);
        Config succ = rest;
        succ.control.push_back(end_call);
        push_run(succ, sub->body.get(), callee_env);
        succ.store = std::move(store);
        succ.depth = rest.depth + 1;
        out.push_back(std::move(succ));

        std::size_t i = odometer.size();
        bool advanced = false;
        while (i > 0) {
          --i;
          if (++odometer[i] < sub->outs[i].domain.size()) {
            advanced = true;
            break;
          }
          odometer[i] = 0;
        }
        if (!advanced) break;
      }
      return out;
    }
  }
  fail(Errc::invalid_state, "unexpected statement kind");
}

namespace {

bool is_action_edge(const Config& from) {
  const Task& t = from.control.back();
  switch (t.kind) {
    case Task::Kind::PopVar:
    case Task::Kind::EndCall:
      return true;
    case Task::Kind::Diverge:
      return false;
    case Task::Kind::Run:
      return t.stmt->kind == Stmt::Kind::Assign ||
             t.stmt->kind == Stmt::Kind::VarBlock ||
             t.stmt->kind == Stmt::Kind::Call;
  }
  return false;
}

bool about_to_call(const Config& c) {
  if (c.terminal()) return false;
  const Task& t = c.control.back();
  return t.kind == Task::Kind::Run && t.stmt->kind == Stmt::Kind::Call;
}

struct ConfigPtrLess {
  bool operator()(const Config* a, const Config* b) const { return *a < *b; }
};

RunAllResult run_all_resolved(const ProgramAst& ast, const State& start,
                              const RunBudget& budget) {
  RunAllResult result;
  StepContext ctx{&ast};

  std::vector<StateRef> trace;
  trace.push_back(make_state(start));

  struct Frame {
    Config config;
    std::vector<Config> succs;
    std::size_t next = 0;
    bool pushed_trace = false;
  };
  // A deque keeps frame addresses stable, so the on-path index can point at
  // the configurations instead of copying them. The index maps each on-path
  // configuration to the trace length at its entry; a revisit closes a lasso
  // there.
  std::deque<Frame> frames;
  std::map<const Config*, std::size_t, ConfigPtrLess> on_path;

  frames.push_back(Frame{initial_config(ast, start), {}, 0, false});
  frames.back().succs = step(frames.back().config, ctx);
  on_path.emplace(&frames.back().config, trace.size());

  while (!frames.empty()) {
    Frame& frame = frames.back();
    if (frame.next == frame.succs.size()) {
      on_path.erase(&frame.config);
      bool pop = frame.pushed_trace;
      frames.pop_back();
      if (pop) trace.pop_back();
      continue;
    }
    Config succ = std::move(frame.succs[frame.next++]);
    bool record = is_action_edge(frame.config) && !is_diverge_config(succ);
    if (record) trace.push_back(make_state(succ.store));
    auto drop = [&]() {
      if (record) trace.pop_back();
    };

    if (succ.terminal()) {
      result.executions.insert(Execution::finite(trace));
      drop();
      continue;
    }
    auto seen = on_path.find(&succ);
    if (seen != on_path.end()) {
      std::size_t cut = seen->second;
      std::vector<StateRef> prefix(trace.begin(), trace.begin() + cut);
      std::vector<StateRef> cycle(trace.begin() + cut, trace.end());
      if (cycle.empty()) cycle.push_back(trace.back());
      result.executions.insert(
          Execution::lasso(std::move(prefix), std::move(cycle)));
      drop();
      continue;
    }
    if (frames.size() >= budget.max_steps ||
        (about_to_call(succ) && succ.depth >= budget.max_depth)) {
      result.exceeded.insert(Execution::finite(trace));
      drop();
      continue;
    }
    frames.push_back(Frame{std::move(succ), {}, 0, record});
    frames.back().succs = step(frames.back().config, ctx);
    on_path.emplace(&frames.back().config, trace.size());
  }
  return result;
}

}  // namespace

RunAllResult run_all(const ProgramAst& ast, const State& start,
                     const RunBudget& budget) {
  if (contains_call_expressions(ast)) {
    ProgramAst desugared = desugar_call_expressions(ast);
    return run_all_resolved(desugared, start, budget);
  }
  return run_all_resolved(ast, start, budget);
}

ExtensionalResult to_extensional(const ProgramAst& ast, const RunBudget& budget,
                                 std::uint64_t enumeration_budget) {
  const ProgramAst* program = &ast;
  ProgramAst desugared;
  if (contains_call_expressions(ast)) {
    desugared = desugar_call_expressions(ast);
    program = &desugared;
  }
  std::map<State, ExecutionSet> table;
  std::set<State> partial;
  for (const State& a : enumerate_states(ast.space, enumeration_budget)) {
    RunAllResult r = run_all_resolved(*program, a, budget);
    if (!r.complete()) partial.insert(a);
    table.emplace(a, std::move(r.executions));
  }
  return ExtensionalResult{
      ExtensionalProgram(ast.space, std::move(table)), std::move(partial)};
}

}  // namespace absprog
