#include "absprog/rewrite.hpp"

#include <functional>

#include "absprog/error.hpp"
#include "absprog/state_space.hpp"

namespace absprog {

namespace {

class FreshNamer {
 public:
  explicit FreshNamer(std::set<std::string> used) : used_(std::move(used)) {}

  std::string make(const std::string& base) {
    std::string name = fresh_name(base, used_);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
};

ExprPtr literal_of(const Value& v, SourcePos pos = {}) {
  switch (v.index()) {
    case 0: return Expr::make_bool(std::get<bool>(v), pos);
    case 1: return Expr::make_int(std::get<std::int64_t>(v), pos);
    default: return Expr::make_enum(std::get<std::string>(v), pos);
  }
}

// ---------------------------------------------------------------------------
// Call-expression hoisting.

struct Hoist {
  std::string temp;
  Domain domain;
  StmtPtr call;
};

class Desugarer {
 public:
  Desugarer(const ProgramAst& ast, FreshNamer& namer)
      : ast_(ast), namer_(namer) {}

  StmtPtr desugar(const StmtPtr& s) {
    switch (s->kind) {
      case Stmt::Kind::Skip:
        return s;
      case Stmt::Kind::Assign: {
        std::vector<Hoist> hoists;
        std::vector<ExprPtr> values;
        for (const auto& v : s->values) values.push_back(strip(v, hoists));
        return wrap(Stmt::make_assign(s->targets, s->target_domains,
                                      std::move(values), s->pos),
                    hoists);
      }
      case Stmt::Kind::Seq: {
        std::vector<StmtPtr> steps;
        for (const auto& c : s->children) steps.push_back(desugar(c));
        return seq_flat(std::move(steps));
      }
      case Stmt::Kind::If: {
        std::vector<Hoist> hoists;
        std::vector<GuardedArm> arms;
        for (const auto& arm : s->arms)
          arms.push_back({strip(arm.guard, hoists), desugar(arm.body)});
        return wrap(Stmt::make_if(std::move(arms), s->pos), hoists);
      }
      case Stmt::Kind::While: {
        std::vector<Hoist> hoists;
        ExprPtr guard = strip(s->guard, hoists);
        StmtPtr body = desugar(s->body);
        if (hoists.empty())
          return Stmt::make_while(std::move(guard), std::move(body), s->pos);
        // The guard is re-evaluated each pass, so the hoisted calls run once
        // before the loop and again after every body pass.
        std::vector<StmtPtr> recalls;
        for (const auto& h : hoists) recalls.push_back(h.call);
        std::vector<StmtPtr> loop_body;
        loop_body.push_back(std::move(body));
        for (const auto& r : recalls) loop_body.push_back(r);
        std::vector<StmtPtr> core;
        for (const auto& r : recalls) core.push_back(r);
        core.push_back(Stmt::make_while(std::move(guard),
                                        seq_flat(std::move(loop_body)),
                                        s->pos));
        StmtPtr result = seq_flat(std::move(core));
        for (auto it = hoists.rbegin(); it != hoists.rend(); ++it)
          result = Stmt::make_var_block(it->temp, it->domain,
                                        literal_of(it->domain.first_value()),
                                        std::move(result), s->pos);
        return result;
      }
      case Stmt::Kind::Choose: {
        std::vector<StmtPtr> branches;
        for (const auto& c : s->children) branches.push_back(desugar(c));
        return Stmt::make_choose(std::move(branches), s->pos);
      }
      case Stmt::Kind::VarBlock: {
        std::vector<Hoist> hoists;
        ExprPtr init = strip(s->init, hoists);
        return wrap(Stmt::make_var_block(s->var, *s->var_domain,
                                         std::move(init), desugar(s->body),
                                         s->pos),
                    hoists);
      }
      case Stmt::Kind::Call: {
        std::vector<Hoist> hoists;
        std::vector<ExprPtr> ins;
        for (const auto& e : s->ins) ins.push_back(strip(e, hoists));
        return wrap(Stmt::make_call(s->outs, s->out_domains, s->callee,
                                    std::move(ins), s->pos),
                    hoists);
      }
    }
    return s;
  }

 private:
  ExprPtr strip(const ExprPtr& e, std::vector<Hoist>& hoists) {
    switch (e->kind) {
      case Expr::Kind::BoolLit:
      case Expr::Kind::IntLit:
      case Expr::Kind::EnumLit:
      case Expr::Kind::Var:
        return e;
      case Expr::Kind::Unary:
        return Expr::make_unary(e->un, strip(e->args[0], hoists), e->pos);
      case Expr::Kind::Binary: {
        // Hoists must appear left to right; sequence the recursion.
        ExprPtr lhs = strip(e->args[0], hoists);
        ExprPtr rhs = strip(e->args[1], hoists);
        return Expr::make_binary(e->bin, std::move(lhs), std::move(rhs),
                                 e->pos);
      }
      case Expr::Kind::Call: {
        std::vector<ExprPtr> args;
        for (const auto& a : e->args) args.push_back(strip(a, hoists));
        const Subprogram* sub = ast_.find_sub(e->name);
        if (!sub)
          fail(Errc::invalid_state,
               "call of unknown subprogram '" + e->name + "'");
        if (sub->outs.size() != 1)
          fail(Errc::multi_output_callee,
               "subprogram '" + e->name +
                   "' has more than one output; it cannot be used as an "
                   "expression");
        const Domain& domain = sub->outs.front().domain;
        std::string temp = namer_.make("t");
        StmtPtr call = Stmt::make_call({temp}, {domain}, e->name,
                                       std::move(args), e->pos);
        hoists.push_back(Hoist{temp, domain, std::move(call)});
        return Expr::make_var(temp, e->pos);
      }
    }
    return e;
  }

  static StmtPtr wrap(StmtPtr inner, const std::vector<Hoist>& hoists) {
    StmtPtr result = std::move(inner);
    for (auto it = hoists.rbegin(); it != hoists.rend(); ++it) {
      result = Stmt::make_var_block(
          it->temp, it->domain, literal_of(it->domain.first_value()),
          seq_flat({it->call, std::move(result)}), result->pos);
    }
    return result;
  }

  const ProgramAst& ast_;
  FreshNamer& namer_;
};

// ---------------------------------------------------------------------------
// Variable renaming over call-free statement trees, used by inlining.

ExprPtr rename_expr(const ExprPtr& e, const RenamingMap& renames) {
  if (!e) return e;
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = renames.find(e->name);
      if (it == renames.end()) return e;
      return Expr::make_var(it->second, e->pos);
    }
    case Expr::Kind::Unary:
      return Expr::make_unary(e->un, rename_expr(e->args[0], renames), e->pos);
    case Expr::Kind::Binary:
      return Expr::make_binary(e->bin, rename_expr(e->args[0], renames),
                               rename_expr(e->args[1], renames), e->pos);
    case Expr::Kind::Call: {
      std::vector<ExprPtr> args;
      for (const auto& a : e->args) args.push_back(rename_expr(a, renames));
      return Expr::make_call(e->name, std::move(args), e->pos);
    }
    default:
      return e;
  }
}

StmtPtr rename_stmt(const StmtPtr& s, const RenamingMap& renames) {
  auto renamed = [&](const std::string& name) {
    auto it = renames.find(name);
    return it == renames.end() ? name : it->second;
  };
  switch (s->kind) {
    case Stmt::Kind::Skip:
      return s;
    case Stmt::Kind::Assign: {
      std::vector<std::string> targets;
      for (const auto& t : s->targets) targets.push_back(renamed(t));
      std::vector<ExprPtr> values;
      for (const auto& v : s->values) values.push_back(rename_expr(v, renames));
      return Stmt::make_assign(std::move(targets), s->target_domains,
                               std::move(values), s->pos);
    }
    case Stmt::Kind::Seq: {
      std::vector<StmtPtr> steps;
      for (const auto& c : s->children) steps.push_back(rename_stmt(c, renames));
      return Stmt::make_seq(std::move(steps), s->pos);
    }
    case Stmt::Kind::If: {
      std::vector<GuardedArm> arms;
      for (const auto& arm : s->arms)
        arms.push_back(
            {rename_expr(arm.guard, renames), rename_stmt(arm.body, renames)});
      return Stmt::make_if(std::move(arms), s->pos);
    }
    case Stmt::Kind::While:
      return Stmt::make_while(rename_expr(s->guard, renames),
                              rename_stmt(s->body, renames), s->pos);
    case Stmt::Kind::Choose: {
      std::vector<StmtPtr> branches;
      for (const auto& c : s->children)
        branches.push_back(rename_stmt(c, renames));
      return Stmt::make_choose(std::move(branches), s->pos);
    }
    case Stmt::Kind::VarBlock:
      return Stmt::make_var_block(renamed(s->var), *s->var_domain,
                                  rename_expr(s->init, renames),
                                  rename_stmt(s->body, renames), s->pos);
    case Stmt::Kind::Call: {
      std::vector<std::string> outs;
      for (const auto& o : s->outs) outs.push_back(renamed(o));
      std::vector<ExprPtr> ins;
      for (const auto& e : s->ins) ins.push_back(rename_expr(e, renames));
      return Stmt::make_call(std::move(outs), s->out_domains, s->callee,
                             std::move(ins), s->pos);
    }
  }
  return s;
}

void collect_block_names(const StmtPtr& s, std::set<std::string>& out) {
  if (!s) return;
  if (s->kind == Stmt::Kind::VarBlock) out.insert(s->var);
  for (const auto& c : s->children) collect_block_names(c, out);
  for (const auto& arm : s->arms) collect_block_names(arm.body, out);
  collect_block_names(s->body, out);
}

// ---------------------------------------------------------------------------
// Inlining.

class Inliner {
 public:
  Inliner(const ProgramAst& ast, FreshNamer& namer)
      : ast_(ast), namer_(namer) {}

  StmtPtr inline_stmt(const StmtPtr& s) {
    switch (s->kind) {
      case Stmt::Kind::Skip:
      case Stmt::Kind::Assign:
        return s;
      case Stmt::Kind::Seq: {
        std::vector<StmtPtr> steps;
        for (const auto& c : s->children) steps.push_back(inline_stmt(c));
        return seq_flat(std::move(steps));
      }
      case Stmt::Kind::If: {
        std::vector<GuardedArm> arms;
        for (const auto& arm : s->arms)
          arms.push_back({arm.guard, inline_stmt(arm.body)});
        return Stmt::make_if(std::move(arms), s->pos);
      }
      case Stmt::Kind::While:
        return Stmt::make_while(s->guard, inline_stmt(s->body), s->pos);
      case Stmt::Kind::Choose: {
        std::vector<StmtPtr> branches;
        for (const auto& c : s->children) branches.push_back(inline_stmt(c));
        return Stmt::make_choose(std::move(branches), s->pos);
      }
      case Stmt::Kind::VarBlock:
        return Stmt::make_var_block(s->var, *s->var_domain, s->init,
                                    inline_stmt(s->body), s->pos);
      case Stmt::Kind::Call:
        return expand_call(s);
    }
    return s;
  }

 private:
  const StmtPtr& inlined_body(const std::string& name) {
    auto it = bodies_.find(name);
    if (it != bodies_.end()) return it->second;
    const Subprogram* sub = ast_.find_sub(name);
    if (!sub)
      fail(Errc::invalid_state, "call of unknown subprogram '" + name + "'");
    bodies_.emplace(name, inline_stmt(sub->body));
    return bodies_.at(name);
  }

  StmtPtr expand_call(const StmtPtr& s) {
    const Subprogram* sub = ast_.find_sub(s->callee);
    const StmtPtr& body = inlined_body(s->callee);

    // Fresh names for the formals and for every block-local of the body
    // copy, so nested expansions never shadow each other.
    RenamingMap renames;
    std::set<std::string> locals;
    for (const auto& d : sub->outs) locals.insert(d.name);
    for (const auto& d : sub->ins) locals.insert(d.name);
    collect_block_names(body, locals);
    for (const auto& name : locals) renames.emplace(name, namer_.make(name));
    StmtPtr body_copy = rename_stmt(body, renames);

    // Entry values of output formals are arbitrary; mirror the branching of
    // the call semantics with an explicit choice per output.
    std::vector<StmtPtr> core;
    for (const auto& d : sub->outs) {
      if (d.domain.size() <= 1) continue;
      std::vector<StmtPtr> picks;
      for (std::uint64_t i = 0; i < d.domain.size(); ++i)
        picks.push_back(Stmt::make_assign({renames.at(d.name)}, {d.domain},
                                          {literal_of(d.domain.value_at(i))},
                                          s->pos));
      core.push_back(Stmt::make_choose(std::move(picks), s->pos));
    }
    core.push_back(std::move(body_copy));

    // Copy-out is one simultaneous assignment, like the call's return step.
    std::vector<ExprPtr> results;
    for (const auto& d : sub->outs)
      results.push_back(Expr::make_var(renames.at(d.name), s->pos));
    core.push_back(Stmt::make_assign(s->outs, s->out_domains,
                                     std::move(results), s->pos));

    StmtPtr result = seq_flat(std::move(core));
    for (auto it = sub->outs.rbegin(); it != sub->outs.rend(); ++it)
      result = Stmt::make_var_block(renames.at(it->name), it->domain,
                                    literal_of(it->domain.first_value()),
                                    std::move(result), s->pos);
    for (std::size_t i = sub->ins.size(); i-- > 0;)
      result = Stmt::make_var_block(renames.at(sub->ins[i].name),
                                    sub->ins[i].domain, s->ins[i],
                                    std::move(result), s->pos);
    return result;
  }

  const ProgramAst& ast_;
  FreshNamer& namer_;
  std::map<std::string, StmtPtr> bodies_;
};

void check_acyclic(const ProgramAst& ast) {
  std::map<std::string, std::set<std::string>> calls;
  std::function<void(const StmtPtr&, std::set<std::string>&)> scan =
      [&](const StmtPtr& s, std::set<std::string>& out) {
        if (!s) return;
        if (s->kind == Stmt::Kind::Call) out.insert(s->callee);
        for (const auto& c : s->children) scan(c, out);
        for (const auto& arm : s->arms) scan(arm.body, out);
        scan(s->body, out);
      };
  for (const auto& sub : ast.subs) scan(sub.body, calls[sub.name]);

  std::set<std::string> done, in_progress;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    if (done.count(name)) return;
    if (!in_progress.insert(name).second)
      fail(Errc::recursive_call_graph,
           "subprogram '" + name + "' is part of a call cycle");
    for (const auto& callee : calls[name]) visit(callee);
    in_progress.erase(name);
    done.insert(name);
  };
  for (const auto& sub : ast.subs) visit(sub.name);
}

}  // namespace

StmtPtr seq_flat(std::vector<StmtPtr> items) {
  std::vector<StmtPtr> flat;
  for (auto& item : items) {
    if (item->kind == Stmt::Kind::Seq) {
      for (const auto& c : item->children) flat.push_back(c);
    } else {
      flat.push_back(std::move(item));
    }
  }
  if (flat.size() == 1) return flat.front();
  SourcePos pos = flat.empty() ? SourcePos{} : flat.front()->pos;
  return Stmt::make_seq(std::move(flat), pos);
}

ProgramAst desugar_call_expressions(const ProgramAst& ast) {
  if (!contains_call_expressions(ast)) return ast;
  FreshNamer namer(collect_names(ast));
  ProgramAst out;
  out.space = ast.space;
  Desugarer desugarer(ast, namer);
  for (const auto& sub : ast.subs) {
    Subprogram copy = sub;
    copy.body = desugarer.desugar(sub.body);
    out.subs.push_back(std::move(copy));
  }
  out.body = desugarer.desugar(ast.body);
  return out;
}

ProgramAst inline_calls(const ProgramAst& ast) {
  check_acyclic(ast);
  ProgramAst desugared = desugar_call_expressions(ast);
  ProgramAst out;
  out.space = desugared.space;
  if (!contains_call_statements(desugared)) {
    out.body = desugared.body;
    return out;
  }
  FreshNamer namer(collect_names(desugared));
  Inliner inliner(desugared, namer);
  out.body = inliner.inline_stmt(desugared.body);
  return out;
}

}  // namespace absprog
