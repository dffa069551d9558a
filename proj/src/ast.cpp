#include "absprog/ast.hpp"

namespace absprog {

const char* binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "div";
    case BinOp::Mod: return "mod";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "/=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

ExprPtr Expr::make_bool(bool v, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::BoolLit;
  e->pos = pos;
  e->literal = Value(v);
  return e;
}

ExprPtr Expr::make_int(std::int64_t v, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::IntLit;
  e->pos = pos;
  e->literal = Value(v);
  return e;
}

ExprPtr Expr::make_enum(std::string label, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::EnumLit;
  e->pos = pos;
  e->literal = Value(std::move(label));
  return e;
}

ExprPtr Expr::make_var(std::string name, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->pos = pos;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::make_unary(UnOp op, ExprPtr operand, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Unary;
  e->pos = pos;
  e->un = op;
  e->args = {std::move(operand)};
  return e;
}

ExprPtr Expr::make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Binary;
  e->pos = pos;
  e->bin = op;
  e->args = {std::move(lhs), std::move(rhs)};
  return e;
}

ExprPtr Expr::make_call(std::string callee, std::vector<ExprPtr> args,
                        SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->pos = pos;
  e->name = std::move(callee);
  e->args = std::move(args);
  return e;
}

StmtPtr Stmt::make_skip(SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Skip;
  s->pos = pos;
  return s;
}

StmtPtr Stmt::make_assign(std::vector<std::string> targets,
                          std::vector<Domain> target_domains,
                          std::vector<ExprPtr> values, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Assign;
  s->pos = pos;
  s->targets = std::move(targets);
  s->target_domains = std::move(target_domains);
  s->values = std::move(values);
  return s;
}

StmtPtr Stmt::make_seq(std::vector<StmtPtr> steps, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Seq;
  s->pos = pos;
  s->children = std::move(steps);
  return s;
}

StmtPtr Stmt::make_if(std::vector<GuardedArm> arms, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::If;
  s->pos = pos;
  s->arms = std::move(arms);
  return s;
}

StmtPtr Stmt::make_while(ExprPtr guard, StmtPtr body, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::While;
  s->pos = pos;
  s->guard = std::move(guard);
  s->body = std::move(body);
  return s;
}

StmtPtr Stmt::make_choose(std::vector<StmtPtr> branches, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Choose;
  s->pos = pos;
  s->children = std::move(branches);
  return s;
}

StmtPtr Stmt::make_var_block(std::string var, Domain domain, ExprPtr init,
                             StmtPtr body, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::VarBlock;
  s->pos = pos;
  s->var = std::move(var);
  s->var_domain = std::move(domain);
  s->init = std::move(init);
  s->body = std::move(body);
  return s;
}

StmtPtr Stmt::make_call(std::vector<std::string> outs,
                        std::vector<Domain> out_domains, std::string callee,
                        std::vector<ExprPtr> ins, SourcePos pos) {
  auto s = std::make_shared<Stmt>();
  s->kind = Kind::Call;
  s->pos = pos;
  s->outs = std::move(outs);
  s->out_domains = std::move(out_domains);
  s->callee = std::move(callee);
  s->ins = std::move(ins);
  return s;
}

const Subprogram* ProgramAst::find_sub(const std::string& name) const {
  for (const auto& sub : subs)
    if (sub.name == name) return &sub;
  return nullptr;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::BoolLit:
    case Expr::Kind::IntLit:
    case Expr::Kind::EnumLit:
      return a->literal == b->literal;
    case Expr::Kind::Var:
      return a->name == b->name;
    case Expr::Kind::Unary:
      if (a->un != b->un) return false;
      break;
    case Expr::Kind::Binary:
      if (a->bin != b->bin) return false;
      break;
    case Expr::Kind::Call:
      if (a->name != b->name) return false;
      break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool structurally_equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Stmt::Kind::Skip:
      return true;
    case Stmt::Kind::Assign: {
      if (a->targets != b->targets || a->target_domains != b->target_domains)
        return false;
      if (a->values.size() != b->values.size()) return false;
      for (std::size_t i = 0; i < a->values.size(); ++i)
        if (!structurally_equal(a->values[i], b->values[i])) return false;
      return true;
    }
    case Stmt::Kind::Seq:
    case Stmt::Kind::Choose: {
      if (a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
      return true;
    }
    case Stmt::Kind::If: {
      if (a->arms.size() != b->arms.size()) return false;
      for (std::size_t i = 0; i < a->arms.size(); ++i) {
        if (!structurally_equal(a->arms[i].guard, b->arms[i].guard) ||
            !structurally_equal(a->arms[i].body, b->arms[i].body))
          return false;
      }
      return true;
    }
    case Stmt::Kind::While:
      return structurally_equal(a->guard, b->guard) &&
             structurally_equal(a->body, b->body);
    case Stmt::Kind::VarBlock:
      return a->var == b->var && a->var_domain == b->var_domain &&
             structurally_equal(a->init, b->init) &&
             structurally_equal(a->body, b->body);
    case Stmt::Kind::Call: {
      if (a->outs != b->outs || a->out_domains != b->out_domains ||
          a->callee != b->callee)
        return false;
      if (a->ins.size() != b->ins.size()) return false;
      for (std::size_t i = 0; i < a->ins.size(); ++i)
        if (!structurally_equal(a->ins[i], b->ins[i])) return false;
      return true;
    }
  }
  return false;
}

bool structurally_equal(const ProgramAst& a, const ProgramAst& b) {
  if (a.space != b.space || a.subs.size() != b.subs.size()) return false;
  for (std::size_t i = 0; i < a.subs.size(); ++i) {
    const Subprogram& sa = a.subs[i];
    const Subprogram& sb = b.subs[i];
    if (sa.name != sb.name || sa.outs.size() != sb.outs.size() ||
        sa.ins.size() != sb.ins.size())
      return false;
    for (std::size_t j = 0; j < sa.outs.size(); ++j)
      if (sa.outs[j].name != sb.outs[j].name ||
          sa.outs[j].domain != sb.outs[j].domain)
        return false;
    for (std::size_t j = 0; j < sa.ins.size(); ++j)
      if (sa.ins[j].name != sb.ins[j].name ||
          sa.ins[j].domain != sb.ins[j].domain)
        return false;
    if (!structurally_equal(sa.body, sb.body)) return false;
  }
  return structurally_equal(a.body, b.body);
}

namespace {

void collect_expr_names(const ExprPtr& e, std::set<std::string>& out) {
  if (!e) return;
  switch (e->kind) {
    case Expr::Kind::EnumLit:
      out.insert(std::get<std::string>(e->literal));
      break;
    case Expr::Kind::Var:
    case Expr::Kind::Call:
      out.insert(e->name);
      break;
    default:
      break;
  }
  for (const auto& arg : e->args) collect_expr_names(arg, out);
}

void collect_stmt_names(const StmtPtr& s, std::set<std::string>& out) {
  if (!s) return;
  for (const auto& t : s->targets) out.insert(t);
  for (const auto& v : s->values) collect_expr_names(v, out);
  for (const auto& c : s->children) collect_stmt_names(c, out);
  for (const auto& arm : s->arms) {
    collect_expr_names(arm.guard, out);
    collect_stmt_names(arm.body, out);
  }
  collect_expr_names(s->guard, out);
  collect_stmt_names(s->body, out);
  if (!s->var.empty()) out.insert(s->var);
  collect_expr_names(s->init, out);
  for (const auto& o : s->outs) out.insert(o);
  if (!s->callee.empty()) out.insert(s->callee);
  for (const auto& i : s->ins) collect_expr_names(i, out);
}

bool expr_has_call(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Call) return true;
  for (const auto& arg : e->args)
    if (expr_has_call(arg)) return true;
  return false;
}

bool stmt_has_call_expr(const StmtPtr& s) {
  if (!s) return false;
  for (const auto& v : s->values)
    if (expr_has_call(v)) return true;
  for (const auto& c : s->children)
    if (stmt_has_call_expr(c)) return true;
  for (const auto& arm : s->arms)
    if (expr_has_call(arm.guard) || stmt_has_call_expr(arm.body)) return true;
  if (expr_has_call(s->guard) || stmt_has_call_expr(s->body)) return true;
  if (expr_has_call(s->init)) return true;
  for (const auto& i : s->ins)
    if (expr_has_call(i)) return true;
  return false;
}

bool stmt_has_call_stmt(const StmtPtr& s) {
  if (!s) return false;
  if (s->kind == Stmt::Kind::Call) return true;
  for (const auto& c : s->children)
    if (stmt_has_call_stmt(c)) return true;
  for (const auto& arm : s->arms)
    if (stmt_has_call_stmt(arm.body)) return true;
  return stmt_has_call_stmt(s->body);
}

}  // namespace

std::set<std::string> collect_names(const ProgramAst& ast) {
  std::set<std::string> out;
  for (const auto& [name, domain] : ast.space.components()) {
    out.insert(name);
    if (domain.kind() == Domain::Kind::Enumeration)
      for (const auto& label : domain.labels()) out.insert(label);
  }
  for (const auto& sub : ast.subs) {
    out.insert(sub.name);
    for (const auto& d : sub.outs) {
      out.insert(d.name);
      if (d.domain.kind() == Domain::Kind::Enumeration)
        for (const auto& label : d.domain.labels()) out.insert(label);
    }
    for (const auto& d : sub.ins) {
      out.insert(d.name);
      if (d.domain.kind() == Domain::Kind::Enumeration)
        for (const auto& label : d.domain.labels()) out.insert(label);
    }
    collect_stmt_names(sub.body, out);
  }
  collect_stmt_names(ast.body, out);
  return out;
}

bool contains_call_expressions(const ProgramAst& ast) {
  for (const auto& sub : ast.subs)
    if (stmt_has_call_expr(sub.body)) return true;
  return stmt_has_call_expr(ast.body);
}

bool contains_call_statements(const ProgramAst& ast) {
  for (const auto& sub : ast.subs)
    if (stmt_has_call_stmt(sub.body)) return true;
  return stmt_has_call_stmt(ast.body);
}

}  // namespace absprog
