#include "absprog/printer.hpp"

namespace absprog {

namespace {

// Precedence levels used to emit minimal parentheses: or < and < not <
// comparison < additive < multiplicative < unary minus < atom.
int level_of(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Binary:
      switch (e->bin) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Eq: case BinOp::Ne: case BinOp::Lt: case BinOp::Le:
        case BinOp::Gt: case BinOp::Ge: return 4;
        case BinOp::Add: case BinOp::Sub: return 5;
        case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 6;
      }
      return 8;
    case Expr::Kind::Unary:
      return e->un == UnOp::Not ? 3 : 7;
    default:
      return 8;
  }
}

std::string emit(const ExprPtr& e, int min_level) {
  int level = level_of(e);
  std::string out;
  switch (e->kind) {
    case Expr::Kind::BoolLit:
    case Expr::Kind::IntLit:
    case Expr::Kind::EnumLit:
      out = value_to_string(e->literal);
      break;
    case Expr::Kind::Var:
      out = e->name;
      break;
    case Expr::Kind::Unary:
      if (e->un == UnOp::Not)
        out = "not " + emit(e->args[0], 3);
      else
        out = "-" + emit(e->args[0], 8);
      break;
    case Expr::Kind::Binary: {
      // Comparisons do not chain, so both sides sit one level up.
      int lhs_level = level == 4 ? 5 : level;
      int rhs_level = level == 4 ? 5 : level + 1;
      out = emit(e->args[0], lhs_level) + " " + binop_symbol(e->bin) + " " +
            emit(e->args[1], rhs_level);
      break;
    }
    case Expr::Kind::Call: {
      out = e->name + "(";
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        if (i > 0) out += ", ";
        out += emit(e->args[i], 0);
      }
      out += ")";
      break;
    }
  }
  if (level < min_level) return "(" + out + ")";
  return out;
}

std::string pad(int indent) { return std::string(2 * indent, ' '); }

std::string join_exprs(const std::vector<ExprPtr>& exprs) {
  std::string out;
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    if (i > 0) out += ", ";
    out += emit(exprs[i], 0);
  }
  return out;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out;
}

}  // namespace

std::string format_expr(const ExprPtr& e) { return emit(e, 0); }

std::string format_stmt(const StmtPtr& s, int indent) {
  switch (s->kind) {
    case Stmt::Kind::Skip:
      return pad(indent) + "skip";
    case Stmt::Kind::Assign:
      return pad(indent) + join_names(s->targets) + " := " +
             join_exprs(s->values);
    case Stmt::Kind::Seq: {
      std::string out;
      for (std::size_t i = 0; i < s->children.size(); ++i) {
        if (i > 0) out += ";\n";
        out += format_stmt(s->children[i], indent);
      }
      return out;
    }
    case Stmt::Kind::If: {
      std::string out;
      for (std::size_t i = 0; i < s->arms.size(); ++i) {
        out += pad(indent) + (i == 0 ? "if " : "[] ") +
               format_expr(s->arms[i].guard) + " ->\n";
        out += format_stmt(s->arms[i].body, indent + 1) + "\n";
      }
      out += pad(indent) + "fi";
      return out;
    }
    case Stmt::Kind::While:
      return pad(indent) + "while " + format_expr(s->guard) + " do\n" +
             format_stmt(s->body, indent + 1) + "\n" + pad(indent) + "od";
    case Stmt::Kind::Choose: {
      std::string out = pad(indent) + "choose\n";
      for (std::size_t i = 0; i < s->children.size(); ++i) {
        if (i > 0) out += pad(indent) + "[]\n";
        out += format_stmt(s->children[i], indent + 1) + "\n";
      }
      out += pad(indent) + "endchoose";
      return out;
    }
    case Stmt::Kind::VarBlock:
      return pad(indent) + "var " + s->var + ": " + s->var_domain->to_text() +
             " := " + format_expr(s->init) + " in\n" +
             format_stmt(s->body, indent + 1) + "\n" + pad(indent) + "end";
    case Stmt::Kind::Call:
      return pad(indent) + "(" + join_names(s->outs) + ") := " + s->callee +
             "(" + join_exprs(s->ins) + ")";
  }
  return pad(indent) + "skip";
}

std::string format_program(const ProgramAst& ast) {
  std::string out = "space ";
  bool first = true;
  for (const auto& [name, domain] : ast.space.components()) {
    if (!first) out += ", ";
    first = false;
    out += name + ": " + domain.to_text();
  }
  out += "\n";
  for (const auto& sub : ast.subs) {
    out += "sub (";
    for (std::size_t i = 0; i < sub.outs.size(); ++i) {
      if (i > 0) out += ", ";
      out += sub.outs[i].name + ": " + sub.outs[i].domain.to_text();
    }
    out += ") := " + sub.name + "(";
    for (std::size_t i = 0; i < sub.ins.size(); ++i) {
      if (i > 0) out += ", ";
      out += sub.ins[i].name + ": " + sub.ins[i].domain.to_text();
    }
    out += ")\n";
    out += format_stmt(sub.body, 1) + "\n";
    out += "end\n";
  }
  out += "begin\n";
  out += format_stmt(ast.body, 1) + "\n";
  out += "end\n";
  return out;
}

}  // namespace absprog
