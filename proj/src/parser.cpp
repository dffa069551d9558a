#include "absprog/parser.hpp"

#include <cctype>
#include <map>

#include "absprog/error.hpp"

namespace absprog {

std::string format_diagnostic(const Diagnostic& d) {
  return std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) +
         ": " + d.message;
}

namespace {

enum class Tok {
  Ident, Int, KwSpace, KwBegin, KwEnd, KwSub, KwSkip, KwIf, KwFi, KwWhile,
  KwDo, KwOd, KwChoose, KwEndchoose, KwVar, KwIn, KwBool, KwInt, KwEnum,
  KwDiv, KwMod, KwAnd, KwOr, KwNot, KwTrue, KwFalse,
  Comma, Colon, Semicolon, Assign, LParen, RParen, LBracket, RBracket,
  LBrace, RBrace, DotDot, Box, Arrow, Plus, Minus, Star, Eq, Ne, Lt, Le, Gt,
  Ge, Eof,
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t number = 0;
  SourcePos pos;
};

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"space", Tok::KwSpace},   {"begin", Tok::KwBegin},
      {"end", Tok::KwEnd},       {"sub", Tok::KwSub},
      {"skip", Tok::KwSkip},     {"if", Tok::KwIf},
      {"fi", Tok::KwFi},         {"while", Tok::KwWhile},
      {"do", Tok::KwDo},         {"od", Tok::KwOd},
      {"choose", Tok::KwChoose}, {"endchoose", Tok::KwEndchoose},
      {"var", Tok::KwVar},       {"in", Tok::KwIn},
      {"bool", Tok::KwBool},     {"int", Tok::KwInt},
      {"enum", Tok::KwEnum},     {"div", Tok::KwDiv},
      {"mod", Tok::KwMod},       {"and", Tok::KwAnd},
      {"or", Tok::KwOr},         {"not", Tok::KwNot},
      {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
  };
  return kw;
}

struct LexFailure {
  Diagnostic diagnostic;
};

std::vector<Token> lex(std::string_view text, bool allow_primed) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t i = 0;
  auto here = [&]() { return SourcePos{line, column}; };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i + k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    i += n;
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos = here();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      std::string word(text.substr(i, j - i));
      if (allow_primed && j < text.size() && text[j] == '\'') {
        word += '\'';
        ++j;
      }
      advance(j - i);
      auto kw = keywords().find(word);
      if (kw != keywords().end() && word.back() != '\'')
        out.push_back({kw->second, word, 0, pos});
      else
        out.push_back({Tok::Ident, word, 0, pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      std::string digits(text.substr(i, j - i));
      advance(j - i);
      std::int64_t value = 0;
      try {
        value = std::stoll(digits);
      } catch (const std::exception&) {
        throw LexFailure{{pos, "integer literal out of range"}};
      }
      out.push_back({Tok::Int, digits, value, pos});
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two(':', '=')) { advance(2); out.push_back({Tok::Assign, ":=", 0, pos}); continue; }
    if (two('.', '.')) { advance(2); out.push_back({Tok::DotDot, "..", 0, pos}); continue; }
    if (two('/', '=')) { advance(2); out.push_back({Tok::Ne, "/=", 0, pos}); continue; }
    if (two('<', '=')) { advance(2); out.push_back({Tok::Le, "<=", 0, pos}); continue; }
    if (two('>', '=')) { advance(2); out.push_back({Tok::Ge, ">=", 0, pos}); continue; }
    if (two('-', '>')) { advance(2); out.push_back({Tok::Arrow, "->", 0, pos}); continue; }
    if (two('[', ']')) { advance(2); out.push_back({Tok::Box, "[]", 0, pos}); continue; }
    Tok kind;
    switch (c) {
      case ',': kind = Tok::Comma; break;
      case ':': kind = Tok::Colon; break;
      case ';': kind = Tok::Semicolon; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case '{': kind = Tok::LBrace; break;
      case '}': kind = Tok::RBrace; break;
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '=': kind = Tok::Eq; break;
      case '<': kind = Tok::Lt; break;
      case '>': kind = Tok::Gt; break;
      default:
        throw LexFailure{{pos, std::string("unexpected character '") + c + "'"}};
    }
    advance(1);
    out.push_back({kind, std::string(1, c), 0, pos});
  }
  out.push_back({Tok::Eof, "", 0, here()});
  return out;
}

// ---------------------------------------------------------------------------
// Syntactic phase: tokens to an unresolved AST (identifiers left as Var).

struct SyntaxFailure {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ProgramAst parse_program_text() {
    expect(Tok::KwSpace, "expected 'space'");
    std::map<std::string, Domain> components;
    for (;;) {
      VarDecl decl = parse_vardecl();
      if (!components.emplace(decl.name, decl.domain).second)
        fail_at(decl.pos, "variable '" + decl.name + "' declared twice");
      if (peek().kind != Tok::Comma) break;
      next();
    }
    ProgramAst ast;
    ast.space = StateSpace(std::move(components));
    while (peek().kind == Tok::KwSub) ast.subs.push_back(parse_sub());
    expect(Tok::KwBegin, "expected 'begin'");
    ast.body = parse_stmt_seq();
    expect(Tok::KwEnd, "expected 'end'");
    expect(Tok::Eof, "trailing input after program end");
    return ast;
  }

  ExprPtr parse_condition_text() {
    ExprPtr e = parse_expr();
    expect(Tok::Eof, "trailing input after condition");
    return e;
  }

  Domain parse_domain_only() {
    Domain d = parse_type();
    expect(Tok::Eof, "trailing input after type");
    return d;
  }

  VarDecl parse_vardecl_only() {
    VarDecl d = parse_vardecl();
    expect(Tok::Eof, "trailing input after declaration");
    return d;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() { return tokens_[pos_++]; }
  [[noreturn]] void fail_at(SourcePos pos, std::string message) {
    throw SyntaxFailure{{pos, std::move(message)}};
  }
  const Token& expect(Tok kind, const std::string& message) {
    if (peek().kind != kind) fail_at(peek().pos, message);
    return next();
  }

  VarDecl parse_vardecl() {
    const Token& name = expect(Tok::Ident, "expected a variable name");
    expect(Tok::Colon, "expected ':' after variable name");
    Domain d = parse_type();
    return VarDecl{name.text, std::move(d), name.pos};
  }

  std::int64_t parse_signed_int() {
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      next();
      negative = true;
    }
    const Token& t = expect(Tok::Int, "expected an integer");
    return negative ? -t.number : t.number;
  }

  Domain parse_type() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::KwBool:
        return Domain::boolean();
      case Tok::KwInt: {
        expect(Tok::LBracket, "expected '[' after 'int'");
        std::int64_t lo = parse_signed_int();
        expect(Tok::DotDot, "expected '..' in integer bounds");
        std::int64_t hi = parse_signed_int();
        expect(Tok::RBracket, "expected ']' after integer bounds");
        if (lo > hi) fail_at(t.pos, "integer bounds require min <= max");
        return Domain::integer(lo, hi);
      }
      case Tok::KwEnum: {
        expect(Tok::LBrace, "expected '{' after 'enum'");
        std::vector<std::string> labels;
        for (;;) {
          labels.push_back(expect(Tok::Ident, "expected an enum label").text);
          if (peek().kind != Tok::Comma) break;
          next();
        }
        expect(Tok::RBrace, "expected '}' after enum labels");
        try {
          return Domain::enumeration(std::move(labels));
        } catch (const Error& e) {
          fail_at(t.pos, e.what());
        }
      }
      default:
        fail_at(t.pos, "expected a type (bool, int[..], enum{..})");
    }
  }

  Subprogram parse_sub() {
    const Token& kw = expect(Tok::KwSub, "expected 'sub'");
    Subprogram sub;
    sub.pos = kw.pos;
    expect(Tok::LParen, "expected '(' before output parameters");
    for (;;) {
      sub.outs.push_back(parse_vardecl());
      if (peek().kind != Tok::Comma) break;
      next();
    }
    expect(Tok::RParen, "expected ')' after output parameters");
    expect(Tok::Assign, "expected ':=' in subprogram head");
    sub.name = expect(Tok::Ident, "expected the subprogram name").text;
    expect(Tok::LParen, "expected '(' before input parameters");
    if (peek().kind != Tok::RParen) {
      for (;;) {
        sub.ins.push_back(parse_vardecl());
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen, "expected ')' after input parameters");
    sub.body = parse_stmt_seq();
    expect(Tok::KwEnd, "expected 'end' closing the subprogram");
    return sub;
  }

  StmtPtr parse_stmt_seq() {
    std::vector<StmtPtr> steps;
    steps.push_back(parse_stmt());
    while (peek().kind == Tok::Semicolon) {
      next();
      steps.push_back(parse_stmt());
    }
    if (steps.size() == 1) return steps.front();
    SourcePos pos = steps.front()->pos;
    return Stmt::make_seq(std::move(steps), pos);
  }

  StmtPtr parse_stmt() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwSkip:
        next();
        return Stmt::make_skip(t.pos);
      case Tok::Ident:
        return parse_assign();
      case Tok::LParen:
        return parse_call_stmt();
      case Tok::KwIf: {
        next();
        std::vector<GuardedArm> arms;
        for (;;) {
          ExprPtr guard = parse_expr();
          expect(Tok::Arrow, "expected '->' after guard");
          StmtPtr body = parse_stmt_seq();
          arms.push_back({std::move(guard), std::move(body)});
          if (peek().kind != Tok::Box) break;
          next();
        }
        expect(Tok::KwFi, "expected 'fi'");
        return Stmt::make_if(std::move(arms), t.pos);
      }
      case Tok::KwWhile: {
        next();
        ExprPtr guard = parse_expr();
        expect(Tok::KwDo, "expected 'do'");
        StmtPtr body = parse_stmt_seq();
        expect(Tok::KwOd, "expected 'od'");
        return Stmt::make_while(std::move(guard), std::move(body), t.pos);
      }
      case Tok::KwChoose: {
        next();
        std::vector<StmtPtr> branches;
        for (;;) {
          branches.push_back(parse_stmt_seq());
          if (peek().kind != Tok::Box) break;
          next();
        }
        expect(Tok::KwEndchoose, "expected 'endchoose'");
        return Stmt::make_choose(std::move(branches), t.pos);
      }
      case Tok::KwVar: {
        next();
        VarDecl decl = parse_vardecl();
        expect(Tok::Assign, "expected ':=' after local declaration");
        ExprPtr init = parse_expr();
        expect(Tok::KwIn, "expected 'in'");
        StmtPtr body = parse_stmt_seq();
        expect(Tok::KwEnd, "expected 'end' closing the var block");
        return Stmt::make_var_block(decl.name, decl.domain, std::move(init),
                                    std::move(body), t.pos);
      }
      default:
        fail_at(t.pos, "expected a statement");
    }
  }

  StmtPtr parse_assign() {
    const Token& first = peek();
    std::vector<std::string> targets;
    targets.push_back(expect(Tok::Ident, "expected a variable").text);
    while (peek().kind == Tok::Comma) {
      next();
      targets.push_back(expect(Tok::Ident, "expected a variable").text);
    }
    expect(Tok::Assign, "expected ':='");
    std::vector<ExprPtr> values;
    values.push_back(parse_expr());
    while (peek().kind == Tok::Comma) {
      next();
      values.push_back(parse_expr());
    }
    if (targets.size() != values.size())
      fail_at(first.pos, "assignment has " + std::to_string(targets.size()) +
                             " target(s) but " + std::to_string(values.size()) +
                             " value(s)");
    return Stmt::make_assign(std::move(targets), {}, std::move(values),
                             first.pos);
  }

  StmtPtr parse_call_stmt() {
    const Token& lparen = expect(Tok::LParen, "expected '('");
    std::vector<std::string> outs;
    outs.push_back(expect(Tok::Ident, "expected an output variable").text);
    while (peek().kind == Tok::Comma) {
      next();
      outs.push_back(expect(Tok::Ident, "expected an output variable").text);
    }
    expect(Tok::RParen, "expected ')' after output variables");
    expect(Tok::Assign, "expected ':=' in call statement");
    std::string callee = expect(Tok::Ident, "expected a subprogram name").text;
    expect(Tok::LParen, "expected '(' before call arguments");
    std::vector<ExprPtr> ins;
    if (peek().kind != Tok::RParen) {
      for (;;) {
        ins.push_back(parse_expr());
        if (peek().kind != Tok::Comma) break;
        next();
      }
    }
    expect(Tok::RParen, "expected ')' after call arguments");
    return Stmt::make_call(std::move(outs), {}, std::move(callee),
                           std::move(ins), lparen.pos);
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (peek().kind == Tok::KwOr) {
      SourcePos pos = next().pos;
      lhs = Expr::make_binary(BinOp::Or, std::move(lhs), parse_and(), pos);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (peek().kind == Tok::KwAnd) {
      SourcePos pos = next().pos;
      lhs = Expr::make_binary(BinOp::And, std::move(lhs), parse_not(), pos);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (peek().kind == Tok::KwNot) {
      SourcePos pos = next().pos;
      return Expr::make_unary(UnOp::Not, parse_not(), pos);
    }
    return parse_comparison();
  }

  static std::optional<BinOp> comparison_op(Tok kind) {
    switch (kind) {
      case Tok::Eq: return BinOp::Eq;
      case Tok::Ne: return BinOp::Ne;
      case Tok::Lt: return BinOp::Lt;
      case Tok::Le: return BinOp::Le;
      case Tok::Gt: return BinOp::Gt;
      case Tok::Ge: return BinOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    auto op = comparison_op(peek().kind);
    if (!op) return lhs;
    SourcePos pos = next().pos;
    ExprPtr rhs = parse_additive();
    if (comparison_op(peek().kind))
      fail_at(peek().pos, "comparisons do not chain; parenthesize");
    return Expr::make_binary(*op, std::move(lhs), std::move(rhs), pos);
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    for (;;) {
      Tok k = peek().kind;
      if (k != Tok::Plus && k != Tok::Minus) return lhs;
      SourcePos pos = next().pos;
      lhs = Expr::make_binary(k == Tok::Plus ? BinOp::Add : BinOp::Sub,
                              std::move(lhs), parse_multiplicative(), pos);
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      Tok k = peek().kind;
      BinOp op;
      if (k == Tok::Star) op = BinOp::Mul;
      else if (k == Tok::KwDiv) op = BinOp::Div;
      else if (k == Tok::KwMod) op = BinOp::Mod;
      else return lhs;
      SourcePos pos = next().pos;
      lhs = Expr::make_binary(op, std::move(lhs), parse_unary(), pos);
    }
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::Minus) {
      SourcePos pos = next().pos;
      return Expr::make_unary(UnOp::Neg, parse_unary(), pos);
    }
    return parse_atom();
  }

  ExprPtr parse_atom() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::Int:
        return Expr::make_int(t.number, t.pos);
      case Tok::KwTrue:
        return Expr::make_bool(true, t.pos);
      case Tok::KwFalse:
        return Expr::make_bool(false, t.pos);
      case Tok::LParen: {
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, "expected ')'");
        return inner;
      }
      case Tok::Ident: {
        if (peek().kind == Tok::LParen) {
          next();
          std::vector<ExprPtr> args;
          if (peek().kind != Tok::RParen) {
            for (;;) {
              args.push_back(parse_expr());
              if (peek().kind != Tok::Comma) break;
              next();
            }
          }
          expect(Tok::RParen, "expected ')' after call arguments");
          return Expr::make_call(t.text, std::move(args), t.pos);
        }
        return Expr::make_var(t.text, t.pos);
      }
      default:
        fail_at(t.pos, "expected an expression");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Resolution phase: scope checks, type checks, identifier classification and
// domain annotation.

struct TypeInfo {
  enum class Tag { Bool, Int, Enum, EnumLabel };
  Tag tag = Tag::Bool;
  const Domain* domain = nullptr;  // Enum
  std::string label;               // EnumLabel

  TypeInfo() = default;
  explicit TypeInfo(Tag t) : tag(t) {}

  std::string describe() const {
    switch (tag) {
      case Tag::Bool: return "bool";
      case Tag::Int: return "int";
      case Tag::Enum: return domain->to_text();
      case Tag::EnumLabel: return "enum label '" + label + "'";
    }
    return "?";
  }
};

class Resolver {
 public:
  Resolver(const ProgramAst& input, const ParseOptions& options,
           std::vector<Diagnostic>& diagnostics,
           std::vector<Diagnostic>& warnings)
      : input_(input), options_(options), diagnostics_(diagnostics),
        warnings_(warnings) {
    collect_enum_labels();
  }

  std::optional<ProgramAst> run() {
    ProgramAst out;
    out.space = input_.space;
    std::set<std::string> sub_names;
    for (const Subprogram& sub : input_.subs) {
      if (!sub_names.insert(sub.name).second)
        report(sub.pos, "subprogram '" + sub.name + "' declared twice");
      Subprogram resolved = resolve_sub(sub);
      out.subs.push_back(std::move(resolved));
    }
    Scope scope;
    for (const auto& [name, domain] : input_.space.components())
      scope.emplace(name, &domain);
    out.body = resolve_stmt(input_.body, scope);
    if (!diagnostics_.empty()) return std::nullopt;
    return out;
  }

 private:
  using Scope = std::map<std::string, const Domain*>;

  void report(SourcePos pos, std::string message) {
    diagnostics_.push_back({pos, std::move(message)});
  }
  void warn(SourcePos pos, std::string message) {
    warnings_.push_back({pos, std::move(message)});
  }

  void collect_domain_labels(const Domain& d) {
    if (d.kind() != Domain::Kind::Enumeration) return;
    for (const auto& label : d.labels()) enum_labels_.insert(label);
  }

  void collect_stmt_labels(const StmtPtr& s) {
    if (!s) return;
    if (s->var_domain) collect_domain_labels(*s->var_domain);
    for (const auto& c : s->children) collect_stmt_labels(c);
    for (const auto& arm : s->arms) collect_stmt_labels(arm.body);
    collect_stmt_labels(s->body);
  }

  void collect_enum_labels() {
    for (const auto& [name, domain] : input_.space.components()) {
      (void)name;
      collect_domain_labels(domain);
    }
    for (const auto& sub : input_.subs) {
      for (const auto& d : sub.outs) collect_domain_labels(d.domain);
      for (const auto& d : sub.ins) collect_domain_labels(d.domain);
      collect_stmt_labels(sub.body);
    }
    collect_stmt_labels(input_.body);
  }

  Subprogram resolve_sub(const Subprogram& sub) {
    Subprogram out;
    out.name = sub.name;
    out.pos = sub.pos;
    out.outs = sub.outs;
    out.ins = sub.ins;
    std::set<std::string> formals;
    for (const auto& d : sub.outs)
      if (!formals.insert(d.name).second)
        report(d.pos, "parameter '" + d.name + "' occurs more than once");
    for (const auto& d : sub.ins)
      if (!formals.insert(d.name).second)
        report(d.pos, "parameter '" + d.name + "' occurs more than once");

    Scope scope;
    if (options_.allow_globals)
      for (const auto& [name, domain] : input_.space.components())
        scope.emplace(name, &domain);
    // Formals shadow globals when globals are visible at all.
    for (const auto& d : sub.outs) scope[d.name] = &d.domain;
    for (const auto& d : sub.ins) scope[d.name] = &d.domain;
    out.body = resolve_stmt(sub.body, scope);
    return out;
  }

  const Subprogram* find_sub(const std::string& name) const {
    return input_.find_sub(name);
  }

  StmtPtr resolve_stmt(const StmtPtr& s, Scope& scope) {
    if (!s) return nullptr;
    switch (s->kind) {
      case Stmt::Kind::Skip:
        return Stmt::make_skip(s->pos);
      case Stmt::Kind::Assign: {
        std::set<std::string> seen;
        std::vector<Domain> domains;
        for (const auto& target : s->targets) {
          if (!seen.insert(target).second)
            report(s->pos, "variable '" + target +
                               "' assigned twice in one statement");
          auto it = scope.find(target);
          if (it == scope.end()) {
            report(s->pos, "assignment target '" + target + "' is not in scope");
            domains.push_back(Domain::boolean());
          } else {
            domains.push_back(*it->second);
          }
        }
        std::vector<ExprPtr> values;
        for (std::size_t i = 0; i < s->values.size(); ++i) {
          auto [e, t] = resolve_expr(s->values[i], scope);
          if (i < domains.size()) check_assignable(t, domains[i], e->pos);
          values.push_back(std::move(e));
        }
        return Stmt::make_assign(s->targets, std::move(domains),
                                 std::move(values), s->pos);
      }
      case Stmt::Kind::Seq: {
        std::vector<StmtPtr> steps;
        for (const auto& c : s->children)
          steps.push_back(resolve_stmt(c, scope));
        return Stmt::make_seq(std::move(steps), s->pos);
      }
      case Stmt::Kind::If: {
        std::vector<GuardedArm> arms;
        for (const auto& arm : s->arms) {
          auto [guard, t] = resolve_expr(arm.guard, scope);
          require_bool(t, guard->pos, "guard");
          arms.push_back({std::move(guard), resolve_stmt(arm.body, scope)});
        }
        return Stmt::make_if(std::move(arms), s->pos);
      }
      case Stmt::Kind::While: {
        auto [guard, t] = resolve_expr(s->guard, scope);
        require_bool(t, guard->pos, "guard");
        return Stmt::make_while(std::move(guard), resolve_stmt(s->body, scope),
                                s->pos);
      }
      case Stmt::Kind::Choose: {
        std::vector<StmtPtr> branches;
        for (const auto& c : s->children)
          branches.push_back(resolve_stmt(c, scope));
        return Stmt::make_choose(std::move(branches), s->pos);
      }
      case Stmt::Kind::VarBlock: {
        auto [init, t] = resolve_expr(s->init, scope);
        check_assignable(t, *s->var_domain, init->pos);
        if (scope.count(s->var))
          report(s->pos,
                 "local '" + s->var + "' shadows a variable in scope");
        Scope inner = scope;
        inner[s->var] = &*s->var_domain;
        StmtPtr body = resolve_stmt(s->body, inner);
        return Stmt::make_var_block(s->var, *s->var_domain, std::move(init),
                                    std::move(body), s->pos);
      }
      case Stmt::Kind::Call: {
        const Subprogram* sub = find_sub(s->callee);
        if (!sub) {
          report(s->pos, "call of unknown subprogram '" + s->callee + "'");
          return Stmt::make_skip(s->pos);
        }
        std::vector<Domain> out_domains;
        std::set<std::string> seen;
        if (s->outs.size() != sub->outs.size())
          report(s->pos, "call of '" + s->callee + "' binds " +
                             std::to_string(s->outs.size()) +
                             " output(s), expected " +
                             std::to_string(sub->outs.size()));
        for (std::size_t i = 0; i < s->outs.size(); ++i) {
          const std::string& host = s->outs[i];
          if (!seen.insert(host).second)
            report(s->pos, "output variable '" + host + "' used twice");
          auto it = scope.find(host);
          if (it == scope.end()) {
            report(s->pos, "output variable '" + host + "' is not in scope");
            out_domains.push_back(Domain::boolean());
            continue;
          }
          out_domains.push_back(*it->second);
          if (i < sub->outs.size() &&
              !kinds_match(*it->second, sub->outs[i].domain))
            report(s->pos, "output variable '" + host + "' has type " +
                               it->second->to_text() +
                               ", formal parameter expects " +
                               sub->outs[i].domain.to_text());
        }
        if (s->ins.size() != sub->ins.size())
          report(s->pos, "call of '" + s->callee + "' passes " +
                             std::to_string(s->ins.size()) +
                             " argument(s), expected " +
                             std::to_string(sub->ins.size()));
        std::vector<ExprPtr> ins;
        for (std::size_t i = 0; i < s->ins.size(); ++i) {
          auto [e, t] = resolve_expr(s->ins[i], scope);
          if (i < sub->ins.size())
            check_assignable(t, sub->ins[i].domain, e->pos);
          if (e->kind == Expr::Kind::Var && seen.count(e->name))
            warn(e->pos, "variable '" + e->name +
                             "' is both an input argument and an output of "
                             "the same call");
          ins.push_back(std::move(e));
        }
        return Stmt::make_call(s->outs, std::move(out_domains), s->callee,
                               std::move(ins), s->pos);
      }
    }
    return Stmt::make_skip(s->pos);
  }

  std::pair<ExprPtr, TypeInfo> resolve_expr(const ExprPtr& e,
                                            const Scope& scope) {
    switch (e->kind) {
      case Expr::Kind::BoolLit:
        return {Expr::make_bool(std::get<bool>(e->literal), e->pos),
                TypeInfo{TypeInfo::Tag::Bool}};
      case Expr::Kind::IntLit:
        return {Expr::make_int(std::get<std::int64_t>(e->literal), e->pos),
                TypeInfo{TypeInfo::Tag::Int}};
      case Expr::Kind::EnumLit: {
        TypeInfo t{TypeInfo::Tag::EnumLabel};
        t.label = std::get<std::string>(e->literal);
        return {Expr::make_enum(t.label, e->pos), t};
      }
      case Expr::Kind::Var: {
        auto it = scope.find(e->name);
        if (it != scope.end())
          return {Expr::make_var(e->name, e->pos), type_of_domain(*it->second)};
        if (enum_labels_.count(e->name)) {
          TypeInfo t{TypeInfo::Tag::EnumLabel};
          t.label = e->name;
          return {Expr::make_enum(e->name, e->pos), t};
        }
        report(e->pos, "'" + e->name + "' is not in scope");
        return {Expr::make_var(e->name, e->pos), TypeInfo{TypeInfo::Tag::Int}};
      }
      case Expr::Kind::Unary: {
        auto [operand, t] = resolve_expr(e->args[0], scope);
        if (e->un == UnOp::Neg && t.tag != TypeInfo::Tag::Int)
          report(e->pos, "unary '-' needs an integer, got " + t.describe());
        if (e->un == UnOp::Not && t.tag != TypeInfo::Tag::Bool)
          report(e->pos, "'not' needs a boolean, got " + t.describe());
        TypeInfo out{e->un == UnOp::Neg ? TypeInfo::Tag::Int
                                        : TypeInfo::Tag::Bool};
        return {Expr::make_unary(e->un, std::move(operand), e->pos), out};
      }
      case Expr::Kind::Binary:
        return resolve_binary(e, scope);
      case Expr::Kind::Call: {
        const Subprogram* sub = find_sub(e->name);
        if (!sub) {
          report(e->pos, "call of unknown subprogram '" + e->name + "'");
          return {Expr::make_int(0, e->pos), TypeInfo{TypeInfo::Tag::Int}};
        }
        if (sub->outs.size() != 1)
          report(e->pos, "subprogram '" + e->name + "' has " +
                             std::to_string(sub->outs.size()) +
                             " outputs; call expressions require exactly one");
        if (e->args.size() != sub->ins.size())
          report(e->pos, "call of '" + e->name + "' passes " +
                             std::to_string(e->args.size()) +
                             " argument(s), expected " +
                             std::to_string(sub->ins.size()));
        std::vector<ExprPtr> args;
        for (std::size_t i = 0; i < e->args.size(); ++i) {
          auto [arg, t] = resolve_expr(e->args[i], scope);
          if (i < sub->ins.size())
            check_assignable(t, sub->ins[i].domain, arg->pos);
          args.push_back(std::move(arg));
        }
        return {Expr::make_call(e->name, std::move(args), e->pos),
                type_of_domain(sub->outs.front().domain)};
      }
    }
    return {Expr::make_int(0, e->pos), TypeInfo{TypeInfo::Tag::Int}};
  }

  std::pair<ExprPtr, TypeInfo> resolve_binary(const ExprPtr& e,
                                              const Scope& scope) {
    auto [lhs, lt] = resolve_expr(e->args[0], scope);
    auto [rhs, rt] = resolve_expr(e->args[1], scope);
    TypeInfo out{TypeInfo::Tag::Bool};
    switch (e->bin) {
      case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
      case BinOp::Div: case BinOp::Mod:
        if (lt.tag != TypeInfo::Tag::Int || rt.tag != TypeInfo::Tag::Int)
          report(e->pos, std::string("'") + binop_symbol(e->bin) +
                             "' needs integers, got " + lt.describe() +
                             " and " + rt.describe());
        out.tag = TypeInfo::Tag::Int;
        break;
      case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
        if (lt.tag != TypeInfo::Tag::Int || rt.tag != TypeInfo::Tag::Int)
          report(e->pos, std::string("'") + binop_symbol(e->bin) +
                             "' compares integers, got " + lt.describe() +
                             " and " + rt.describe());
        break;
      case BinOp::Eq: case BinOp::Ne:
        if (!equality_comparable(lt, rt))
          report(e->pos, "cannot compare " + lt.describe() + " with " +
                             rt.describe());
        break;
      case BinOp::And: case BinOp::Or:
        if (lt.tag != TypeInfo::Tag::Bool || rt.tag != TypeInfo::Tag::Bool)
          report(e->pos, std::string("'") + binop_symbol(e->bin) +
                             "' needs booleans, got " + lt.describe() +
                             " and " + rt.describe());
        break;
    }
    return {Expr::make_binary(e->bin, std::move(lhs), std::move(rhs), e->pos),
            out};
  }

  static TypeInfo type_of_domain(const Domain& d) {
    switch (d.kind()) {
      case Domain::Kind::Boolean: return TypeInfo{TypeInfo::Tag::Bool};
      case Domain::Kind::Integer: return TypeInfo{TypeInfo::Tag::Int};
      case Domain::Kind::Enumeration: {
        TypeInfo t{TypeInfo::Tag::Enum};
        t.domain = &d;
        return t;
      }
    }
    return TypeInfo{TypeInfo::Tag::Bool};
  }

  static bool label_in(const std::string& label, const Domain& d) {
    for (const auto& l : d.labels())
      if (l == label) return true;
    return false;
  }

  void require_bool(const TypeInfo& t, SourcePos pos, const char* what) {
    if (t.tag != TypeInfo::Tag::Bool)
      report(pos, std::string(what) + " must be boolean, got " + t.describe());
  }

  void check_assignable(const TypeInfo& t, const Domain& d, SourcePos pos) {
    bool ok = false;
    switch (d.kind()) {
      case Domain::Kind::Boolean: ok = t.tag == TypeInfo::Tag::Bool; break;
      case Domain::Kind::Integer: ok = t.tag == TypeInfo::Tag::Int; break;
      case Domain::Kind::Enumeration:
        ok = (t.tag == TypeInfo::Tag::Enum &&
              t.domain->labels() == d.labels()) ||
             (t.tag == TypeInfo::Tag::EnumLabel && label_in(t.label, d));
        break;
    }
    if (!ok)
      report(pos, "value of type " + t.describe() + " does not fit " +
                      d.to_text());
  }

  static bool kinds_match(const Domain& a, const Domain& b) {
    if (a.kind() != b.kind()) return false;
    if (a.kind() == Domain::Kind::Enumeration) return a.labels() == b.labels();
    return true;
  }

  bool equality_comparable(const TypeInfo& a, const TypeInfo& b) {
    auto is_enumish = [](const TypeInfo& t) {
      return t.tag == TypeInfo::Tag::Enum || t.tag == TypeInfo::Tag::EnumLabel;
    };
    if (a.tag == TypeInfo::Tag::Bool && b.tag == TypeInfo::Tag::Bool)
      return true;
    if (a.tag == TypeInfo::Tag::Int && b.tag == TypeInfo::Tag::Int) return true;
    if (!is_enumish(a) || !is_enumish(b)) return false;
    if (a.tag == TypeInfo::Tag::Enum && b.tag == TypeInfo::Tag::Enum)
      return a.domain->labels() == b.domain->labels();
    if (a.tag == TypeInfo::Tag::Enum) return label_in(b.label, *a.domain);
    if (b.tag == TypeInfo::Tag::Enum) return label_in(a.label, *b.domain);
    return true;
  }

  const ProgramAst& input_;
  const ParseOptions& options_;
  std::vector<Diagnostic>& diagnostics_;
  std::vector<Diagnostic>& warnings_;
  std::set<std::string> enum_labels_;
};

}  // namespace

ParseResult parse_program(std::string_view text, const ParseOptions& options) {
  ParseResult result;
  try {
    Parser parser(lex(text, false));
    ProgramAst raw = parser.parse_program_text();
    Resolver resolver(raw, options, result.diagnostics, result.warnings);
    result.ast = resolver.run();
  } catch (const LexFailure& e) {
    result.diagnostics.push_back(e.diagnostic);
  } catch (const SyntaxFailure& e) {
    result.diagnostics.push_back(e.diagnostic);
  } catch (const Error& e) {
    result.diagnostics.push_back({{0, 0}, e.what()});
  }
  return result;
}

ExprPtr parse_condition(std::string_view text, const StateSpace& space,
                        bool allow_primed) {
  try {
    Parser parser(lex(text, allow_primed));
    ExprPtr raw = parser.parse_condition_text();

    // The scope holds the space's variables and, for post-conditions, their
    // primed twins. Primed names are not identifiers, so the scope is kept
    // as a plain map rather than a StateSpace.
    std::map<std::string, Domain> scope = space.components();
    if (allow_primed)
      for (const auto& [name, domain] : space.components())
        scope.emplace(name + "'", domain);

    struct CondResolver {
      const std::map<std::string, Domain>& scope;
      std::set<std::string> labels;

      std::pair<ExprPtr, TypeInfo> resolve(const ExprPtr& e) {
        switch (e->kind) {
          case Expr::Kind::BoolLit:
            return {e, TypeInfo{TypeInfo::Tag::Bool}};
          case Expr::Kind::IntLit:
            return {e, TypeInfo{TypeInfo::Tag::Int}};
          case Expr::Kind::EnumLit: {
            TypeInfo t{TypeInfo::Tag::EnumLabel};
            t.label = std::get<std::string>(e->literal);
            return {e, t};
          }
          case Expr::Kind::Var: {
            auto it = scope.find(e->name);
            if (it != scope.end()) {
              TypeInfo t{TypeInfo::Tag::Bool};
              switch (it->second.kind()) {
                case Domain::Kind::Boolean: t.tag = TypeInfo::Tag::Bool; break;
                case Domain::Kind::Integer: t.tag = TypeInfo::Tag::Int; break;
                case Domain::Kind::Enumeration:
                  t.tag = TypeInfo::Tag::Enum;
                  t.domain = &it->second;
                  break;
              }
              return {e, t};
            }
            if (labels.count(e->name)) {
              TypeInfo t{TypeInfo::Tag::EnumLabel};
              t.label = e->name;
              return {Expr::make_enum(e->name, e->pos), t};
            }
            fail(Errc::parse_error, "condition references '" + e->name +
                                        "', which is not a variable of the "
                                        "space");
          }
          case Expr::Kind::Call:
            fail(Errc::parse_error, "calls are not allowed in conditions");
          case Expr::Kind::Unary: {
            auto [operand, t] = resolve(e->args[0]);
            if (e->un == UnOp::Neg && t.tag != TypeInfo::Tag::Int)
              fail(Errc::parse_error, "unary '-' needs an integer");
            if (e->un == UnOp::Not && t.tag != TypeInfo::Tag::Bool)
              fail(Errc::parse_error, "'not' needs a boolean");
            TypeInfo out{e->un == UnOp::Neg ? TypeInfo::Tag::Int
                                            : TypeInfo::Tag::Bool};
            return {Expr::make_unary(e->un, std::move(operand), e->pos), out};
          }
          case Expr::Kind::Binary: {
            auto [lhs, lt] = resolve(e->args[0]);
            auto [rhs, rt] = resolve(e->args[1]);
            bool ints = lt.tag == TypeInfo::Tag::Int &&
                        rt.tag == TypeInfo::Tag::Int;
            bool bools = lt.tag == TypeInfo::Tag::Bool &&
                         rt.tag == TypeInfo::Tag::Bool;
            TypeInfo out{TypeInfo::Tag::Bool};
            switch (e->bin) {
              case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
              case BinOp::Div: case BinOp::Mod:
                if (!ints)
                  fail(Errc::parse_error,
                       std::string("'") + binop_symbol(e->bin) +
                           "' needs integers");
                out.tag = TypeInfo::Tag::Int;
                break;
              case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
                if (!ints)
                  fail(Errc::parse_error,
                       std::string("'") + binop_symbol(e->bin) +
                           "' compares integers");
                break;
              case BinOp::Eq: case BinOp::Ne:
                if (!equality_ok(lt, rt))
                  fail(Errc::parse_error, "cannot compare " + lt.describe() +
                                              " with " + rt.describe());
                break;
              case BinOp::And: case BinOp::Or:
                if (!bools)
                  fail(Errc::parse_error,
                       std::string("'") + binop_symbol(e->bin) +
                           "' needs booleans");
                break;
            }
            return {Expr::make_binary(e->bin, std::move(lhs), std::move(rhs),
                                      e->pos),
                    out};
          }
        }
        fail(Errc::parse_error, "unsupported condition expression");
      }

      static bool label_in(const std::string& label, const Domain& d) {
        for (const auto& l : d.labels())
          if (l == label) return true;
        return false;
      }

      static bool equality_ok(const TypeInfo& a, const TypeInfo& b) {
        if (a.tag == TypeInfo::Tag::Bool || b.tag == TypeInfo::Tag::Bool)
          return a.tag == b.tag;
        if (a.tag == TypeInfo::Tag::Int || b.tag == TypeInfo::Tag::Int)
          return a.tag == b.tag;
        if (a.tag == TypeInfo::Tag::Enum && b.tag == TypeInfo::Tag::Enum)
          return a.domain->labels() == b.domain->labels();
        if (a.tag == TypeInfo::Tag::Enum) return label_in(b.label, *a.domain);
        if (b.tag == TypeInfo::Tag::Enum) return label_in(a.label, *b.domain);
        return true;
      }
    };

    CondResolver cond{scope, {}};
    for (const auto& [name, domain] : scope) {
      (void)name;
      if (domain.kind() == Domain::Kind::Enumeration)
        for (const auto& label : domain.labels()) cond.labels.insert(label);
    }
    auto [resolved, t] = cond.resolve(raw);
    if (t.tag != TypeInfo::Tag::Bool)
      fail(Errc::parse_error, "condition must be boolean");
    return resolved;
  } catch (const LexFailure& e) {
    fail(Errc::parse_error, format_diagnostic(e.diagnostic));
  } catch (const SyntaxFailure& e) {
    fail(Errc::parse_error, format_diagnostic(e.diagnostic));
  }
}

Domain parse_domain_text(std::string_view text) {
  try {
    Parser parser(lex(text, false));
    return parser.parse_domain_only();
  } catch (const LexFailure& e) {
    fail(Errc::parse_error, format_diagnostic(e.diagnostic));
  } catch (const SyntaxFailure& e) {
    fail(Errc::parse_error, format_diagnostic(e.diagnostic));
  }
}

VarDecl parse_vardecl_text(std::string_view text) {
  try {
    Parser parser(lex(text, false));
    return parser.parse_vardecl_only();
  } catch (const LexFailure& e) {
    fail(Errc::parse_error, format_diagnostic(e.diagnostic));
  } catch (const SyntaxFailure& e) {
    fail(Errc::parse_error, format_diagnostic(e.diagnostic));
  }
}

}  // namespace absprog
