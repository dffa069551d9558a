#ifndef ABSPROG_AST_HPP
#define ABSPROG_AST_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absprog/state_space.hpp"

namespace absprog {

struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class BinOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnOp { Neg, Not };

const char* binop_symbol(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Expression nodes come out of the parser fully resolved: plain identifiers
// have been classified as variable references or enumeration literals.
struct Expr {
  enum class Kind { BoolLit, IntLit, EnumLit, Var, Unary, Binary, Call };

  Kind kind;
  SourcePos pos;

  Value literal;               // BoolLit / IntLit / EnumLit
  std::string name;            // Var: variable; Call: callee
  UnOp un = UnOp::Neg;         // Unary
  BinOp bin = BinOp::Add;      // Binary
  std::vector<ExprPtr> args;   // Unary: 1, Binary: 2, Call: call arguments

  static ExprPtr make_bool(bool v, SourcePos pos = {});
  static ExprPtr make_int(std::int64_t v, SourcePos pos = {});
  static ExprPtr make_enum(std::string label, SourcePos pos = {});
  static ExprPtr make_var(std::string name, SourcePos pos = {});
  static ExprPtr make_unary(UnOp op, ExprPtr operand, SourcePos pos = {});
  static ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs,
                             SourcePos pos = {});
  static ExprPtr make_call(std::string callee, std::vector<ExprPtr> args,
                           SourcePos pos = {});
};

struct VarDecl {
  std::string name;
  Domain domain;
  SourcePos pos;
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct GuardedArm {
  ExprPtr guard;
  StmtPtr body;
};

struct Stmt {
  enum class Kind { Skip, Assign, Seq, If, While, Choose, VarBlock, Call };

  Kind kind;
  SourcePos pos;

  // Assign: pairwise distinct targets with their declared domains.
  std::vector<std::string> targets;
  std::vector<Domain> target_domains;
  std::vector<ExprPtr> values;

  std::vector<StmtPtr> children;   // Seq steps / Choose branches
  std::vector<GuardedArm> arms;    // If
  ExprPtr guard;                   // While
  StmtPtr body;                    // While / VarBlock

  // VarBlock: the local's declaration and initial value.
  std::string var;
  std::optional<Domain> var_domain;
  ExprPtr init;

  // Call: output host variables (with their domains), callee, input args.
  std::vector<std::string> outs;
  std::vector<Domain> out_domains;
  std::string callee;
  std::vector<ExprPtr> ins;

  static StmtPtr make_skip(SourcePos pos = {});
  static StmtPtr make_assign(std::vector<std::string> targets,
                             std::vector<Domain> target_domains,
                             std::vector<ExprPtr> values, SourcePos pos = {});
  static StmtPtr make_seq(std::vector<StmtPtr> steps, SourcePos pos = {});
  static StmtPtr make_if(std::vector<GuardedArm> arms, SourcePos pos = {});
  static StmtPtr make_while(ExprPtr guard, StmtPtr body, SourcePos pos = {});
  static StmtPtr make_choose(std::vector<StmtPtr> branches, SourcePos pos = {});
  static StmtPtr make_var_block(std::string var, Domain domain, ExprPtr init,
                                StmtPtr body, SourcePos pos = {});
  static StmtPtr make_call(std::vector<std::string> outs,
                           std::vector<Domain> out_domains, std::string callee,
                           std::vector<ExprPtr> ins, SourcePos pos = {});
};

// A subprogram is itself a program; its base space is the formal parameter
// list of its head (o1,...) := name(i1,...).
struct Subprogram {
  std::string name;
  std::vector<VarDecl> outs;
  std::vector<VarDecl> ins;
  StmtPtr body;
  SourcePos pos;
};

struct ProgramAst {
  StateSpace space;
  std::vector<Subprogram> subs;
  StmtPtr body;

  const Subprogram* find_sub(const std::string& name) const;
};

// Structural equality, ignoring source positions.
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);
bool structurally_equal(const StmtPtr& a, const StmtPtr& b);
bool structurally_equal(const ProgramAst& a, const ProgramAst& b);

// Every identifier that occurs in the program: space variables, formals,
// locals, referenced names and enumeration labels. Used to seed fresh-name
// generation.
std::set<std::string> collect_names(const ProgramAst& ast);

bool contains_call_expressions(const ProgramAst& ast);
bool contains_call_statements(const ProgramAst& ast);

}  // namespace absprog

#endif
