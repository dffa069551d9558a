#ifndef ABSPROG_PRINTER_HPP
#define ABSPROG_PRINTER_HPP

#include <string>

#include "absprog/ast.hpp"

namespace absprog {

// Canonical concrete syntax. Parsing the output of format_program yields a
// structurally equal AST.
std::string format_program(const ProgramAst& ast);
std::string format_stmt(const StmtPtr& s, int indent = 0);
std::string format_expr(const ExprPtr& e);

}  // namespace absprog

#endif
