#ifndef ABSPROG_PARSER_HPP
#define ABSPROG_PARSER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absprog/ast.hpp"

namespace absprog {

struct Diagnostic {
  SourcePos pos;
  std::string message;
};

std::string format_diagnostic(const Diagnostic& d);

struct ParseOptions {
  // When set, subprogram bodies may read and write the host program's base
  // variables. Off by default: subprograms touch the world only through
  // their parameters.
  bool allow_globals = false;
};

struct ParseResult {
  std::optional<ProgramAst> ast;
  std::vector<Diagnostic> diagnostics;
  std::vector<Diagnostic> warnings;

  bool ok() const { return ast.has_value() && diagnostics.empty(); }
};

// Parses, scope-checks and type-checks a program. The returned AST is fully
// resolved: identifiers are classified, assignment targets and call outputs
// carry their declared domains.
ParseResult parse_program(std::string_view text, const ParseOptions& = {});

// Parses a boolean condition over the variables of a space. With
// allow_primed, primed names (x') refer to post-state values and are kept as
// variables named with a trailing quote. Calls are not allowed. Throws
// Error(parse_error) on any problem.
ExprPtr parse_condition(std::string_view text, const StateSpace& space,
                        bool allow_primed);

// Parses a DSL type such as "bool", "int[0..3]" or "enum{red,green}".
Domain parse_domain_text(std::string_view text);

// Parses "name:type". Used by the command line for --extend.
VarDecl parse_vardecl_text(std::string_view text);

}  // namespace absprog

#endif
