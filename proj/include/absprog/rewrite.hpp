#ifndef ABSPROG_REWRITE_HPP
#define ABSPROG_REWRITE_HPP

#include "absprog/ast.hpp"

namespace absprog {

// Hoists every call expression into a fresh temporary plus a call statement
// in front of the containing statement, left to right, inner calls first;
// the expression site reads the temporary. Calls in while guards are
// re-issued after each body pass so every guard evaluation sees a fresh
// result. The output has no call expressions.
ProgramAst desugar_call_expressions(const ProgramAst& ast);

// Replaces every call statement by a block nest that creates fresh-renamed
// formals, binds the inputs, branches over the entry values of the outputs,
// runs the fresh-renamed callee body and copies the outputs back in one
// simultaneous assignment. Requires an acyclic call graph; call expressions
// are desugared first. Subprogram declarations are dropped from the result.
ProgramAst inline_calls(const ProgramAst& ast);

// Single statements stay as they are; anything else becomes one flat Seq.
StmtPtr seq_flat(std::vector<StmtPtr> items);

}  // namespace absprog

#endif
