#pragma once

#include <string>

#include "mivc/ast.hpp"

namespace mivc {

// Parses a complete program in the contract-annotated Lustre subset
// documented in docs/grammar.md. Throws ParseError on the first syntax
// error; there is no recovery.
ast::SourceModel parse_program(const std::string& source_text);

// Parses a single expression; used by tests and the REPL-ish tooling.
ast::ExprPtr parse_expression(const std::string& source_text);

}  // namespace mivc
