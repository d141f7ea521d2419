#pragma once

#include <optional>
#include <string>

#include "mivc/ast.hpp"

namespace mivc {

// A SourceModel whose expressions all carry types and whose structural
// invariants (declaration, arity, contract reference rules, acyclic call
// graph) have been verified.
struct TypedModel {
  ast::SourceModel model;
};

TypedModel type_check(ast::SourceModel model);

// The analysis entry node: the --main flag if given, otherwise the first
// non-imported node.
std::string resolve_main(const ast::SourceModel& model,
                         const std::optional<std::string>& cli_main);

}  // namespace mivc
