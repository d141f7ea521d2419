#pragma once

#include <string>

#include "mivc/transition_system.hpp"
#include "mivc/type_checker.hpp"

namespace mivc {

// Elaborates a type-checked model into a transition system with a named,
// selectable element set:
//   - the main node's contract assumptions become Assumption elements,
//   - its guarantees become the properties to prove,
//   - guarantees of called imported nodes become Guarantee elements,
//   - body equations become Equation elements,
//   - call glue (parameter/output bindings, contract constants) becomes a
//     NodeCall element per call site,
//   - `a -> b` contributes a to the initial conjuncts and b to the
//     transition conjuncts; `pre x` reads the previous step and is a fresh
//     unconstrained variable at step 0.
// Elaborating the same model twice yields identical ids, labels and
// formulas.
TransitionSystem elaborate(const TypedModel& model, const std::string& main);

}  // namespace mivc
