#pragma once

#include "sitcalc/formula.hpp"

namespace sitcalc {

// Object equality with a fixed orientation: variables before constants,
// otherwise by name. Returns true for syntactically identical sides.
Formula make_eq(const Term& a, const Term& b);

// Equivalence-preserving cleanup: constant folding, flattening and
// deduplication of and/or, equality propagation, and elimination of
// quantifiers bound by an equality. With `una`, distinct constants are unequal.
// Complementary disjuncts are kept so tautologies survive.
Formula simplify(const Formula& f, bool una = true);
Theory simplify(const Theory& t, bool una = true);

// A(t) = B(u) becomes false for distinct functions and the conjunction of
// argument equalities otherwise. Action-variable equalities are kept.
Formula rewrite_action_equalities(const Formula& f);

}  // namespace sitcalc
