#pragma once

#include <set>
#include <stdexcept>

#include "sitcalc/formula.hpp"

namespace sitcalc {

class ForgettingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Replace every atom P(t') matching g = P(t) by (t = t' & g) | (t != t' & P(t')),
// so that the only occurrences of P(t) are literal occurrences of g.
Formula relativize(const Formula& f, const GroundAtom& g, bool una = true);

// Forget g in t: phi+ | phi-, with phi+/- replacing g by true/false in the
// relativized theory. Axioms unaffected by g stay in place; the rest are
// replaced by the conjuncts of the simplified disjunction.
Theory forget_atom(const Theory& t, const GroundAtom& g, bool una = true);

// Forget in canonical order (predicate, arguments, stage).
Theory forget_atoms(const Theory& t, const std::set<GroundAtom>& atoms, bool una = true);

// Nullary symbols are forgotten directly; otherwise every occurrence of the
// predicate must be ground and each ground atom is forgotten in turn.
Theory forget_ground_symbol(const Theory& t, const std::string& pred, bool una = true);

}  // namespace sitcalc
