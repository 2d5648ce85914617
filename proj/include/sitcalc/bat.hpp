#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sitcalc/formula.hpp"

namespace sitcalc {

struct SourceSpan {
    std::string file;
    int line = 0;
    int col = 0;

    std::string str() const;
};

// [exists ys] a = A(args) & context
struct EffectDisjunct {
    std::vector<std::string> exists_vars;
    Term action;
    Formula context = Formula::top();
    SourceSpan span;
};

// F(xs, do(a,s)) <-> gamma+ | F(xs, s) & !gamma-
struct SuccessorStateAxiom {
    std::string fluent;
    std::vector<std::string> head_vars;
    std::vector<EffectDisjunct> pos;
    std::vector<EffectDisjunct> neg;
    SourceSpan span;
};

struct ActionPrecondition {
    std::string action;
    std::vector<std::string> params;
    Formula condition = Formula::top();
    SourceSpan span;
};

struct BasicActionTheory {
    Signature sig;
    Theory init;
    std::vector<SourceSpan> init_spans;  // parallel to init.axioms when parsed
    std::map<std::string, SuccessorStateAxiom> ssas;
    std::map<std::string, ActionPrecondition> preconditions;
};

// Ignores source spans.
bool structurally_equal(const BasicActionTheory& a, const BasicActionTheory& b);

// SSA as a sentence over NOW and NEXT atoms with action variable `a`.
Formula gamma(const SuccessorStateAxiom& ssa, bool positive, const std::string& action_var = "a");
Formula ssa_formula(const SuccessorStateAxiom& ssa, const std::string& action_var = "a");

struct Violation {
    std::string code;
    std::string message;
    SourceSpan span;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;
    bool ok() const { return violations.empty(); }
};

// With `strict`, an action function shared by the pos and neg parts of one
// SSA is a violation; otherwise only an exact clash is.
ValidationReport validate(const BasicActionTheory& b, bool strict = false);

struct LocalEffectVerdict {
    bool local = true;
    std::vector<Violation> offenders;
};

LocalEffectVerdict is_local_effect(const SuccessorStateAxiom& ssa);
LocalEffectVerdict is_local_effect(const BasicActionTheory& b);

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

BasicActionTheory inline_preconditions(const BasicActionTheory& b);

struct TransformedSSA {
    std::string fluent;
    std::vector<std::string> head_vars;
    Formula gamma_pos;
    Formula gamma_neg;
};

// Substitute the ground action, rewrite action equalities under UNA and
// eliminate equality-bound quantifiers.
TransformedSSA transform_ssa(const SuccessorStateAxiom& ssa, const GroundAction& alpha);

using ArgTuple = std::vector<std::string>;

// Constant tuples bound to the head variables by some disjunct of gamma+ or gamma-.
std::set<ArgTuple> argument_set(const TransformedSSA& t);

// Omega: ground NOW atoms F(c) for every fluent F and tuple in its argument set.
std::set<GroundAtom> characteristic_set(const BasicActionTheory& b, const GroundAction& alpha);

// F(c)@next <-> gamma+[c] | F(c)@now & !gamma-[c] for each F(c) in omega.
Theory instantiate_ssas(const BasicActionTheory& b, const GroundAction& alpha, const std::set<GroundAtom>& omega);

// Check alpha against the declared actions.
void check_action(const BasicActionTheory& b, const GroundAction& alpha);

// Instantiated precondition of alpha (true when none is declared).
Formula precondition_of(const BasicActionTheory& b, const GroundAction& alpha);

}  // namespace sitcalc
