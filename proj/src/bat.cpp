#include "sitcalc/bat.hpp"

#include <algorithm>

#include "sitcalc/simplify.hpp"

namespace sitcalc {

std::string SourceSpan::str() const {
    return (file.empty() ? std::string("<input>") : file) + ":" + std::to_string(line) + ":" + std::to_string(col);
}

namespace {

const char* kInternalActionVar = "a$";

bool same_disjunct(const EffectDisjunct& a, const EffectDisjunct& b) {
    return a.exists_vars == b.exists_vars && a.action == b.action && a.context == b.context;
}

bool same_disjuncts(const std::vector<EffectDisjunct>& a, const std::vector<EffectDisjunct>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), same_disjunct);
}

std::vector<Term> vars_as_terms(const std::vector<std::string>& vs) {
    std::vector<Term> ts;
    for (const auto& v : vs) ts.push_back(Term::var(v));
    return ts;
}

void add(std::vector<Violation>& out, std::string code, std::string msg, const SourceSpan& span) {
    out.push_back({std::move(code), std::move(msg), span});
}

// Symbols used in `f` must be declared in `sig` with the same kind and arity.
void check_declared(const Formula& f, const Signature& sig, const SourceSpan& span, std::vector<Violation>& out) {
    Signature used = signature_of(f);
    for (const auto& [p, n] : used.fluents) {
        auto it = sig.fluents.find(p);
        if (it == sig.fluents.end()) add(out, "undeclared-symbol", "undeclared fluent " + p, span);
        else if (it->second != n) add(out, "arity", "fluent " + p + " used with arity " + std::to_string(n), span);
    }
    for (const auto& [p, n] : used.statics) {
        auto it = sig.statics.find(p);
        if (it == sig.statics.end()) add(out, "undeclared-symbol", "undeclared predicate " + p, span);
        else if (it->second != n) add(out, "arity", "predicate " + p + " used with arity " + std::to_string(n), span);
    }
    for (const auto& [p, n] : used.actions) {
        auto it = sig.actions.find(p);
        if (it == sig.actions.end()) add(out, "undeclared-symbol", "undeclared action " + p, span);
        else if (it->second != n) add(out, "arity", "action " + p + " used with arity " + std::to_string(n), span);
    }
    for (const auto& c : used.constants)
        if (!sig.constants.count(c)) add(out, "undeclared-symbol", "undeclared constant " + c, span);
}

bool has_action_eq(const Formula& f) {
    if (f.kind() == FormulaKind::ActionEq) return true;
    return std::any_of(f.children().begin(), f.children().end(), has_action_eq);
}

void check_disjunct(const SuccessorStateAxiom& ssa, const EffectDisjunct& d, const Signature& sig,
                    std::vector<Violation>& out) {
    std::set<std::string> scope(ssa.head_vars.begin(), ssa.head_vars.end());
    for (const auto& y : d.exists_vars) {
        if (scope.count(y)) add(out, "shadowing", "exists-variable " + y + " shadows a head variable", d.span);
        scope.insert(y);
    }
    if (d.action.kind != Term::Kind::Action) {
        add(out, "sort", "effect disjunct must compare with an action term", d.span);
        return;
    }
    auto it = sig.actions.find(d.action.name);
    if (it == sig.actions.end())
        add(out, "undeclared-symbol", "undeclared action " + d.action.name, d.span);
    else if (it->second != static_cast<int>(d.action.args.size()))
        add(out, "arity", "action " + d.action.name + " used with arity " + std::to_string(d.action.args.size()), d.span);
    for (const auto& t : d.action.args) {
        if (t.kind == Term::Kind::Var && !scope.count(t.name))
            add(out, "free-variable", "variable " + t.name + " is not bound in the effect disjunct", d.span);
        if (t.kind == Term::Kind::Const && !sig.constants.count(t.name))
            add(out, "undeclared-symbol", "undeclared constant " + t.name, d.span);
    }
    for (const auto& v : free_vars(d.context))
        if (!scope.count(v)) add(out, "free-variable", "context variable " + v + " is not bound", d.span);
    if (mentions_stage(d.context, Stage::Next) || has_action_eq(d.context))
        add(out, "non-uniform", "context of " + ssa.fluent + " is not uniform in the current situation", d.span);
    check_declared(d.context, sig, d.span, out);
}

void check_consistency(const SuccessorStateAxiom& ssa, bool strict, ValidationReport& r) {
    for (const auto& p : ssa.pos)
        for (const auto& n : ssa.neg) {
            if (p.action.name != n.action.name) continue;
            bool clash = p.exists_vars.empty() && n.exists_vars.empty() && p.action == n.action &&
                         p.context.kind() == FormulaKind::True && n.context.kind() == FormulaKind::True;
            std::string msg = "action " + p.action.name + " occurs in both effects of " + ssa.fluent;
            if (clash || strict) add(r.violations, "consistency", msg, n.span);
            else add(r.warnings, "consistency", msg, n.span);
        }
}

}  // namespace

bool structurally_equal(const BasicActionTheory& a, const BasicActionTheory& b) {
    if (!(a.sig == b.sig) || !(a.init == b.init)) return false;
    if (a.ssas.size() != b.ssas.size() || a.preconditions.size() != b.preconditions.size()) return false;
    for (const auto& [f, s] : a.ssas) {
        auto it = b.ssas.find(f);
        if (it == b.ssas.end()) return false;
        const auto& t = it->second;
        if (s.head_vars != t.head_vars || !same_disjuncts(s.pos, t.pos) || !same_disjuncts(s.neg, t.neg))
            return false;
    }
    for (const auto& [n, p] : a.preconditions) {
        auto it = b.preconditions.find(n);
        if (it == b.preconditions.end()) return false;
        if (p.params != it->second.params || !(p.condition == it->second.condition)) return false;
    }
    return true;
}

Formula gamma(const SuccessorStateAxiom& ssa, bool positive, const std::string& action_var) {
    std::vector<Formula> ds;
    for (const auto& d : positive ? ssa.pos : ssa.neg) {
        Formula eq = Formula::action_eq(Term::action_var(action_var), d.action);
        Formula body = d.context.kind() == FormulaKind::True ? eq : Formula::conj(eq, d.context);
        ds.push_back(Formula::exists(d.exists_vars, body));
    }
    return Formula::disj(ds);
}

Formula ssa_formula(const SuccessorStateAxiom& ssa, const std::string& action_var) {
    auto args = vars_as_terms(ssa.head_vars);
    Formula next = Formula::fluent(ssa.fluent, args, Stage::Next);
    Formula now = Formula::fluent(ssa.fluent, args, Stage::Now);
    Formula rhs = Formula::disj(gamma(ssa, true, action_var),
                                Formula::conj(now, Formula::negate(gamma(ssa, false, action_var))));
    return Formula::forall(ssa.head_vars, Formula::iff(next, rhs));
}

ValidationReport validate(const BasicActionTheory& b, bool strict) {
    ValidationReport r;
    for (const auto& [name, ssa] : b.ssas) {
        auto it = b.sig.fluents.find(name);
        if (it == b.sig.fluents.end())
            add(r.violations, "undeclared-symbol", "SSA for undeclared fluent " + name, ssa.span);
        else if (it->second != static_cast<int>(ssa.head_vars.size()))
            add(r.violations, "arity", "SSA head of " + name + " has wrong arity", ssa.span);
        std::set<std::string> heads(ssa.head_vars.begin(), ssa.head_vars.end());
        if (heads.size() != ssa.head_vars.size())
            add(r.violations, "duplicate-variable", "repeated head variable in SSA of " + name, ssa.span);
        for (const auto& d : ssa.pos) check_disjunct(ssa, d, b.sig, r.violations);
        for (const auto& d : ssa.neg) check_disjunct(ssa, d, b.sig, r.violations);
        check_consistency(ssa, strict, r);
        for (const auto& o : is_local_effect(ssa).offenders) r.warnings.push_back(o);
    }
    for (std::size_t i = 0; i < b.init.axioms.size(); ++i) {
        const Formula& ax = b.init.axioms[i];
        SourceSpan span = i < b.init_spans.size() ? b.init_spans[i] : SourceSpan{};
        for (const auto& v : free_vars(ax))
            add(r.violations, "free-variable", "free variable " + v + " in initial axiom", span);
        if (mentions_stage(ax, Stage::Next) || has_action_eq(ax))
            add(r.violations, "non-uniform", "initial axiom is not uniform in the initial situation", span);
        check_declared(ax, b.sig, span, r.violations);
    }
    for (const auto& [name, p] : b.preconditions) {
        auto it = b.sig.actions.find(name);
        if (it == b.sig.actions.end())
            add(r.violations, "undeclared-symbol", "precondition for undeclared action " + name, p.span);
        else if (it->second != static_cast<int>(p.params.size()))
            add(r.violations, "arity", "precondition of " + name + " has wrong arity", p.span);
        std::set<std::string> params(p.params.begin(), p.params.end());
        for (const auto& v : free_vars(p.condition))
            if (!params.count(v)) add(r.violations, "free-variable", "precondition variable " + v + " is not a parameter", p.span);
        if (mentions_stage(p.condition, Stage::Next) || has_action_eq(p.condition))
            add(r.violations, "non-uniform", "precondition of " + name + " is not uniform", p.span);
        check_declared(p.condition, b.sig, p.span, r.violations);
    }
    return r;
}

LocalEffectVerdict is_local_effect(const SuccessorStateAxiom& ssa) {
    LocalEffectVerdict v;
    auto check = [&](const std::vector<EffectDisjunct>& ds) {
        for (const auto& d : ds) {
            std::set<std::string> mentioned = term_vars(d.action);
            for (const auto& x : ssa.head_vars)
                if (!mentioned.count(x)) {
                    v.local = false;
                    add(v.offenders, "non-local-effect",
                        "action " + d.action.name + " in SSA of " + ssa.fluent + " does not mention " + x, d.span);
                }
        }
    };
    check(ssa.pos);
    check(ssa.neg);
    return v;
}

LocalEffectVerdict is_local_effect(const BasicActionTheory& b) {
    LocalEffectVerdict v;
    for (const auto& [name, ssa] : b.ssas) {
        auto s = is_local_effect(ssa);
        if (!s.local) v.local = false;
        v.offenders.insert(v.offenders.end(), s.offenders.begin(), s.offenders.end());
    }
    return v;
}

BasicActionTheory inline_preconditions(const BasicActionTheory& b) {
    BasicActionTheory out = b;
    auto inline_into = [&](EffectDisjunct& d) {
        auto it = b.preconditions.find(d.action.name);
        if (it == b.preconditions.end()) return;
        const auto& pre = it->second;
        if (pre.params.size() != d.action.args.size())
            throw ModelError("precondition of " + pre.action + " has the wrong number of parameters");
        std::set<std::string> params(pre.params.begin(), pre.params.end());
        for (const auto& v : free_vars(pre.condition))
            if (!params.count(v)) throw ModelError("precondition of " + pre.action + " has free variable " + v);
        Binding bind;
        for (std::size_t i = 0; i < pre.params.size(); ++i) bind[pre.params[i]] = d.action.args[i];
        Formula inst = substitute(pre.condition, bind);
        d.context = d.context.kind() == FormulaKind::True ? inst : Formula::conj(d.context, inst);
    };
    for (auto& [name, ssa] : out.ssas) {
        for (auto& d : ssa.pos) inline_into(d);
        for (auto& d : ssa.neg) inline_into(d);
    }
    return out;
}

void check_action(const BasicActionTheory& b, const GroundAction& alpha) {
    auto it = b.sig.actions.find(alpha.fn);
    if (it == b.sig.actions.end()) throw ModelError("undeclared action " + alpha.fn);
    if (it->second != static_cast<int>(alpha.args.size()))
        throw ModelError("action " + alpha.fn + " expects " + std::to_string(it->second) + " arguments");
    for (const auto& c : alpha.args)
        if (!b.sig.constants.count(c)) throw ModelError("undeclared constant " + c + " in action");
}

TransformedSSA transform_ssa(const SuccessorStateAxiom& ssa, const GroundAction& alpha) {
    auto le = is_local_effect(ssa);
    if (!le.local) throw ModelError(le.offenders.front().message);
    Binding act{{kInternalActionVar, alpha.term()}};
    auto transform = [&](bool positive) {
        Formula g = substitute(gamma(ssa, positive, kInternalActionVar), act);
        return simplify(rewrite_action_equalities(g));
    };
    return {ssa.fluent, ssa.head_vars, transform(true), transform(false)};
}

std::set<ArgTuple> argument_set(const TransformedSSA& t) {
    std::set<ArgTuple> out;
    auto scan = [&](const Formula& g) {
        for (const auto& d : disjuncts(g)) {
            if (d.kind() == FormulaKind::False) continue;
            auto cs = conjuncts(d);
            ArgTuple tuple;
            for (const auto& x : t.head_vars) {
                auto hit = std::find_if(cs.begin(), cs.end(), [&](const Formula& c) {
                    return c.kind() == FormulaKind::ObjEq && c.lhs().kind == Term::Kind::Var && c.lhs().name == x &&
                           c.rhs().kind == Term::Kind::Const;
                });
                if (hit == cs.end())
                    throw ModelError("head variable " + x + " of " + t.fluent + " is not bound to a constant");
                tuple.push_back(hit->rhs().name);
            }
            out.insert(tuple);
        }
    };
    scan(t.gamma_pos);
    scan(t.gamma_neg);
    return out;
}

std::set<GroundAtom> characteristic_set(const BasicActionTheory& b, const GroundAction& alpha) {
    check_action(b, alpha);
    std::set<GroundAtom> omega;
    for (const auto& [name, ssa] : b.ssas)
        for (const auto& tuple : argument_set(transform_ssa(ssa, alpha)))
            omega.insert(GroundAtom{true, name, tuple, Stage::Now});
    return omega;
}

Theory instantiate_ssas(const BasicActionTheory& b, const GroundAction& alpha, const std::set<GroundAtom>& omega) {
    std::map<std::string, TransformedSSA> cache;
    Theory out;
    for (const auto& atom : omega) {
        auto it = b.ssas.find(atom.pred);
        if (it == b.ssas.end()) throw ModelError("no successor state axiom for " + atom.pred);
        auto c = cache.find(atom.pred);
        if (c == cache.end()) c = cache.emplace(atom.pred, transform_ssa(it->second, alpha)).first;
        const TransformedSSA& t = c->second;
        if (t.head_vars.size() != atom.args.size()) throw ModelError("arity mismatch for " + atom.pred);
        Binding bind;
        for (std::size_t i = 0; i < t.head_vars.size(); ++i) bind[t.head_vars[i]] = Term::constant(atom.args[i]);
        Formula next = Formula::fluent(atom.pred, atom.terms(), Stage::Next);
        Formula now = Formula::fluent(atom.pred, atom.terms(), Stage::Now);
        Formula rhs = Formula::disj(substitute(t.gamma_pos, bind),
                                    Formula::conj(now, Formula::negate(substitute(t.gamma_neg, bind))));
        out.axioms.push_back(simplify(Formula::iff(next, rhs)));
    }
    return out;
}

Formula precondition_of(const BasicActionTheory& b, const GroundAction& alpha) {
    check_action(b, alpha);
    auto it = b.preconditions.find(alpha.fn);
    if (it == b.preconditions.end()) return Formula::top();
    Binding bind;
    for (std::size_t i = 0; i < it->second.params.size(); ++i)
        bind[it->second.params[i]] = Term::constant(alpha.args[i]);
    return simplify(substitute(it->second.condition, bind));
}

}  // namespace sitcalc
