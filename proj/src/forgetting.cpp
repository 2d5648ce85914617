#include "sitcalc/forgetting.hpp"

#include <algorithm>

#include "sitcalc/simplify.hpp"

namespace sitcalc {

namespace {

Formula with_children(const Formula& f, std::vector<Formula> kids) {
    switch (f.kind()) {
    case FormulaKind::Not: return Formula::negate(kids[0]);
    case FormulaKind::And: return Formula::conj(kids[0], kids[1]);
    case FormulaKind::Or: return Formula::disj(kids[0], kids[1]);
    case FormulaKind::Implies: return Formula::implies(kids[0], kids[1]);
    case FormulaKind::Iff: return Formula::iff(kids[0], kids[1]);
    case FormulaKind::Forall: return Formula::forall(f.name(), kids[0]);
    case FormulaKind::Exists: return Formula::exists(f.name(), kids[0]);
    default: return f;
    }
}

template <class Fn>
Formula map_atoms(const Formula& f, Fn fn) {
    if (f.is_atom()) return fn(f);
    if (f.children().empty()) return f;
    std::vector<Formula> kids;
    for (const auto& c : f.children()) kids.push_back(map_atoms(c, fn));
    return with_children(f, std::move(kids));
}

Formula replace_atom(const Formula& f, const Formula& g, const Formula& by) {
    return map_atoms(f, [&](const Formula& a) { return a == g ? by : a; });
}

bool mentions_pred(const Formula& f, const GroundAtom& g) {
    if (f.is_atom()) return g.matches(f);
    return std::any_of(f.children().begin(), f.children().end(), [&](const Formula& c) { return mentions_pred(c, g); });
}

bool mentions(const Formula& f, const Formula& g) {
    if (f == g) return true;
    return std::any_of(f.children().begin(), f.children().end(), [&](const Formula& c) { return mentions(c, g); });
}

void collect_atoms(const Formula& f, const std::string& pred, std::set<GroundAtom>& out, bool& nonground) {
    if (f.is_atom() && f.name() == pred) {
        GroundAtom a{f.kind() == FormulaKind::Fluent, pred, {}, f.stage()};
        for (const auto& t : f.terms()) {
            if (t.kind != Term::Kind::Const) {
                nonground = true;
                return;
            }
            a.args.push_back(t.name);
        }
        out.insert(a);
        return;
    }
    for (const auto& c : f.children()) collect_atoms(c, pred, out, nonground);
}

}  // namespace

Formula relativize(const Formula& f, const GroundAtom& g, bool una) {
    Formula ga = g.formula();
    const auto targs = g.terms();
    Formula out = map_atoms(f, [&](const Formula& a) {
        if (!g.matches(a) || a == ga) return a;
        std::vector<Formula> eqs;
        for (std::size_t i = 0; i < targs.size(); ++i) eqs.push_back(make_eq(targs[i], a.terms()[i]));
        Formula same = Formula::conj(eqs);
        return Formula::disj(Formula::conj(same, ga), Formula::conj(Formula::negate(same), a));
    });
    return simplify(out, una);
}

Theory forget_atom(const Theory& t, const GroundAtom& g, bool una) {
    Formula ga = g.formula();
    Theory out;
    std::vector<Formula> plus, minus;
    for (const auto& ax : t.axioms) {
        if (!mentions_pred(ax, g)) {
            out.axioms.push_back(ax);
            continue;
        }
        Formula rel = relativize(ax, g, una);
        if (!mentions(rel, ga)) {
            if (rel.kind() != FormulaKind::True) out.axioms.push_back(rel);
            continue;
        }
        plus.push_back(simplify(replace_atom(rel, ga, Formula::top()), una));
        minus.push_back(simplify(replace_atom(rel, ga, Formula::bottom()), una));
    }
    if (plus.empty()) return out;

    // (C & X) | (C & Y)  ~>  C & (X | Y)
    std::vector<Formula> pc, mc, common;
    for (const auto& p : plus)
        for (const auto& c : conjuncts(p)) pc.push_back(c);
    for (const auto& m : minus)
        for (const auto& c : conjuncts(m)) mc.push_back(c);
    std::vector<Formula> prest, mrest;
    for (const auto& c : pc) {
        if (std::find(mc.begin(), mc.end(), c) != mc.end()) {
            if (std::find(common.begin(), common.end(), c) == common.end()) common.push_back(c);
        } else {
            prest.push_back(c);
        }
    }
    for (const auto& c : mc)
        if (std::find(common.begin(), common.end(), c) == common.end()) mrest.push_back(c);

    std::vector<Formula> result = common;
    result.push_back(Formula::disj(Formula::conj(prest), Formula::conj(mrest)));
    Formula r = simplify(Formula::conj(result), una);
    if (r.kind() == FormulaKind::True) return out;
    for (const auto& c : conjuncts(r)) out.axioms.push_back(c);
    return out;
}

Theory forget_atoms(const Theory& t, const std::set<GroundAtom>& atoms, bool una) {
    Theory cur = t;
    for (const auto& g : atoms) cur = forget_atom(cur, g, una);
    return cur;
}

Theory forget_ground_symbol(const Theory& t, const std::string& pred, bool una) {
    std::set<GroundAtom> atoms;
    bool nonground = false;
    for (const auto& ax : t.axioms) collect_atoms(ax, pred, atoms, nonground);
    if (nonground) throw ForgettingError("predicate " + pred + " has non-ground occurrences");
    return forget_atoms(t, atoms, una);
}

}  // namespace sitcalc
