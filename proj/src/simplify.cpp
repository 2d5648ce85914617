#include "sitcalc/simplify.hpp"

#include <algorithm>

namespace sitcalc {

namespace {

int term_rank(const Term& t) { return t.kind == Term::Kind::Var ? 0 : 1; }

bool is_literal(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Fluent:
    case FormulaKind::Static:
    case FormulaKind::ObjEq:
    case FormulaKind::ActionEq: return true;
    case FormulaKind::Not: return is_literal(f.child());
    default: return false;
    }
}

Formula complement(const Formula& f) {
    return f.kind() == FormulaKind::Not ? f.child() : Formula::negate(f);
}

bool contains(const std::vector<Formula>& v, const Formula& f) {
    return std::find(v.begin(), v.end(), f) != v.end();
}

void push_unique(std::vector<Formula>& v, const Formula& f) {
    if (!contains(v, f)) v.push_back(f);
}

// v = c with v a variable and c a constant (orientation from make_eq).
bool var_const_eq(const Formula& f, std::string& v, Term& c) {
    if (f.kind() != FormulaKind::ObjEq) return false;
    if (f.lhs().kind != Term::Kind::Var || f.rhs().kind != Term::Kind::Const) return false;
    v = f.lhs().name;
    c = f.rhs();
    return true;
}

// Equality binding `v` to some other term.
std::optional<Term> binds(const Formula& f, const std::string& v) {
    if (f.kind() != FormulaKind::ObjEq) return std::nullopt;
    const Term& l = f.lhs();
    const Term& r = f.rhs();
    if (l.kind == Term::Kind::Var && l.name == v && !(r.kind == Term::Kind::Var && r.name == v)) return r;
    if (r.kind == Term::Kind::Var && r.name == v && !(l.kind == Term::Kind::Var && l.name == v)) return l;
    return std::nullopt;
}

class Simplifier {
public:
    explicit Simplifier(bool una) : una_(una) {}

    Formula run(const Formula& f) {
        switch (f.kind()) {
        case FormulaKind::Fluent:
        case FormulaKind::Static:
        case FormulaKind::True:
        case FormulaKind::False: return f;
        case FormulaKind::ObjEq: return eq(f);
        case FormulaKind::ActionEq: return f.lhs() == f.rhs() ? Formula::top() : f;
        case FormulaKind::Not: return negation(run(f.child()));
        case FormulaKind::And: return and_of({run(f.child(0)), run(f.child(1))});
        case FormulaKind::Or: return or_of({run(f.child(0)), run(f.child(1))});
        case FormulaKind::Implies: return implication(run(f.child(0)), run(f.child(1)));
        case FormulaKind::Iff: return biconditional(run(f.child(0)), run(f.child(1)));
        case FormulaKind::Forall: return forall(f.name(), run(f.body()));
        case FormulaKind::Exists: return exists(f.name(), run(f.body()));
        }
        return f;
    }

private:
    bool una_;

    Formula eq(const Formula& f) {
        Formula e = make_eq(f.lhs(), f.rhs());
        if (e.kind() == FormulaKind::ObjEq && una_ && e.lhs().kind == Term::Kind::Const &&
            e.rhs().kind == Term::Kind::Const)
            return Formula::bottom();
        return e;
    }

    static Formula negation(const Formula& s) {
        if (s.kind() == FormulaKind::True) return Formula::bottom();
        if (s.kind() == FormulaKind::False) return Formula::top();
        if (s.kind() == FormulaKind::Not) return s.child();
        return Formula::negate(s);
    }

    Formula and_of(const std::vector<Formula>& parts) {
        std::vector<Formula> items;
        for (const auto& p : parts)
            for (const auto& c : conjuncts(p)) {
                if (c.kind() == FormulaKind::True) continue;
                if (c.kind() == FormulaKind::False) return Formula::bottom();
                push_unique(items, c);
            }
        for (const auto& c : items)
            if (contains(items, complement(c))) return Formula::bottom();

        // x = c & phi(x)  ~>  x = c & phi(c)
        bool changed = false;
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string v;
            Term c;
            if (!var_const_eq(items[i], v, c)) continue;
            for (std::size_t j = 0; j < items.size(); ++j) {
                if (j == i || !free_vars(items[j]).count(v)) continue;
                items[j] = run(substitute(items[j], Binding{{v, c}}));
                changed = true;
            }
        }
        if (changed) return and_of({Formula::conj(items)});

        // L & (~L | B)  ~>  L & B,   L & (L | B)  ~>  L
        for (const auto& lit : std::vector<Formula>(items)) {
            Formula neg = complement(lit);
            for (auto& it : items) {
                if (it.kind() != FormulaKind::Or) continue;
                auto ds = disjuncts(it);
                if (contains(ds, lit)) {
                    it = Formula::top();
                    changed = true;
                    continue;
                }
                auto n = std::erase(ds, neg);
                if (n) {
                    it = or_of(ds);
                    changed = true;
                }
            }
        }
        if (changed) return and_of({Formula::conj(items)});
        return Formula::conj(items);
    }

    Formula or_of(const std::vector<Formula>& parts) {
        std::vector<Formula> items;
        for (const auto& p : parts)
            for (const auto& d : disjuncts(p)) {
                if (d.kind() == FormulaKind::False) continue;
                if (d.kind() == FormulaKind::True) return Formula::top();
                push_unique(items, d);
            }
        if (items.empty()) return Formula::bottom();

        // x != c | phi(x)  ~>  x != c | phi(c)
        bool changed = false;
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string v;
            Term c;
            if (items[i].kind() != FormulaKind::Not || !var_const_eq(items[i].child(), v, c)) continue;
            for (std::size_t j = 0; j < items.size(); ++j) {
                if (j == i || !free_vars(items[j]).count(v)) continue;
                items[j] = run(substitute(items[j], Binding{{v, c}}));
                changed = true;
            }
        }
        if (changed) return or_of({Formula::disj(items)});

        // L | (~L & B)  ~>  L | B,   L | (L & B)  ~>  L
        for (const auto& lit : std::vector<Formula>(items)) {
            Formula neg = complement(lit);
            for (auto& it : items) {
                if (it.kind() != FormulaKind::And) continue;
                auto cs = conjuncts(it);
                if (contains(cs, lit)) {
                    it = Formula::bottom();
                    changed = true;
                    continue;
                }
                auto n = std::erase(cs, neg);
                if (n) {
                    it = and_of(cs);
                    changed = true;
                }
            }
        }
        if (changed) return or_of({Formula::disj(items)});
        return Formula::disj(items);
    }

    Formula implication(const Formula& a, const Formula& b) {
        if (a.kind() == FormulaKind::True) return b;
        if (a.kind() == FormulaKind::False) return Formula::top();
        if (b.kind() == FormulaKind::True) return Formula::top();
        if (b.kind() == FormulaKind::False) return negation(a);
        return Formula::implies(a, b);
    }

    Formula biconditional(const Formula& a, const Formula& b) {
        if (a.kind() == FormulaKind::True) return b;
        if (b.kind() == FormulaKind::True) return a;
        if (a.kind() == FormulaKind::False) return negation(b);
        if (b.kind() == FormulaKind::False) return negation(a);
        return Formula::iff(a, b);
    }

    // exists v (... & v = t & ...)  ~>  (...)[t/v]
    std::optional<Formula> eliminate_exists(const std::string& v, const Formula& body) {
        auto cs = conjuncts(body);
        for (std::size_t i = 0; i < cs.size(); ++i) {
            auto t = binds(cs[i], v);
            if (!t) continue;
            cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
            return run(substitute(Formula::conj(cs), Binding{{v, *t}}));
        }
        for (const auto& d : disjuncts(body))
            if (binds(d, v)) return Formula::top();
        return std::nullopt;
    }

    // forall v (v = t -> phi), forall v (v != t | phi)  ~>  phi[t/v]
    std::optional<Formula> eliminate_forall(const std::string& v, const Formula& body) {
        if (body.kind() == FormulaKind::Implies) {
            auto cs = conjuncts(body.child(0));
            for (std::size_t i = 0; i < cs.size(); ++i) {
                auto t = binds(cs[i], v);
                if (!t) continue;
                cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(i));
                return run(substitute(Formula::implies(Formula::conj(cs), body.child(1)), Binding{{v, *t}}));
            }
        }
        auto ds = disjuncts(body);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (ds[i].kind() != FormulaKind::Not) continue;
            auto t = binds(ds[i].child(), v);
            if (!t) continue;
            ds.erase(ds.begin() + static_cast<std::ptrdiff_t>(i));
            return run(substitute(Formula::disj(ds), Binding{{v, *t}}));
        }
        for (const auto& c : conjuncts(body))
            if (c.kind() == FormulaKind::Not && binds(c.child(), v)) return Formula::bottom();
        return std::nullopt;
    }

    Formula exists(const std::string& v, const Formula& body) {
        if (body.kind() == FormulaKind::True || body.kind() == FormulaKind::False) return body;
        if (!free_vars(body).count(v)) return body;
        if (auto r = eliminate_exists(v, body)) return *r;
        // Distribute over a disjunction when that lets some disjunct drop the quantifier.
        auto ds = disjuncts(body);
        if (ds.size() > 1) {
            bool helps = std::any_of(ds.begin(), ds.end(), [&](const Formula& d) {
                return !free_vars(d).count(v) || eliminate_exists(v, d).has_value();
            });
            if (helps) {
                std::vector<Formula> parts;
                for (const auto& d : ds) parts.push_back(exists(v, d));
                return or_of(parts);
            }
        }
        return Formula::exists(v, body);
    }

    Formula forall(const std::string& v, const Formula& body) {
        if (body.kind() == FormulaKind::True || body.kind() == FormulaKind::False) return body;
        if (!free_vars(body).count(v)) return body;
        if (auto r = eliminate_forall(v, body)) return *r;
        auto cs = conjuncts(body);
        if (cs.size() > 1) {
            bool helps = std::any_of(cs.begin(), cs.end(), [&](const Formula& c) {
                return !free_vars(c).count(v) || eliminate_forall(v, c).has_value();
            });
            if (helps) {
                std::vector<Formula> parts;
                for (const auto& c : cs) parts.push_back(forall(v, c));
                return and_of(parts);
            }
        }
        return Formula::forall(v, body);
    }
};

}  // namespace

Formula make_eq(const Term& a, const Term& b) {
    if (a == b) return Formula::top();
    int ra = term_rank(a), rb = term_rank(b);
    if (ra < rb || (ra == rb && a.name < b.name)) return Formula::eq(a, b);
    return Formula::eq(b, a);
}

Formula simplify(const Formula& f, bool una) {
    Simplifier s(una);
    Formula cur = s.run(f);
    for (int i = 0; i < 16; ++i) {
        Formula next = s.run(cur);
        if (next == cur) break;
        cur = next;
    }
    return cur;
}

Theory simplify(const Theory& t, bool una) {
    Theory out;
    for (const auto& a : t.axioms) out.axioms.push_back(simplify(a, una));
    return out;
}

Formula rewrite_action_equalities(const Formula& f) {
    if (f.kind() == FormulaKind::ActionEq) {
        const Term& l = f.lhs();
        const Term& r = f.rhs();
        if (l.kind != Term::Kind::Action || r.kind != Term::Kind::Action) return f;
        if (l.name != r.name || l.args.size() != r.args.size()) return Formula::bottom();
        std::vector<Formula> eqs;
        for (std::size_t i = 0; i < l.args.size(); ++i) eqs.push_back(make_eq(l.args[i], r.args[i]));
        return Formula::conj(eqs);
    }
    if (f.children().empty()) return f;
    std::vector<Formula> kids;
    for (const auto& c : f.children()) kids.push_back(rewrite_action_equalities(c));
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

}  // namespace sitcalc
