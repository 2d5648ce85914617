#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sitcalc/bat.hpp"
#include "sitcalc/formula.hpp"
#include "sitcalc/oracle.hpp"
#include "sitcalc/surface.hpp"

namespace testsupport {

using namespace sitcalc;

inline std::string corpus(const std::string& name) { return std::string(SITCALC_CORPUS_DIR) + "/" + name; }

inline BasicActionTheory load(const std::string& name) { return load_bat(corpus(name)); }

inline Formula f(const std::string& text, const Signature& sig, std::set<std::string> vars = {}) {
    return parse_formula(text, sig, FormulaScope{std::move(vars), {}, true});
}

inline Theory theory(const std::vector<std::string>& axioms, const Signature& sig) {
    Theory t;
    for (const auto& a : axioms) t.axioms.push_back(f(a, sig));
    return t;
}

inline Theory slice(const Theory& t, std::size_t from, std::size_t to) {
    return Theory(std::vector<Formula>(t.axioms.begin() + from, t.axioms.begin() + to));
}

// Brute-force model enumeration, kept apart from the SAT-backed oracle.
// Constants denote distinct elements 0..k-1; relations range over every
// subset of tuples.
struct Relation {
    std::string pred;
    Stage stage;
    int arity;
};

inline std::vector<FiniteModel::Tuple> tuples(std::size_t n, int arity) {
    std::vector<FiniteModel::Tuple> out{{}};
    for (int i = 0; i < arity; ++i) {
        std::vector<FiniteModel::Tuple> next;
        for (const auto& t : out)
            for (std::size_t e = 0; e < n; ++e) {
                auto u = t;
                u.push_back(e);
                next.push_back(u);
            }
        out = next;
    }
    return out;
}

// Calls `visit` on every structure of the given size; stops early when it returns false.
inline void enumerate(const std::vector<std::string>& constants, std::size_t size, const std::vector<Relation>& rels,
                      const std::function<bool(const FiniteModel&)>& visit) {
    FiniteModel m;
    m.size = size;
    for (std::size_t i = 0; i < size; ++i)
        m.element_names.push_back(i < constants.size() ? constants[i] : "#" + std::to_string(i - constants.size()));
    for (std::size_t i = 0; i < constants.size(); ++i) m.constants[constants[i]] = i;
    std::vector<std::pair<FiniteModel::Key, FiniteModel::Tuple>> slots;
    for (const auto& r : rels) {
        FiniteModel::Key key{r.pred, r.stage};
        m.relations[key];
        for (const auto& t : tuples(size, r.arity)) slots.emplace_back(key, t);
    }
    if (slots.size() > 22) throw std::runtime_error("brute-force enumeration too large");
    for (unsigned long mask = 0; mask < (1ul << slots.size()); ++mask) {
        for (auto& [k, s] : m.relations) s.clear();
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) m.relations[slots[i].first].insert(slots[i].second);
        if (!visit(m)) return;
    }
}

inline std::vector<Relation> relations_of(const Signature& sig, std::set<Stage> stages) {
    std::vector<Relation> out;
    for (const auto& [p, n] : sig.statics) out.push_back({p, Stage::Now, n});
    for (const auto& [p, n] : sig.fluents)
        for (auto s : stages) out.push_back({p, s, n});
    return out;
}

// Random formulas over constants c1..ck, unary P, binary R, and variables x, y.
class RandomTheory {
public:
    explicit RandomTheory(unsigned seed) : rng_(seed) {}

    Signature signature(bool fluent_p = false) {
        Signature s;
        int k = pick(1, 3);
        for (int i = 1; i <= k; ++i) s.constants.insert("c" + std::to_string(i));
        if (fluent_p) s.fluents["P"] = 1;
        else s.statics["P"] = 1;
        if (pick(0, 1)) s.statics["R"] = 2;
        return s;
    }

    Term term(const Signature& s, const std::vector<std::string>& vars) {
        std::vector<Term> choices;
        for (const auto& c : s.constants) choices.push_back(Term::constant(c));
        for (const auto& v : vars) choices.push_back(Term::var(v));
        return choices[pick(0, static_cast<int>(choices.size()) - 1)];
    }

    Formula atom(const Signature& s, const std::vector<std::string>& vars) {
        bool has_p = s.statics.count("P") || s.fluents.count("P");
        bool has_r = s.statics.count("R") > 0;
        int r = pick(0, 9);
        if (r == 9 || (!has_p && !has_r)) return Formula::eq(term(s, vars), term(s, vars));
        if (has_p && (r < 5 || !has_r)) {
            std::vector<Term> a{term(s, vars)};
            return s.fluents.count("P") ? Formula::fluent("P", a, Stage::Now) : Formula::static_atom("P", a);
        }
        return Formula::static_atom("R", {term(s, vars), term(s, vars)});
    }

    Formula formula(const Signature& s, int depth, std::vector<std::string> vars = {}) {
        if (depth == 0) return pick(0, 3) ? atom(s, vars) : Formula::negate(atom(s, vars));
        switch (pick(0, 5)) {
        case 0: return Formula::negate(formula(s, depth - 1, vars));
        case 1: return Formula::conj(formula(s, depth - 1, vars), formula(s, depth - 1, vars));
        case 2: return Formula::disj(formula(s, depth - 1, vars), formula(s, depth - 1, vars));
        case 3: return Formula::implies(formula(s, depth - 1, vars), formula(s, depth - 1, vars));
        default: {
            if (vars.size() >= 2) return formula(s, depth - 1, vars);
            std::string v = vars.empty() ? "x" : "y";
            vars.push_back(v);
            Formula body = formula(s, depth - 1, vars);
            return pick(0, 1) ? Formula::forall(v, body) : Formula::exists(v, body);
        }
        }
    }

    Theory theory(const Signature& s, int axioms = -1) {
        Theory t;
        int n = axioms < 0 ? pick(1, 3) : axioms;
        for (int i = 0; i < n; ++i) t.axioms.push_back(formula(s, pick(1, 3)));
        return t;
    }

    GroundAtom ground_atom(const Signature& s, const std::string& pred = "") {
        std::string p = pred;
        if (p.empty()) p = (s.statics.count("R") && pick(0, 1)) ? "R" : "P";
        int arity = p == "R" ? 2 : 1;
        std::vector<std::string> cs(s.constants.begin(), s.constants.end());
        GroundAtom g;
        g.fluent = s.fluents.count(p) > 0;
        g.pred = p;
        for (int i = 0; i < arity; ++i) g.args.push_back(cs[pick(0, static_cast<int>(cs.size()) - 1)]);
        return g;
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937 rng_;
};

}  // namespace testsupport
