#include "sitcalc/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "sat.hpp"
#include "sitcalc/surface.hpp"

namespace sitcalc {

namespace {

using sat::Lit;

struct Deadline {
    std::optional<sat::Clock::time_point> at;

    explicit Deadline(long ms) {
        if (ms > 0) at = sat::Clock::now() + std::chrono::milliseconds(ms);
    }
    void check() const {
        if (at && sat::Clock::now() > *at) throw BudgetExceeded("oracle budget exceeded");
    }
};

struct PredInfo {
    std::string name;
    bool fluent;
    int arity;
};

struct Universe {
    std::vector<std::string> constants;
    std::map<std::string, std::size_t> const_index;
    std::vector<PredInfo> preds;
    std::set<Stage> stages;
    bool una = true;
    int max_extra = 1;

    std::vector<std::size_t> domain_sizes() const {
        std::vector<std::size_t> out;
        std::size_t k = constants.size();
        if (una) {
            for (int j = 0; j <= max_extra; ++j)
                if (k + static_cast<std::size_t>(j) > 0) out.push_back(k + static_cast<std::size_t>(j));
        } else {
            for (std::size_t n = 1; n <= k + static_cast<std::size_t>(max_extra); ++n) out.push_back(n);
        }
        return out;
    }
};

void stages_in(const Formula& f, std::set<Stage>& out) {
    if (f.kind() == FormulaKind::Fluent) out.insert(f.stage());
    for (const auto& c : f.children()) stages_in(c, out);
}

Universe make_universe(const std::vector<Formula>& fs, const OracleConfig& cfg, const Signature& extra = {}) {
    Signature sig = cfg.vocabulary.unite(extra);
    std::set<Stage> stages;
    for (const auto& f : fs) {
        Signature s = signature_of(f);
        for (const auto& [p, n] : s.fluents) {
            auto it = sig.fluents.find(p);
            if ((it != sig.fluents.end() && it->second != n) || sig.statics.count(p))
                throw OracleError("inconsistent use of symbol " + p);
        }
        for (const auto& [p, n] : s.statics) {
            auto it = sig.statics.find(p);
            if ((it != sig.statics.end() && it->second != n) || sig.fluents.count(p))
                throw OracleError("inconsistent use of symbol " + p);
        }
        sig = sig.unite(s);
        stages_in(f, stages);
    }
    Universe u;
    std::set<std::string> cs = sig.constants;
    cs.insert(cfg.constants.begin(), cfg.constants.end());
    u.constants.assign(cs.begin(), cs.end());
    for (std::size_t i = 0; i < u.constants.size(); ++i) u.const_index[u.constants[i]] = i;
    for (const auto& [p, n] : sig.fluents) u.preds.push_back({p, true, n});
    for (const auto& [p, n] : sig.statics) u.preds.push_back({p, false, n});
    std::sort(u.preds.begin(), u.preds.end(), [](const PredInfo& a, const PredInfo& b) { return a.name < b.name; });
    if (cfg.stages) u.stages = *cfg.stages;
    else u.stages = stages.empty() ? std::set<Stage>{Stage::Now} : stages;
    u.una = cfg.una;
    u.max_extra = cfg.max_extra;
    return u;
}

std::vector<Formula> formulas_of(std::initializer_list<const Theory*> ts) {
    std::vector<Formula> out;
    for (const auto* t : ts)
        for (const auto& a : t->axioms) out.push_back(a);
    return out;
}

void all_tuples(std::size_t n, int arity, std::vector<FiniteModel::Tuple>& out) {
    FiniteModel::Tuple t(static_cast<std::size_t>(arity), 0);
    for (;;) {
        out.push_back(t);
        int i = arity - 1;
        while (i >= 0 && t[static_cast<std::size_t>(i)] + 1 == n) t[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++t[static_cast<std::size_t>(i)];
    }
}

// Atom override used to flip a ground atom: where the atom's arguments
// denote the same elements as g's, `value` is used instead.
struct Override {
    GroundAtom g;
    Lit value;
};

class Grounding {
public:
    using AtomKey = std::tuple<std::string, Stage, FiniteModel::Tuple>;

    Grounding(const Universe& u, std::size_t n, const Deadline& dl) : u_(u), n_(n), dl_(dl) {
        true_lit_ = sat::pos(solver.new_var());
        solver.add_clause({true_lit_});
        if (!u_.una) {
            for (std::size_t c = 0; c < u_.constants.size(); ++c) {
                std::vector<Lit> row;
                for (std::size_t e = 0; e < n_; ++e) row.push_back(sat::pos(solver.new_var()));
                solver.add_clause(row);
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = i + 1; j < n_; ++j) solver.add_clause({sat::negate(row[i]), sat::negate(row[j])});
                choice_.push_back(row);
            }
        }
    }

    sat::Solver solver;

    std::size_t size() const { return n_; }
    Lit top() const { return true_lit_; }
    Lit bottom() const { return sat::negate(true_lit_); }

    Lit atom(const std::string& pred, Stage stage, const FiniteModel::Tuple& t) {
        AtomKey key{pred, stage, t};
        auto it = atoms_.find(key);
        if (it != atoms_.end()) return it->second;
        Lit l = sat::pos(solver.new_var());
        atoms_.emplace(key, l);
        return l;
    }

    const std::map<AtomKey, Lit>& atoms() const { return atoms_; }
    const std::vector<std::vector<Lit>>& choice() const { return choice_; }

    void allocate_all() {
        for (const auto& p : u_.preds) {
            std::vector<FiniteModel::Tuple> ts;
            all_tuples(n_, p.arity, ts);
            if (p.fluent) {
                for (Stage s : u_.stages)
                    for (const auto& t : ts) atom(p.name, s, t);
            } else {
                for (const auto& t : ts) atom(p.name, Stage::Now, t);
            }
        }
    }

    Lit mk_and(std::vector<Lit> ls) {
        std::vector<Lit> keep;
        for (Lit l : ls) {
            if (l == true_lit_) continue;
            if (l == bottom()) return bottom();
            keep.push_back(l);
        }
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        for (std::size_t i = 0; i + 1 < keep.size(); ++i)
            if (keep[i + 1] == sat::negate(keep[i])) return bottom();
        if (keep.empty()) return true_lit_;
        if (keep.size() == 1) return keep[0];
        auto it = and_cache_.find(keep);
        if (it != and_cache_.end()) return it->second;
        Lit g = sat::pos(solver.new_var());
        std::vector<Lit> big{g};
        for (Lit l : keep) {
            solver.add_clause({sat::negate(g), l});
            big.push_back(sat::negate(l));
        }
        solver.add_clause(big);
        and_cache_.emplace(keep, g);
        return g;
    }

    Lit mk_or(std::vector<Lit> ls) {
        for (auto& l : ls) l = sat::negate(l);
        return sat::negate(mk_and(std::move(ls)));
    }

    Lit mk_iff(Lit a, Lit b) { return mk_and({mk_or({sat::negate(a), b}), mk_or({a, sat::negate(b)})}); }

    using Values = std::vector<std::pair<Lit, std::size_t>>;
    using Env = std::map<std::string, std::size_t>;

    Values eval(const Term& t, const Env& env) {
        if (t.kind == Term::Kind::Var) {
            auto it = env.find(t.name);
            if (it == env.end()) throw OracleError("free variable " + t.name);
            return {{true_lit_, it->second}};
        }
        if (t.kind != Term::Kind::Const) throw OracleError("action term in object position");
        std::size_t c = u_.const_index.at(t.name);
        if (u_.una) return {{true_lit_, c}};
        Values out;
        for (std::size_t e = 0; e < n_; ++e) out.push_back({choice_[c][e], e});
        return out;
    }

    // Lit that holds when the ground atom g denotes tuple t.
    Lit denotes(const GroundAtom& g, const FiniteModel::Tuple& t) {
        std::vector<Lit> parts;
        for (std::size_t i = 0; i < g.args.size(); ++i) {
            std::size_t c = u_.const_index.at(g.args[i]);
            if (u_.una) {
                if (c != t[i]) return bottom();
            } else {
                parts.push_back(choice_[c][t[i]]);
            }
        }
        return mk_and(parts);
    }

    Lit atom_value(const Formula& f, const FiniteModel::Tuple& t) {
        Stage s = f.kind() == FormulaKind::Fluent ? f.stage() : Stage::Now;
        Lit base = atom(f.name(), s, t);
        if (!override_ || !override_->g.matches(f)) return base;
        Lit m = denotes(override_->g, t);
        return mk_or({mk_and({m, override_->value}), mk_and({sat::negate(m), base})});
    }

    Lit ground(const Formula& f, Env& env) {
        switch (f.kind()) {
        case FormulaKind::True: return true_lit_;
        case FormulaKind::False: return bottom();
        case FormulaKind::Fluent:
        case FormulaKind::Static: {
            std::vector<Values> vals;
            for (const auto& t : f.terms()) vals.push_back(eval(t, env));
            std::vector<Lit> options;
            FiniteModel::Tuple tuple(vals.size());
            std::vector<Lit> conds;
            combos(vals, 0, tuple, conds, [&](const FiniteModel::Tuple& tp, const std::vector<Lit>& cs) {
                std::vector<Lit> parts = cs;
                parts.push_back(atom_value(f, tp));
                options.push_back(mk_and(parts));
            });
            return mk_or(options);
        }
        case FormulaKind::ObjEq: return equal(f.lhs(), f.rhs(), env);
        case FormulaKind::ActionEq: {
            const Term& l = f.lhs();
            const Term& r = f.rhs();
            if (l.kind != Term::Kind::Action || r.kind != Term::Kind::Action)
                throw OracleError("action variable in oracle input");
            if (l.name != r.name || l.args.size() != r.args.size()) return bottom();
            std::vector<Lit> parts;
            for (std::size_t i = 0; i < l.args.size(); ++i) parts.push_back(equal(l.args[i], r.args[i], env));
            return mk_and(parts);
        }
        case FormulaKind::Not: return sat::negate(ground(f.child(), env));
        case FormulaKind::And: return mk_and({ground(f.child(0), env), ground(f.child(1), env)});
        case FormulaKind::Or: return mk_or({ground(f.child(0), env), ground(f.child(1), env)});
        case FormulaKind::Implies: return mk_or({sat::negate(ground(f.child(0), env)), ground(f.child(1), env)});
        case FormulaKind::Iff: return mk_iff(ground(f.child(0), env), ground(f.child(1), env));
        case FormulaKind::Forall:
        case FormulaKind::Exists: {
            dl_.check();
            std::optional<std::size_t> saved;
            if (auto it = env.find(f.name()); it != env.end()) saved = it->second;
            std::vector<Lit> parts;
            for (std::size_t e = 0; e < n_; ++e) {
                env[f.name()] = e;
                parts.push_back(ground(f.body(), env));
            }
            if (saved) env[f.name()] = *saved;
            else env.erase(f.name());
            return f.kind() == FormulaKind::Forall ? mk_and(parts) : mk_or(parts);
        }
        }
        return true_lit_;
    }

    Lit ground(const Formula& f) {
        Env env;
        return ground(f, env);
    }

    Lit ground(const Theory& t) {
        std::vector<Lit> parts;
        for (const auto& a : t.axioms) parts.push_back(ground(a));
        return mk_and(parts);
    }

    void set_override(std::optional<Override> o) { override_ = std::move(o); }

    sat::Result solve(const std::vector<Lit>& assumptions = {}) {
        auto r = solver.solve(assumptions, dl_.at);
        if (r == sat::Result::Unknown) throw BudgetExceeded("oracle budget exceeded");
        return r;
    }

    bool value(Lit l) const { return solver.model_value(sat::var_of(l)) != sat::sign_of(l); }

    std::vector<std::string> element_names() const {
        std::vector<std::string> names;
        for (std::size_t e = 0; e < n_; ++e) {
            if (u_.una && e < u_.constants.size()) names.push_back(u_.constants[e]);
            else names.push_back("#" + std::to_string(u_.una ? e - u_.constants.size() + 1 : e + 1));
        }
        return names;
    }

    FiniteModel extract() const {
        FiniteModel m;
        m.size = n_;
        m.element_names = element_names();
        for (std::size_t c = 0; c < u_.constants.size(); ++c) {
            if (u_.una) {
                m.constants[u_.constants[c]] = c;
            } else {
                for (std::size_t e = 0; e < n_; ++e)
                    if (value(choice_[c][e])) m.constants[u_.constants[c]] = e;
            }
        }
        for (const auto& p : u_.preds) {
            if (p.fluent)
                for (Stage s : u_.stages) m.relations[{p.name, s}];
            else
                m.relations[{p.name, Stage::Now}];
        }
        for (const auto& [key, l] : atoms_)
            if (value(l)) m.relations[{std::get<0>(key), std::get<1>(key)}].insert(std::get<2>(key));
        return m;
    }

private:
    const Universe& u_;
    std::size_t n_;
    const Deadline& dl_;
    Lit true_lit_;
    std::map<AtomKey, Lit> atoms_;
    std::vector<std::vector<Lit>> choice_;
    std::map<std::vector<Lit>, Lit> and_cache_;
    std::optional<Override> override_;

    template <class Fn>
    void combos(const std::vector<Values>& vals, std::size_t i, FiniteModel::Tuple& tuple, std::vector<Lit>& conds,
                Fn&& fn) {
        if (i == vals.size()) {
            fn(tuple, conds);
            return;
        }
        for (const auto& [l, e] : vals[i]) {
            tuple[i] = e;
            conds.push_back(l);
            combos(vals, i + 1, tuple, conds, fn);
            conds.pop_back();
        }
    }

    Lit equal(const Term& a, const Term& b, const Env& env) {
        Values va = eval(a, env), vb = eval(b, env);
        std::vector<Lit> options;
        for (const auto& [la, ea] : va)
            for (const auto& [lb, eb] : vb)
                if (ea == eb) options.push_back(mk_and({la, lb}));
        return mk_or(options);
    }
};

void check_sentences(const std::vector<Formula>& fs) {
    for (const auto& f : fs) {
        auto fv = free_vars(f);
        if (!fv.empty()) throw OracleError("oracle input has free variable " + *fv.begin() + ": " + render(f));
    }
}

EntailmentResult entails_impl(const Theory& t, const Formula& phi, const OracleConfig& cfg) {
    auto fs = formulas_of({&t});
    fs.push_back(phi);
    check_sentences(fs);
    Universe u = make_universe(fs, cfg);
    Deadline dl(cfg.budget_ms);
    EntailmentResult r;
    for (std::size_t n : u.domain_sizes()) {
        Grounding g(u, n, dl);
        Lit lt = g.ground(t);
        Lit lp = g.ground(phi);
        g.solver.add_clause({lt});
        g.solver.add_clause({sat::negate(lp)});
        r.bound = n;
        if (g.solve() == sat::Result::Sat) {
            FiniteModel m = g.extract();
            if (!holds(m, t) || holds(m, phi)) throw OracleError("countermodel failed re-validation");
            r.entailed = false;
            r.countermodel = std::move(m);
            return r;
        }
    }
    r.entailed = true;
    return r;
}

// ---- Delta reducts ----

struct ReductSpace {
    std::vector<Lit> vars;
    // Each var is an atom (pred, stage, tuple) or a constant choice (const, element).
    struct Slot {
        bool is_atom;
        std::string name;
        Stage stage;
        FiniteModel::Tuple tuple;
        std::size_t elem;
    };
    std::vector<Slot> slots;
    std::vector<std::vector<std::size_t>> perm_maps;  // slot index under each permutation
    std::vector<bool> fixed_elem;
};

std::vector<std::vector<std::size_t>> permutations_of(std::size_t n, const std::vector<bool>& fixed) {
    std::vector<std::size_t> movable;
    for (std::size_t e = 0; e < n; ++e)
        if (!fixed[e]) movable.push_back(e);
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> img = movable;
    do {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        for (std::size_t i = 0; i < movable.size(); ++i) p[movable[i]] = img[i];
        out.push_back(p);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

ReductSpace make_space(Grounding& g, const Universe& u, const Signature& delta) {
    ReductSpace s;
    std::size_t n = g.size();
    s.fixed_elem.assign(n, false);
    if (u.una)
        for (const auto& c : delta.constants)
            if (auto it = u.const_index.find(c); it != u.const_index.end()) s.fixed_elem[it->second] = true;
    std::map<std::tuple<bool, std::string, Stage, FiniteModel::Tuple, std::size_t>, std::size_t> index;
    for (const auto& p : u.preds) {
        if (!delta.contains(p.name)) continue;
        std::vector<FiniteModel::Tuple> ts;
        all_tuples(n, p.arity, ts);
        std::vector<Stage> stages = p.fluent ? std::vector<Stage>(u.stages.begin(), u.stages.end()) : std::vector<Stage>{Stage::Now};
        for (Stage st : stages)
            for (const auto& t : ts) {
                index[{true, p.name, st, t, 0}] = s.slots.size();
                s.slots.push_back({true, p.name, st, t, 0});
                s.vars.push_back(g.atom(p.name, st, t));
            }
    }
    if (!u.una) {
        for (std::size_t c = 0; c < u.constants.size(); ++c) {
            if (!delta.constants.count(u.constants[c])) continue;
            for (std::size_t e = 0; e < n; ++e) {
                index[{false, u.constants[c], Stage::Now, {}, e}] = s.slots.size();
                s.slots.push_back({false, u.constants[c], Stage::Now, {}, e});
                s.vars.push_back(g.choice()[c][e]);
            }
        }
    }
    for (const auto& p : permutations_of(n, s.fixed_elem)) {
        std::vector<std::size_t> m(s.slots.size());
        for (std::size_t i = 0; i < s.slots.size(); ++i) {
            const auto& sl = s.slots[i];
            if (sl.is_atom) {
                FiniteModel::Tuple t = sl.tuple;
                for (auto& x : t) x = p[x];
                m[i] = index.at({true, sl.name, sl.stage, t, 0});
            } else {
                m[i] = index.at({false, sl.name, Stage::Now, {}, p[sl.elem]});
            }
        }
        s.perm_maps.push_back(std::move(m));
    }
    return s;
}

using Bits = std::vector<char>;

struct ReductSets {
    std::map<std::size_t, std::set<Bits>> sets;
    std::map<std::size_t, ReductSpace> spaces;
};

ReductSets reducts(const Theory& t, const Universe& u, const Signature& delta, const OracleConfig& cfg,
                   const Deadline& dl) {
    ReductSets out;
    std::size_t total = 0;
    for (std::size_t n : u.domain_sizes()) {
        Grounding g(u, n, dl);
        ReductSpace space = make_space(g, u, delta);
        g.solver.add_clause({g.ground(t)});
        auto& set = out.sets[n];
        while (g.solve() == sat::Result::Sat) {
            Bits bits(space.vars.size());
            for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = g.value(space.vars[i]);
            std::set<Bits> images;
            for (const auto& pm : space.perm_maps) {
                Bits img(bits.size());
                for (std::size_t i = 0; i < bits.size(); ++i) img[pm[i]] = bits[i];
                images.insert(img);
            }
            set.insert(*images.begin());
            if (++total > cfg.max_models) throw BudgetExceeded("too many reducts");
            bool more = true;
            for (const auto& img : images) {
                std::vector<Lit> block;
                for (std::size_t i = 0; i < img.size(); ++i)
                    block.push_back(img[i] ? sat::negate(space.vars[i]) : space.vars[i]);
                if (!g.solver.add_clause(block)) more = false;
            }
            if (!more || space.vars.empty()) break;
            dl.check();
        }
        out.spaces.emplace(n, std::move(space));
    }
    return out;
}

FiniteModel reduct_model(const Universe& u, std::size_t n, const ReductSpace& s, const Bits& bits,
                         const Signature& delta) {
    FiniteModel m;
    m.size = n;
    for (std::size_t e = 0; e < n; ++e) {
        if (u.una && e < u.constants.size() && delta.constants.count(u.constants[e])) m.element_names.push_back(u.constants[e]);
        else m.element_names.push_back("#" + std::to_string(e + 1));
    }
    if (u.una)
        for (const auto& c : delta.constants)
            if (auto it = u.const_index.find(c); it != u.const_index.end()) m.constants[c] = it->second;
    for (const auto& p : u.preds) {
        if (!delta.contains(p.name)) continue;
        if (p.fluent)
            for (Stage st : u.stages) m.relations[{p.name, st}];
        else
            m.relations[{p.name, Stage::Now}];
    }
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (!bits[i]) continue;
        const auto& sl = s.slots[i];
        if (sl.is_atom) m.relations[{sl.name, sl.stage}].insert(sl.tuple);
        else m.constants[sl.name] = sl.elem;
    }
    return m;
}

// ---- separating sentence search ----

struct CandidateSearch {
    const Universe& u;
    const Signature& delta;
    int depth;

    struct AtomOpt {
        Formula atom;
        std::set<std::string> symbols;
        std::set<std::string> vars;
    };

    std::vector<AtomOpt> pool(const std::set<std::string>& syms, const std::vector<std::string>& vars) const {
        std::vector<Term> terms;
        for (const auto& v : vars) terms.push_back(Term::var(v));
        for (const auto& c : syms)
            if (delta.constants.count(c)) terms.push_back(Term::constant(c));
        std::vector<AtomOpt> out;
        for (const auto& p : u.preds) {
            if (!syms.count(p.name)) continue;
            std::vector<FiniteModel::Tuple> idx;
            if (terms.empty() && p.arity > 0) continue;
            all_tuples(terms.size(), p.arity, idx);
            std::vector<Stage> stages = p.fluent ? std::vector<Stage>(u.stages.begin(), u.stages.end()) : std::vector<Stage>{Stage::Now};
            for (Stage st : stages)
                for (const auto& ix : idx) {
                    std::vector<Term> args;
                    AtomOpt o;
                    o.symbols.insert(p.name);
                    for (auto i : ix) {
                        args.push_back(terms[i]);
                        if (terms[i].kind == Term::Kind::Var) o.vars.insert(terms[i].name);
                        else o.symbols.insert(terms[i].name);
                    }
                    o.atom = p.fluent ? Formula::fluent(p.name, args, st) : Formula::static_atom(p.name, args);
                    out.push_back(o);
                }
        }
        for (std::size_t i = 0; i < terms.size(); ++i)
            for (std::size_t j = i + 1; j < terms.size(); ++j) {
                bool both_const = terms[i].kind == Term::Kind::Const && terms[j].kind == Term::Kind::Const;
                if (both_const && u.una) continue;
                AtomOpt o;
                o.atom = Formula::eq(terms[i], terms[j]);
                for (const auto& t : {terms[i], terms[j]}) {
                    if (t.kind == Term::Kind::Var) o.vars.insert(t.name);
                    else o.symbols.insert(t.name);
                }
                out.push_back(o);
            }
        return out;
    }

    // Matrices over `lits` literals: all conjunctions/disjunctions plus the
    // two mixed groupings of three literals.
    static std::vector<Formula> shapes(const std::vector<Formula>& ls) {
        if (ls.size() == 1) return {ls[0]};
        std::vector<Formula> out{Formula::conj(ls), Formula::disj(ls)};
        if (ls.size() == 3) {
            out.push_back(Formula::disj(Formula::conj(ls[0], ls[1]), ls[2]));
            out.push_back(Formula::conj(Formula::disj(ls[0], ls[1]), ls[2]));
            out.push_back(Formula::disj(Formula::conj(ls[0], ls[2]), ls[1]));
            out.push_back(Formula::conj(Formula::disj(ls[0], ls[2]), ls[1]));
            out.push_back(Formula::disj(Formula::conj(ls[1], ls[2]), ls[0]));
            out.push_back(Formula::conj(Formula::disj(ls[1], ls[2]), ls[0]));
        }
        return out;
    }

    // Calls fn(sentence) in search order until it returns true.
    template <class Fn>
    bool run(Fn&& fn, const Deadline& dl) const {
        std::vector<std::string> syms;
        for (const auto& p : u.preds)
            if (delta.contains(p.name)) syms.push_back(p.name);
        for (const auto& c : delta.constants)
            if (u.const_index.count(c)) syms.push_back(c);
        std::vector<std::set<std::string>> subsets;
        for (std::size_t mask = 0; mask < (std::size_t{1} << syms.size()); ++mask) {
            std::set<std::string> s;
            for (std::size_t i = 0; i < syms.size(); ++i)
                if (mask & (std::size_t{1} << i)) s.insert(syms[i]);
            subsets.push_back(s);
        }
        std::stable_sort(subsets.begin(), subsets.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
        static const char* names[] = {"x", "y", "z", "w"};
        for (const auto& s : subsets) {
            for (int q = 0; q <= depth && q <= 4; ++q) {
                std::vector<std::string> vars(names, names + q);
                auto atoms = pool(s, vars);
                for (int nl = 1; nl <= depth + 1; ++nl) {
                    if (nl > static_cast<int>(atoms.size())) break;
                    std::vector<std::size_t> pick(static_cast<std::size_t>(nl));
                    std::iota(pick.begin(), pick.end(), 0);
                    for (;;) {
                        dl.check();
                        std::set<std::string> used_syms, used_vars;
                        for (auto i : pick) {
                            used_syms.insert(atoms[i].symbols.begin(), atoms[i].symbols.end());
                            used_vars.insert(atoms[i].vars.begin(), atoms[i].vars.end());
                        }
                        if (used_syms == s && used_vars.size() == vars.size()) {
                            int max_neg = depth - (nl - 1);
                            for (std::size_t sm = 0; sm < (std::size_t{1} << nl); ++sm) {
                                if (__builtin_popcountll(sm) > max_neg) continue;
                                std::vector<Formula> lits;
                                for (std::size_t k = 0; k < pick.size(); ++k)
                                    lits.push_back(sm & (std::size_t{1} << k) ? Formula::negate(atoms[pick[k]].atom)
                                                                              : atoms[pick[k]].atom);
                                for (const auto& m : shapes(lits)) {
                                    for (std::size_t pm = 0; pm < (std::size_t{1} << q); ++pm) {
                                        Formula f = m;
                                        for (int k = q - 1; k >= 0; --k) {
                                            bool ex = pm & (std::size_t{1} << (q - 1 - k));
                                            f = ex ? Formula::exists(vars[static_cast<std::size_t>(k)], f)
                                                   : Formula::forall(vars[static_cast<std::size_t>(k)], f);
                                        }
                                        if (fn(f)) return true;
                                    }
                                }
                            }
                        }
                        // next combination
                        int i = nl - 1;
                        while (i >= 0 && pick[static_cast<std::size_t>(i)] == atoms.size() - static_cast<std::size_t>(nl - i))
                            --i;
                        if (i < 0) break;
                        ++pick[static_cast<std::size_t>(i)];
                        for (int j = i + 1; j < nl; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
                    }
                }
            }
        }
        return false;
    }
};

std::string tuple_str(const FiniteModel& m, const FiniteModel::Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += m.element_names[t[i]];
    }
    return out + ")";
}

}  // namespace

bool FiniteModel::holds_atom(const std::string& pred, Stage stage, const Tuple& t) const {
    auto it = relations.find({pred, stage});
    return it != relations.end() && it->second.count(t) > 0;
}

std::string FiniteModel::str() const {
    std::string out = "domain {";
    for (std::size_t e = 0; e < size; ++e) out += (e ? ", " : "") + element_names[e];
    out += "}";
    bool named_differently = false;
    for (const auto& [c, e] : constants)
        if (element_names[e] != c) named_differently = true;
    if (named_differently) {
        out += "; constants";
        for (const auto& [c, e] : constants) out += " " + c + "=" + element_names[e];
    }
    for (const auto& [key, tuples] : relations) {
        out += "; " + key.first + (key.second == Stage::Next ? "@next" : "") + " = {";
        bool first = true;
        for (const auto& t : tuples) {
            out += (first ? "" : ", ") + tuple_str(*this, t);
            first = false;
        }
        out += "}";
    }
    return out;
}

static std::size_t eval_term(const FiniteModel& m, const Term& t, const std::map<std::string, std::size_t>& env) {
    if (t.kind == Term::Kind::Var) {
        auto it = env.find(t.name);
        if (it == env.end()) throw OracleError("free variable " + t.name);
        return it->second;
    }
    if (t.kind == Term::Kind::Const) {
        auto it = m.constants.find(t.name);
        if (it == m.constants.end()) throw OracleError("uninterpreted constant " + t.name);
        return it->second;
    }
    throw OracleError("action term in object position");
}

static bool holds_in(const FiniteModel& m, const Formula& f, std::map<std::string, std::size_t>& env) {
    switch (f.kind()) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Fluent:
    case FormulaKind::Static: {
        FiniteModel::Tuple t;
        for (const auto& a : f.terms()) t.push_back(eval_term(m, a, env));
        return m.holds_atom(f.name(), f.kind() == FormulaKind::Fluent ? f.stage() : Stage::Now, t);
    }
    case FormulaKind::ObjEq: return eval_term(m, f.lhs(), env) == eval_term(m, f.rhs(), env);
    case FormulaKind::ActionEq: {
        const Term& l = f.lhs();
        const Term& r = f.rhs();
        if (l.kind != Term::Kind::Action || r.kind != Term::Kind::Action) throw OracleError("action variable");
        if (l.name != r.name || l.args.size() != r.args.size()) return false;
        for (std::size_t i = 0; i < l.args.size(); ++i)
            if (eval_term(m, l.args[i], env) != eval_term(m, r.args[i], env)) return false;
        return true;
    }
    case FormulaKind::Not: return !holds_in(m, f.child(), env);
    case FormulaKind::And: return holds_in(m, f.child(0), env) && holds_in(m, f.child(1), env);
    case FormulaKind::Or: return holds_in(m, f.child(0), env) || holds_in(m, f.child(1), env);
    case FormulaKind::Implies: return !holds_in(m, f.child(0), env) || holds_in(m, f.child(1), env);
    case FormulaKind::Iff: return holds_in(m, f.child(0), env) == holds_in(m, f.child(1), env);
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
        std::optional<std::size_t> saved;
        if (auto it = env.find(f.name()); it != env.end()) saved = it->second;
        bool universal = f.kind() == FormulaKind::Forall;
        bool result = universal;
        for (std::size_t e = 0; e < m.size; ++e) {
            env[f.name()] = e;
            if (holds_in(m, f.body(), env) != universal) {
                result = !universal;
                break;
            }
        }
        if (saved) env[f.name()] = *saved;
        else env.erase(f.name());
        return result;
    }
    }
    return false;
}

bool holds(const FiniteModel& m, const Formula& f, const std::map<std::string, std::size_t>& env) {
    auto e = env;
    return holds_in(m, f, e);
}

bool holds(const FiniteModel& m, const Theory& t) {
    return std::all_of(t.axioms.begin(), t.axioms.end(), [&](const Formula& f) { return holds(m, f); });
}

std::vector<FiniteModel> models(const Theory& t, const OracleConfig& cfg) {
    auto fs = formulas_of({&t});
    check_sentences(fs);
    Universe u = make_universe(fs, cfg);
    Deadline dl(cfg.budget_ms);
    std::vector<FiniteModel> out;
    for (std::size_t n : u.domain_sizes()) {
        Grounding g(u, n, dl);
        g.allocate_all();
        g.solver.add_clause({g.ground(t)});
        std::vector<Lit> vars;
        for (const auto& [k, l] : g.atoms()) vars.push_back(l);
        for (const auto& row : g.choice()) vars.insert(vars.end(), row.begin(), row.end());
        while (g.solve() == sat::Result::Sat) {
            out.push_back(g.extract());
            if (out.size() > cfg.max_models) throw BudgetExceeded("too many models");
            std::vector<Lit> block;
            for (Lit l : vars) block.push_back(g.value(l) ? sat::negate(l) : l);
            if (block.empty() || !g.solver.add_clause(block)) break;
            dl.check();
        }
    }
    return out;
}

EntailmentResult entails(const Theory& t, const Formula& phi, const OracleConfig& cfg) {
    return entails_impl(t, phi, cfg);
}

EntailmentResult entails(const Theory& t, const Theory& phis, const OracleConfig& cfg) {
    // Same universe for every query so bounds are comparable.
    OracleConfig c = cfg;
    c.vocabulary = c.vocabulary.unite(signature_of(t)).unite(signature_of(phis));
    return entails_impl(t, phis.conjunction(), c);
}

EquivalenceResult equivalent(const Theory& t1, const Theory& t2, const OracleConfig& cfg) {
    OracleConfig c = cfg;
    c.vocabulary = c.vocabulary.unite(signature_of(t1)).unite(signature_of(t2));
    EquivalenceResult r;
    auto a = entails_impl(t1, t2.conjunction(), c);
    r.bound = a.bound;
    if (!a.entailed) {
        r.side = 1;
        r.countermodel = a.countermodel;
        return r;
    }
    auto b = entails_impl(t2, t1.conjunction(), c);
    r.bound = std::max(r.bound, b.bound);
    if (!b.entailed) {
        r.side = 2;
        r.countermodel = b.countermodel;
        return r;
    }
    r.equivalent = true;
    return r;
}

SatResult satisfiable(const Theory& t, const OracleConfig& cfg) {
    auto fs = formulas_of({&t});
    check_sentences(fs);
    Universe u = make_universe(fs, cfg);
    Deadline dl(cfg.budget_ms);
    SatResult r;
    for (std::size_t n : u.domain_sizes()) {
        Grounding g(u, n, dl);
        g.solver.add_clause({g.ground(t)});
        r.bound = n;
        if (g.solve() == sat::Result::Sat) {
            r.sat = true;
            r.model = g.extract();
            if (!holds(*r.model, t)) throw OracleError("model failed re-validation");
            return r;
        }
    }
    return r;
}

ForgettingCheck verify_forgetting(const Theory& t, const GroundAtom& g, const Theory& result, const OracleConfig& cfg) {
    auto fs = formulas_of({&t, &result});
    fs.push_back(g.formula());
    check_sentences(fs);
    Universe u = make_universe(fs, cfg);
    Deadline dl(cfg.budget_ms);
    ForgettingCheck r;
    for (std::size_t n : u.domain_sizes()) {
        // result must hold wherever t holds after changing g's value.
        {
            Grounding gr(u, n, dl);
            Lit y = sat::pos(gr.solver.new_var());
            gr.set_override(Override{g, y});
            Lit lt = gr.ground(t);
            gr.set_override(std::nullopt);
            Lit lr = gr.ground(result);
            gr.solver.add_clause({lt});
            gr.solver.add_clause({sat::negate(lr)});
            if (gr.solve() == sat::Result::Sat) {
                r.failure = "a model of t (up to g) violates the result";
                r.witness = gr.extract();
                return r;
            }
        }
        // Every model of result must agree with a model of t except on g.
        {
            Grounding gr(u, n, dl);
            Lit lr = gr.ground(result);
            gr.set_override(Override{g, gr.top()});
            Lit lt_true = gr.ground(t);
            gr.set_override(Override{g, gr.bottom()});
            Lit lt_false = gr.ground(t);
            gr.set_override(std::nullopt);
            gr.solver.add_clause({lr});
            gr.solver.add_clause({sat::negate(lt_true)});
            gr.solver.add_clause({sat::negate(lt_false)});
            if (gr.solve() == sat::Result::Sat) {
                r.failure = "a model of the result has no g-variant satisfying t";
                r.witness = gr.extract();
                return r;
            }
        }
    }
    r.ok = true;
    return r;
}

const char* to_string(InseparabilityResult::Kind k) {
    switch (k) {
    case InseparabilityResult::Kind::InseparableFinite: return "INSEPARABLE_FINITE";
    case InseparabilityResult::Kind::Separated: return "SEPARATED";
    case InseparabilityResult::Kind::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

namespace {

struct PairedReducts {
    Universe u;
    ReductSets r1, r2;
    std::size_t bound = 0;
};

PairedReducts paired_reducts(const Theory& t1, const Theory& t2, const Signature& delta, const OracleConfig& cfg,
                             const Deadline& dl) {
    auto fs = formulas_of({&t1, &t2});
    check_sentences(fs);
    PairedReducts p{make_universe(fs, cfg, delta), {}, {}, 0};
    p.r1 = reducts(t1, p.u, delta, cfg, dl);
    p.r2 = reducts(t2, p.u, delta, cfg, dl);
    auto sizes = p.u.domain_sizes();
    p.bound = sizes.empty() ? 0 : sizes.back();
    return p;
}

bool includes_all(const ReductSets& a, const ReductSets& b) {
    for (const auto& [n, s] : a.sets) {
        const auto& o = b.sets.at(n);
        if (!std::includes(o.begin(), o.end(), s.begin(), s.end())) return false;
    }
    return true;
}

}  // namespace

InseparabilityResult check_inseparable(const Theory& t1, const Theory& t2, const Signature& delta,
                                       const OracleConfig& cfg, int depth) {
    Deadline dl(cfg.budget_ms);
    PairedReducts p = paired_reducts(t1, t2, delta, cfg, dl);
    InseparabilityResult r;
    r.bound = p.bound;
    if (p.r1.sets == p.r2.sets) {
        r.kind = InseparabilityResult::Kind::InseparableFinite;
        return r;
    }

    // Delta-sentences are decided by Delta-reducts alone.
    struct Side {
        std::vector<FiniteModel> all;
        std::vector<FiniteModel> only;  // not reducts of the other theory
    };
    auto side_of = [&](const ReductSets& mine, const ReductSets& other) {
        Side s;
        for (const auto& [n, set] : mine.sets) {
            const auto& space = mine.spaces.at(n);
            const auto& oset = other.sets.at(n);
            for (const auto& bits : set) {
                FiniteModel m = reduct_model(p.u, n, space, bits, delta);
                if (!oset.count(bits)) s.only.push_back(m);
                s.all.push_back(std::move(m));
            }
        }
        return s;
    };
    Side s1 = side_of(p.r1, p.r2), s2 = side_of(p.r2, p.r1);

    auto true_in_all = [](const std::vector<FiniteModel>& ms, const Formula& f) {
        return std::all_of(ms.begin(), ms.end(), [&](const FiniteModel& m) { return holds(m, f); });
    };
    auto false_in_some = [](const std::vector<FiniteModel>& ms, const Formula& f) {
        return std::any_of(ms.begin(), ms.end(), [&](const FiniteModel& m) { return !holds(m, f); });
    };

    CandidateSearch search{p.u, delta, depth};
    std::size_t count = 0;
    bool found = search.run(
        [&](const Formula& f) {
            ++count;
            // entailed by t1 only: fails on some reduct of t2 outside t1's reducts
            if (false_in_some(s2.only, f) && true_in_all(s1.all, f)) {
                r.witness = f;
                r.entailed_by = 1;
                return true;
            }
            if (false_in_some(s1.only, f) && true_in_all(s2.all, f)) {
                r.witness = f;
                r.entailed_by = 2;
                return true;
            }
            return false;
        },
        dl);
    r.candidates = count;
    if (!found) return r;

    // Re-check through full entailment.
    OracleConfig c = cfg;
    c.vocabulary = c.vocabulary.unite(signature_of(t1)).unite(signature_of(t2)).unite(delta);
    const Theory& yes = r.entailed_by == 1 ? t1 : t2;
    const Theory& no = r.entailed_by == 1 ? t2 : t1;
    auto e_yes = entails_impl(yes, *r.witness, c);
    auto e_no = entails_impl(no, *r.witness, c);
    if (!e_yes.entailed || e_no.entailed) throw OracleError("separating sentence failed re-check");
    r.countermodel = e_no.countermodel;
    r.kind = InseparabilityResult::Kind::Separated;
    return r;
}

ContainmentResult check_cons_containment(const Theory& t1, const Theory& t2, const Signature& delta,
                                         const OracleConfig& cfg) {
    Deadline dl(cfg.budget_ms);
    PairedReducts p = paired_reducts(t1, t2, delta, cfg, dl);
    ContainmentResult r;
    r.bound = p.bound;
    r.reducts1_in_2 = includes_all(p.r1, p.r2);
    r.reducts2_in_1 = includes_all(p.r2, p.r1);
    for (const auto& [n, s] : p.r1.sets) r.reducts1 += s.size();
    for (const auto& [n, s] : p.r2.sets) r.reducts2 += s.size();
    return r;
}

bool expansion_condition(const Theory& t1, const Theory& t2, const OracleConfig& cfg) {
    Signature shared = signature_of(t1).intersect(signature_of(t2));
    auto c = check_cons_containment(t1, t2, shared, cfg);
    return c.reducts1_in_2 && c.reducts2_in_1;
}

std::size_t count_reducts(const Theory& t, const Signature& delta, const OracleConfig& cfg) {
    Deadline dl(cfg.budget_ms);
    auto fs = formulas_of({&t});
    check_sentences(fs);
    Universe u = make_universe(fs, cfg, delta);
    auto rs = reducts(t, u, delta, cfg, dl);
    std::size_t total = 0;
    for (const auto& [n, s] : rs.sets) total += s.size();
    return total;
}

}  // namespace sitcalc
