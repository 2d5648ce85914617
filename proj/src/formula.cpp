#include "sitcalc/formula.hpp"

#include <algorithm>

namespace sitcalc {

namespace detail {
struct FormulaNode {
    FormulaKind kind;
    Stage stage = Stage::Now;
    std::string name;
    std::vector<Term> terms;
    std::vector<Formula> children;
};
}  // namespace detail

using detail::FormulaNode;

const char* stage_name(Stage s) { return s == Stage::Now ? "now" : "next"; }

Term Term::var(std::string n) { return Term{Kind::Var, std::move(n), {}}; }
Term Term::constant(std::string n) { return Term{Kind::Const, std::move(n), {}}; }
Term Term::action_var(std::string n) { return Term{Kind::ActionVar, std::move(n), {}}; }
Term Term::action(std::string fn, std::vector<Term> args) {
    for (const auto& a : args)
        if (!a.is_object()) throw SortError("action argument must be an object term");
    return Term{Kind::Action, std::move(fn), std::move(args)};
}

bool Term::is_ground() const {
    switch (kind) {
    case Kind::Const: return true;
    case Kind::Var:
    case Kind::ActionVar: return false;
    case Kind::Action:
        return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
    }
    return false;
}

std::strong_ordering compare(const Term& a, const Term& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.name <=> b.name; c != 0) return c;
    if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (auto c = compare(a.args[i], b.args[i]); c != 0) return c;
    return std::strong_ordering::equal;
}

// ---- construction ----

Formula::Formula() : Formula(top()) {}

static std::shared_ptr<const FormulaNode> node_of(FormulaNode n) {
    return std::make_shared<const FormulaNode>(std::move(n));
}

Formula Formula::fluent(std::string pred, std::vector<Term> args, Stage stage) {
    for (const auto& a : args)
        if (!a.is_object()) throw SortError("fluent argument must be an object term: " + pred);
    return Formula(node_of({FormulaKind::Fluent, stage, std::move(pred), std::move(args), {}}));
}

Formula Formula::static_atom(std::string pred, std::vector<Term> args) {
    for (const auto& a : args)
        if (!a.is_object()) throw SortError("predicate argument must be an object term: " + pred);
    return Formula(node_of({FormulaKind::Static, Stage::Now, std::move(pred), std::move(args), {}}));
}

Formula Formula::eq(Term lhs, Term rhs) {
    if (!lhs.is_object() || !rhs.is_object()) throw SortError("object equality between non-object terms");
    return Formula(node_of({FormulaKind::ObjEq, Stage::Now, {}, {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::action_eq(Term lhs, Term rhs) {
    auto is_act = [](const Term& t) {
        return t.kind == Term::Kind::Action || t.kind == Term::Kind::ActionVar;
    };
    if (!is_act(lhs) || !is_act(rhs)) throw SortError("action equality between non-action terms");
    return Formula(node_of({FormulaKind::ActionEq, Stage::Now, {}, {std::move(lhs), std::move(rhs)}, {}}));
}

Formula Formula::top() {
    static const Formula t(node_of({FormulaKind::True, Stage::Now, {}, {}, {}}));
    return t;
}

Formula Formula::bottom() {
    static const Formula f(node_of({FormulaKind::False, Stage::Now, {}, {}, {}}));
    return f;
}

Formula Formula::negate(Formula f) {
    return Formula(node_of({FormulaKind::Not, Stage::Now, {}, {}, {std::move(f)}}));
}

Formula Formula::conj(Formula a, Formula b) {
    return Formula(node_of({FormulaKind::And, Stage::Now, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::disj(Formula a, Formula b) {
    return Formula(node_of({FormulaKind::Or, Stage::Now, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::implies(Formula a, Formula b) {
    return Formula(node_of({FormulaKind::Implies, Stage::Now, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::iff(Formula a, Formula b) {
    return Formula(node_of({FormulaKind::Iff, Stage::Now, {}, {}, {std::move(a), std::move(b)}}));
}
Formula Formula::forall(std::string var, Formula body) {
    return Formula(node_of({FormulaKind::Forall, Stage::Now, std::move(var), {}, {std::move(body)}}));
}
Formula Formula::exists(std::string var, Formula body) {
    return Formula(node_of({FormulaKind::Exists, Stage::Now, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::conj(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) acc = conj(fs[i], acc);
    return acc;
}

Formula Formula::disj(const std::vector<Formula>& fs) {
    if (fs.empty()) return bottom();
    Formula acc = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;) acc = disj(fs[i], acc);
    return acc;
}

Formula Formula::forall(const std::vector<std::string>& vars, Formula body) {
    for (std::size_t i = vars.size(); i-- > 0;) body = forall(vars[i], body);
    return body;
}

Formula Formula::exists(const std::vector<std::string>& vars, Formula body) {
    for (std::size_t i = vars.size(); i-- > 0;) body = exists(vars[i], body);
    return body;
}

FormulaKind Formula::kind() const { return node_->kind; }
bool Formula::is_atom() const { return kind() == FormulaKind::Fluent || kind() == FormulaKind::Static; }
bool Formula::is_quantifier() const { return kind() == FormulaKind::Forall || kind() == FormulaKind::Exists; }
bool Formula::is_binary() const {
    auto k = kind();
    return k == FormulaKind::And || k == FormulaKind::Or || k == FormulaKind::Implies || k == FormulaKind::Iff;
}
const std::string& Formula::name() const { return node_->name; }
Stage Formula::stage() const { return node_->stage; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const std::vector<Formula>& Formula::children() const { return node_->children; }

std::strong_ordering compare(const Formula& a, const Formula& b) {
    if (a.kind() != b.kind()) return a.kind() <=> b.kind();
    if (a.is_atom() || a.is_quantifier())
        if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (a.kind() == FormulaKind::Fluent)
        if (auto c = a.stage() <=> b.stage(); c != 0) return c;
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    if (auto c = ta.size() <=> tb.size(); c != 0) return c;
    for (std::size_t i = 0; i < ta.size(); ++i)
        if (auto c = compare(ta[i], tb[i]); c != 0) return c;
    const auto& ca = a.children();
    const auto& cb = b.children();
    if (auto c = ca.size() <=> cb.size(); c != 0) return c;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (auto c = compare(ca[i], cb[i]); c != 0) return c;
    return std::strong_ordering::equal;
}

static void flatten(const Formula& f, FormulaKind k, std::vector<Formula>& out) {
    if (f.kind() == k) {
        flatten(f.child(0), k, out);
        flatten(f.child(1), k, out);
    } else {
        out.push_back(f);
    }
}

std::vector<Formula> conjuncts(const Formula& f) {
    std::vector<Formula> out;
    flatten(f, FormulaKind::And, out);
    return out;
}

std::vector<Formula> disjuncts(const Formula& f) {
    std::vector<Formula> out;
    flatten(f, FormulaKind::Or, out);
    return out;
}

// ---- signatures ----

bool Signature::empty() const {
    return fluents.empty() && statics.empty() && actions.empty() && constants.empty();
}

bool Signature::contains(const std::string& s) const {
    return fluents.count(s) || statics.count(s) || actions.count(s) || constants.count(s);
}

std::set<std::string> Signature::symbols() const {
    std::set<std::string> out = predicates();
    out.insert(constants.begin(), constants.end());
    return out;
}

std::set<std::string> Signature::predicates() const {
    std::set<std::string> out;
    for (const auto& [k, v] : fluents) out.insert(k);
    for (const auto& [k, v] : statics) out.insert(k);
    for (const auto& [k, v] : actions) out.insert(k);
    return out;
}

template <class M>
static M map_union(M a, const M& b) {
    a.insert(b.begin(), b.end());
    return a;
}

template <class M, class Pred>
static M map_filter(const M& a, Pred keep) {
    M out;
    for (const auto& e : a)
        if (keep(e)) out.insert(e);
    return out;
}

static std::string key_of(const std::pair<const std::string, int>& e) { return e.first; }
static std::string key_of(const std::string& e) { return e; }

Signature Signature::unite(const Signature& o) const {
    return {map_union(fluents, o.fluents), map_union(statics, o.statics), map_union(actions, o.actions),
            map_union(constants, o.constants)};
}

Signature Signature::intersect(const Signature& o) const {
    auto in = [&](const auto& e) { return o.contains(key_of(e)); };
    return {map_filter(fluents, in), map_filter(statics, in), map_filter(actions, in), map_filter(constants, in)};
}

Signature Signature::minus(const Signature& o) const {
    auto out = [&](const auto& e) { return !o.contains(key_of(e)); };
    return {map_filter(fluents, out), map_filter(statics, out), map_filter(actions, out), map_filter(constants, out)};
}

bool Signature::subset_of(const Signature& o) const { return minus(o).empty(); }

Signature Signature::restrict_to(const std::set<std::string>& names) const {
    auto in = [&](const auto& e) { return names.count(key_of(e)) > 0; };
    return {map_filter(fluents, in), map_filter(statics, in), map_filter(actions, in), map_filter(constants, in)};
}

std::string to_string(const Signature& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& sym : s.symbols()) {
        if (!first) out += ", ";
        out += sym;
        first = false;
    }
    return out + "}";
}

Theory Theory::operator+(const Theory& o) const {
    Theory r = *this;
    r.axioms.insert(r.axioms.end(), o.axioms.begin(), o.axioms.end());
    return r;
}

static void collect_term(const Term& t, Signature& s) {
    switch (t.kind) {
    case Term::Kind::Const: s.constants.insert(t.name); break;
    case Term::Kind::Action:
        s.actions[t.name] = static_cast<int>(t.args.size());
        for (const auto& a : t.args) collect_term(a, s);
        break;
    default: break;
    }
}

static void collect(const Formula& f, Signature& s) {
    switch (f.kind()) {
    case FormulaKind::Fluent: s.fluents[f.name()] = static_cast<int>(f.terms().size()); break;
    case FormulaKind::Static: s.statics[f.name()] = static_cast<int>(f.terms().size()); break;
    default: break;
    }
    for (const auto& t : f.terms()) collect_term(t, s);
    for (const auto& c : f.children()) collect(c, s);
}

Signature signature_of(const Formula& f) {
    Signature s;
    collect(f, s);
    return s;
}

Signature signature_of(const Theory& t) {
    Signature s;
    for (const auto& a : t.axioms) collect(a, s);
    return s;
}

static void term_vars_into(const Term& t, std::set<std::string>& out) {
    if (t.kind == Term::Kind::Var || t.kind == Term::Kind::ActionVar) out.insert(t.name);
    for (const auto& a : t.args) term_vars_into(a, out);
}

std::set<std::string> term_vars(const Term& t) {
    std::set<std::string> out;
    term_vars_into(t, out);
    return out;
}

static void free_vars_into(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    for (const auto& t : f.terms()) {
        for (const auto& v : term_vars(t))
            if (!bound.count(v)) out.insert(v);
    }
    if (f.is_quantifier()) {
        bool fresh = bound.insert(f.name()).second;
        free_vars_into(f.body(), bound, out);
        if (fresh) bound.erase(f.name());
        return;
    }
    for (const auto& c : f.children()) free_vars_into(c, bound, out);
}

std::set<std::string> free_vars(const Formula& f) {
    std::set<std::string> bound, out;
    free_vars_into(f, bound, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

bool mentions_stage(const Formula& f, Stage s) {
    if (f.kind() == FormulaKind::Fluent) return f.stage() == s;
    for (const auto& c : f.children())
        if (mentions_stage(c, s)) return true;
    return false;
}

// ---- substitution ----

Term substitute(const Term& t, const Binding& b) {
    switch (t.kind) {
    case Term::Kind::Const: return t;
    case Term::Kind::Var: {
        auto it = b.find(t.name);
        if (it == b.end()) return t;
        if (!it->second.is_object()) throw SortError("cannot bind object variable " + t.name + " to an action term");
        return it->second;
    }
    case Term::Kind::ActionVar: {
        auto it = b.find(t.name);
        if (it == b.end()) return t;
        if (it->second.is_object()) throw SortError("cannot bind action variable " + t.name + " to an object term");
        return it->second;
    }
    case Term::Kind::Action: {
        std::vector<Term> args;
        args.reserve(t.args.size());
        for (const auto& a : t.args) args.push_back(substitute(a, b));
        return Term::action(t.name, std::move(args));
    }
    }
    return t;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string n = base + "'";
    while (avoid.count(n)) n += "'";
    return n;
}

static Formula rebuild(const Formula& f, std::vector<Term> terms, std::vector<Formula> kids) {
    switch (f.kind()) {
    case FormulaKind::Fluent: return Formula::fluent(f.name(), std::move(terms), f.stage());
    case FormulaKind::Static: return Formula::static_atom(f.name(), std::move(terms));
    case FormulaKind::ObjEq: return Formula::eq(terms[0], terms[1]);
    case FormulaKind::ActionEq: return Formula::action_eq(terms[0], terms[1]);
    case FormulaKind::True:
    case FormulaKind::False: return f;
    case FormulaKind::Not: return Formula::negate(kids[0]);
    case FormulaKind::And: return Formula::conj(kids[0], kids[1]);
    case FormulaKind::Or: return Formula::disj(kids[0], kids[1]);
    case FormulaKind::Implies: return Formula::implies(kids[0], kids[1]);
    case FormulaKind::Iff: return Formula::iff(kids[0], kids[1]);
    case FormulaKind::Forall: return Formula::forall(f.name(), kids[0]);
    case FormulaKind::Exists: return Formula::exists(f.name(), kids[0]);
    }
    return f;
}

Formula substitute(const Formula& f, const Binding& b) {
    if (b.empty()) return f;
    if (f.is_quantifier()) {
        Binding inner = b;
        inner.erase(f.name());
        if (inner.empty()) return f;
        std::set<std::string> body_free = free_vars(f.body());
        std::set<std::string> incoming;
        bool relevant = false;
        for (const auto& [v, t] : inner) {
            if (!body_free.count(v)) continue;
            relevant = true;
            for (const auto& w : term_vars(t)) incoming.insert(w);
        }
        if (!relevant) return f;
        std::string var = f.name();
        Formula body = f.body();
        if (incoming.count(var)) {
            std::set<std::string> avoid = incoming;
            avoid.insert(body_free.begin(), body_free.end());
            for (const auto& [v, t] : inner) avoid.insert(v);
            std::string nv = fresh_name(var, avoid);
            body = substitute(body, Binding{{var, Term::var(nv)}});
            var = nv;
        }
        Formula nb = substitute(body, inner);
        return f.kind() == FormulaKind::Forall ? Formula::forall(var, nb) : Formula::exists(var, nb);
    }
    std::vector<Term> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) terms.push_back(substitute(t, b));
    std::vector<Formula> kids;
    kids.reserve(f.children().size());
    for (const auto& c : f.children()) kids.push_back(substitute(c, b));
    return rebuild(f, std::move(terms), std::move(kids));
}

std::vector<Term> GroundAtom::terms() const {
    std::vector<Term> ts;
    for (const auto& a : args) ts.push_back(Term::constant(a));
    return ts;
}

Formula GroundAtom::formula() const {
    return fluent ? Formula::fluent(pred, terms(), stage) : Formula::static_atom(pred, terms());
}

bool GroundAtom::matches(const Formula& atom) const {
    if (atom.name() != pred || atom.terms().size() != args.size()) return false;
    if (fluent) return atom.kind() == FormulaKind::Fluent && atom.stage() == stage;
    return atom.kind() == FormulaKind::Static;
}

Term GroundAction::term() const {
    std::vector<Term> ts;
    for (const auto& a : args) ts.push_back(Term::constant(a));
    return Term::action(fn, std::move(ts));
}

// ---- stages ----

static void stages_of(const Formula& f, std::set<Stage>& out) {
    if (f.kind() == FormulaKind::Fluent) out.insert(f.stage());
    for (const auto& c : f.children()) stages_of(c, out);
}

UniformityVerdict check_uniform(const Theory& t) {
    UniformityVerdict v;
    std::vector<std::set<Stage>> per(t.axioms.size());
    std::set<Stage> all;
    for (std::size_t i = 0; i < t.axioms.size(); ++i) {
        stages_of(t.axioms[i], per[i]);
        all.insert(per[i].begin(), per[i].end());
    }
    if (all.size() <= 1) {
        if (!all.empty()) v.stage = *all.begin();
        return v;
    }
    v.uniform = false;
    std::optional<Stage> ref;
    for (const auto& s : per)
        if (s.size() == 1) {
            ref = *s.begin();
            break;
        }
    for (std::size_t i = 0; i < per.size(); ++i)
        if (per[i].size() > 1 || (per[i].size() == 1 && ref && *per[i].begin() != *ref)) v.offenders.push_back(i);
    return v;
}

Formula rename_stage(const Formula& f, Stage from, Stage to) {
    if (f.kind() == FormulaKind::Fluent)
        return f.stage() == from ? Formula::fluent(f.name(), f.terms(), to) : f;
    if (f.children().empty()) return f;
    std::vector<Formula> kids;
    bool changed = false;
    for (const auto& c : f.children()) {
        kids.push_back(rename_stage(c, from, to));
        if (!(kids.back() == c)) changed = true;
    }
    return changed ? rebuild(f, f.terms(), std::move(kids)) : f;
}

Theory rename_stage(const Theory& t, Stage from, Stage to) {
    Theory out;
    for (const auto& a : t.axioms) out.axioms.push_back(rename_stage(a, from, to));
    return out;
}

}  // namespace sitcalc
