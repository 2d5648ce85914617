#include "sitcalc/surface.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace sitcalc {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

const std::set<std::string> kReserved = {"object", "static", "fluent", "action", "ssa", "poss",
                                         "init",   "pos",    "neg",    "forall", "exists", "true", "false"};

std::vector<Token> lex(std::string_view src, const std::string& file) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "//") {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        int l = line, cl = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
                ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        static const char* multi[] = {"<->", "->", "==", "!="};
        bool matched = false;
        for (const char* m : multi) {
            std::string_view mv(m);
            if (src.substr(i, mv.size()) == mv) {
                out.push_back({Tok::Punct, std::string(mv), l, cl});
                advance(mv.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("(),;:{}/!&|@").find(c) != std::string::npos) {
            out.push_back({Tok::Punct, std::string(1, c), l, cl});
            advance(1);
            continue;
        }
        throw ParseError({file, l, cl}, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, std::string file) : file_(std::move(file)), toks_(lex(text, file_)) {}

    BasicActionTheory bat() {
        BasicActionTheory b;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind != Tok::Ident) fail(t, "expected a declaration");
            if (t.text == "object") declare_objects(b);
            else if (t.text == "static" || t.text == "fluent" || t.text == "action") declare_symbols(b);
            else if (t.text == "ssa") ssa(b);
            else if (t.text == "poss") poss(b);
            else if (t.text == "init") init(b);
            else fail(t, "unknown declaration '" + t.text + "'");
        }
        return b;
    }

    Formula formula_only(const Signature& sig, const FormulaScope& scope) {
        sig_ = sig;
        scope_ = scope;
        Formula f = formula();
        expect_end();
        return f;
    }

    Term ground_action_only(const Signature& sig) {
        sig_ = sig;
        Term t = term();
        if (t.kind != Term::Kind::Action || !t.is_ground()) fail(toks_.front(), "expected a ground action");
        return t;
    }

    std::vector<Term> ground_actions(const Signature& sig) {
        sig_ = sig;
        std::vector<Term> out;
        while (!at_end()) {
            const Token& start = peek();
            Term t = term();
            if (t.kind != Term::Kind::Action || !t.is_ground()) fail(start, "expected a ground action");
            out.push_back(t);
            if (!accept(";")) break;
        }
        expect_end();
        return out;
    }

    void expect_end() {
        if (!at_end()) fail(peek(), "unexpected '" + peek().text + "'");
    }

    SourceSpan span(const Token& t) const { return {file_, t.line, t.col}; }

private:
    std::string file_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Signature sig_;
    FormulaScope scope_;
    std::vector<std::string> bound_;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::End; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(span(t), msg); }
    bool is(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool accept(const char* p) {
        if (!is(p)) return false;
        next();
        return true;
    }
    const Token& expect(const char* p) {
        if (!is(p)) fail(peek(), std::string("expected '") + p + "'" + (at_end() ? "" : " before '" + peek().text + "'"));
        return next();
    }
    bool is_kw(const char* k) const { return peek().kind == Tok::Ident && peek().text == k; }
    const Token& ident() {
        if (peek().kind != Tok::Ident) fail(peek(), "expected an identifier");
        return next();
    }
    std::string fresh_ident(const char* what) {
        const Token& t = ident();
        if (kReserved.count(t.text)) fail(t, std::string("reserved word '") + t.text + "' used as " + what);
        return t.text;
    }

    // ---- declarations ----

    void check_new_symbol(const Token& t) {
        if (kReserved.count(t.text)) fail(t, "reserved word '" + t.text + "' used as a symbol");
        if (sig_.contains(t.text)) fail(t, "symbol '" + t.text + "' declared twice");
    }

    void declare_objects(BasicActionTheory& b) {
        next();
        do {
            const Token& t = ident();
            check_new_symbol(t);
            sig_.constants.insert(t.text);
        } while (accept(","));
        expect(";");
        b.sig = sig_;
    }

    void declare_symbols(BasicActionTheory& b) {
        std::string kind = next().text;
        do {
            const Token& t = ident();
            check_new_symbol(t);
            expect("/");
            if (peek().kind != Tok::Number) fail(peek(), "expected an arity");
            int n = std::stoi(next().text);
            if (kind == "static") sig_.statics[t.text] = n;
            else if (kind == "fluent") sig_.fluents[t.text] = n;
            else sig_.actions[t.text] = n;
        } while (accept(","));
        expect(";");
        b.sig = sig_;
    }

    std::vector<std::string> var_list_in_parens(std::size_t expected, const Token& where) {
        std::vector<std::string> vs;
        if (accept("(")) {
            if (!is(")")) {
                do {
                    const Token& t = ident();
                    if (kReserved.count(t.text) || sig_.contains(t.text))
                        fail(t, "'" + t.text + "' is not a variable");
                    for (const auto& v : vs)
                        if (v == t.text) fail(t, "repeated variable '" + t.text + "'");
                    vs.push_back(t.text);
                } while (accept(","));
            }
            expect(")");
        }
        if (vs.size() != expected)
            fail(where, "expected " + std::to_string(expected) + " parameters, got " + std::to_string(vs.size()));
        return vs;
    }

    void ssa(BasicActionTheory& b) {
        const Token& kw = next();
        const Token& name = ident();
        auto it = sig_.fluents.find(name.text);
        if (it == sig_.fluents.end()) fail(name, "'" + name.text + "' is not a declared fluent");
        if (b.ssas.count(name.text)) fail(name, "second successor state axiom for '" + name.text + "'");
        SuccessorStateAxiom s;
        s.fluent = name.text;
        s.span = span(kw);
        s.head_vars = var_list_in_parens(static_cast<std::size_t>(it->second), name);
        expect("{");
        while (!accept("}")) {
            if (at_end()) fail(peek(), "unterminated ssa block");
            bool positive;
            if (is_kw("pos")) positive = true;
            else if (is_kw("neg")) positive = false;
            else fail(peek(), "expected 'pos:' or 'neg:'");
            next();
            expect(":");
            EffectDisjunct d = disjunct(s.head_vars);
            (positive ? s.pos : s.neg).push_back(std::move(d));
            expect(";");
        }
        b.ssas.emplace(s.fluent, std::move(s));
    }

    EffectDisjunct disjunct(const std::vector<std::string>& heads) {
        EffectDisjunct d;
        d.span = span(peek());
        std::set<std::string> scope(heads.begin(), heads.end());
        if (is_kw("exists")) {
            next();
            do {
                const Token& t = ident();
                if (kReserved.count(t.text) || sig_.contains(t.text)) fail(t, "'" + t.text + "' is not a variable");
                if (scope.count(t.text)) fail(t, "exists-variable '" + t.text + "' shadows another variable");
                scope.insert(t.text);
                d.exists_vars.push_back(t.text);
            } while (accept(","));
        }
        const Token& av = ident();
        if (sig_.contains(av.text) || scope.count(av.text))
            fail(av, "expected the action variable, got '" + av.text + "'");
        expect("==");
        scope_ = FormulaScope{scope, {}, false};
        const Token& at = peek();
        d.action = term();
        if (d.action.kind != Term::Kind::Action) fail(at, "expected an action term");
        if (accept("&")) d.context = formula();
        scope_ = {};
        return d;
    }

    void poss(BasicActionTheory& b) {
        const Token& kw = next();
        const Token& name = ident();
        auto it = sig_.actions.find(name.text);
        if (it == sig_.actions.end()) fail(name, "'" + name.text + "' is not a declared action");
        if (b.preconditions.count(name.text)) fail(name, "second precondition for '" + name.text + "'");
        ActionPrecondition p;
        p.action = name.text;
        p.span = span(kw);
        p.params = var_list_in_parens(static_cast<std::size_t>(it->second), name);
        expect(":");
        scope_ = FormulaScope{{p.params.begin(), p.params.end()}, {}, false};
        p.condition = formula();
        scope_ = {};
        expect(";");
        b.preconditions.emplace(p.action, std::move(p));
    }

    void init(BasicActionTheory& b) {
        next();
        expect("{");
        scope_ = FormulaScope{{}, {}, false};
        while (!accept("}")) {
            if (at_end()) fail(peek(), "unterminated init block");
            b.init_spans.push_back(span(peek()));
            b.init.axioms.push_back(formula());
            expect(";");
        }
        scope_ = {};
    }

    // ---- formulas ----

    Formula formula() { return iff(); }

    Formula iff() {
        Formula l = implication();
        while (accept("<->")) l = Formula::iff(l, implication());
        return l;
    }

    Formula implication() {
        Formula l = disjunction();
        if (accept("->")) return Formula::implies(l, implication());
        return l;
    }

    Formula disjunction() {
        Formula l = conjunction();
        if (accept("|")) return Formula::disj(l, disjunction());
        return l;
    }

    Formula conjunction() {
        Formula l = unary();
        if (accept("&")) return Formula::conj(l, conjunction());
        return l;
    }

    Formula unary() {
        if (accept("!")) return Formula::negate(unary());
        if (is_kw("forall") || is_kw("exists")) {
            bool universal = next().text == "forall";
            std::vector<std::string> vars;
            do {
                const Token& t = ident();
                if (kReserved.count(t.text) || sig_.contains(t.text))
                    fail(t, "'" + t.text + "' cannot be used as a variable");
                vars.push_back(t.text);
            } while (accept(","));
            for (const auto& v : vars) bound_.push_back(v);
            Formula body = unary();
            bound_.resize(bound_.size() - vars.size());
            return universal ? Formula::forall(vars, body) : Formula::exists(vars, body);
        }
        if (accept("(")) {
            Formula f = formula();
            expect(")");
            return f;
        }
        return atomic();
    }

    bool is_var(const std::string& n) const {
        for (const auto& b : bound_)
            if (b == n) return true;
        return scope_.object_vars.count(n) > 0;
    }

    Formula atomic() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail(t, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
        if (t.text == "true") {
            next();
            return Formula::top();
        }
        if (t.text == "false") {
            next();
            return Formula::bottom();
        }
        bool fluent = sig_.fluents.count(t.text) > 0;
        if ((fluent || sig_.statics.count(t.text)) && !is_var(t.text)) {
            next();
            int arity = fluent ? sig_.fluents.at(t.text) : sig_.statics.at(t.text);
            std::vector<Term> args;
            if (accept("(")) {
                if (!is(")")) {
                    do {
                        const Token& at = peek();
                        Term a = term();
                        if (!a.is_object()) fail(at, "predicate arguments must be objects");
                        args.push_back(a);
                    } while (accept(","));
                }
                expect(")");
            }
            if (static_cast<int>(args.size()) != arity)
                fail(t, "'" + t.text + "' expects " + std::to_string(arity) + " arguments");
            if (!fluent) return Formula::static_atom(t.text, args);
            Stage stage = Stage::Now;
            if (is("@")) {
                const Token& at = next();
                if (!scope_.allow_stages) fail(at, "stage annotation not allowed here");
                const Token& s = ident();
                if (s.text == "now") stage = Stage::Now;
                else if (s.text == "next") stage = Stage::Next;
                else fail(s, "unknown stage '" + s.text + "'");
            }
            return Formula::fluent(t.text, args, stage);
        }
        Term l = term();
        bool negated;
        if (accept("==")) negated = false;
        else if (accept("!=")) negated = true;
        else fail(peek(), "expected '==' or '!=' after term");
        const Token& rt = peek();
        Term r = term();
        Formula eq;
        if (l.is_object() != r.is_object()) fail(rt, "equality between an object and an action");
        eq = l.is_object() ? Formula::eq(l, r) : Formula::action_eq(l, r);
        return negated ? Formula::negate(eq) : eq;
    }

    Term term() {
        const Token& t = ident();
        if (is_var(t.text)) return Term::var(t.text);
        if (scope_.action_vars.count(t.text)) return Term::action_var(t.text);
        if (sig_.constants.count(t.text)) return Term::constant(t.text);
        auto it = sig_.actions.find(t.text);
        if (it != sig_.actions.end()) {
            std::vector<Term> args;
            if (accept("(")) {
                if (!is(")")) {
                    do {
                        const Token& at = peek();
                        Term a = term();
                        if (!a.is_object()) fail(at, "action arguments must be objects");
                        args.push_back(a);
                    } while (accept(","));
                }
                expect(")");
            }
            if (static_cast<int>(args.size()) != it->second)
                fail(t, "'" + t.text + "' expects " + std::to_string(it->second) + " arguments");
            return Term::action(t.text, args);
        }
        if (sig_.fluents.count(t.text) || sig_.statics.count(t.text))
            fail(t, "predicate '" + t.text + "' used as a term");
        fail(t, "unknown identifier '" + t.text + "' (free variables are not allowed)");
    }
};

// ---- rendering ----

int prec(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    default: return 5;
    }
}

void render_into(const Formula& f, std::string& out);

void render_child(const Formula& c, bool parens, std::string& out) {
    if (parens) out += "(";
    render_into(c, out);
    if (parens) out += ")";
}

std::string join_terms(const std::vector<Term>& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += ", ";
        out += render(ts[i]);
    }
    return out;
}

void render_into(const Formula& f, std::string& out) {
    switch (f.kind()) {
    case FormulaKind::True: out += "true"; return;
    case FormulaKind::False: out += "false"; return;
    case FormulaKind::Fluent:
    case FormulaKind::Static:
        out += f.name();
        if (!f.terms().empty()) out += "(" + join_terms(f.terms()) + ")";
        if (f.kind() == FormulaKind::Fluent && f.stage() == Stage::Next) out += "@next";
        return;
    case FormulaKind::ObjEq:
    case FormulaKind::ActionEq: out += render(f.lhs()) + " == " + render(f.rhs()); return;
    case FormulaKind::Not: {
        const Formula& c = f.child();
        if (c.kind() == FormulaKind::ObjEq || c.kind() == FormulaKind::ActionEq) {
            out += render(c.lhs()) + " != " + render(c.rhs());
            return;
        }
        out += "!";
        render_child(c, prec(c) < 5, out);
        return;
    }
    case FormulaKind::Forall:
    case FormulaKind::Exists:
        out += f.kind() == FormulaKind::Forall ? "forall " : "exists ";
        out += f.name() + " (";
        render_into(f.body(), out);
        out += ")";
        return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
        const char* op = f.kind() == FormulaKind::And ? " & " : f.kind() == FormulaKind::Or ? " | " : " -> ";
        int p = prec(f);
        render_child(f.child(0), prec(f.child(0)) <= p, out);
        out += op;
        render_child(f.child(1), prec(f.child(1)) < p, out);
        return;
    }
    case FormulaKind::Iff: {
        int p = prec(f);
        render_child(f.child(0), prec(f.child(0)) < p, out);
        out += " <-> ";
        render_child(f.child(1), prec(f.child(1)) <= p, out);
        return;
    }
    }
}

std::string join(const std::vector<std::string>& xs, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

std::string render_decls(const Signature& sig) {
    std::string out;
    if (!sig.constants.empty())
        out += "object " + join({sig.constants.begin(), sig.constants.end()}) + ";\n";
    auto decl = [&](const char* kw, const std::map<std::string, int>& m) {
        if (m.empty()) return;
        std::vector<std::string> parts;
        for (const auto& [n, a] : m) parts.push_back(n + "/" + std::to_string(a));
        out += std::string(kw) + " " + join(parts) + ";\n";
    };
    decl("static", sig.statics);
    decl("fluent", sig.fluents);
    decl("action", sig.actions);
    return out;
}

std::string render_init(const Theory& t) {
    std::string out = "init {\n";
    for (const auto& a : t.axioms) out += "  " + render(a) + ";\n";
    return out + "}\n";
}

std::string render_disjunct(const EffectDisjunct& d) {
    std::string out;
    if (!d.exists_vars.empty()) out += "exists " + join(d.exists_vars) + " ";
    out += "a == " + render(d.action);
    if (d.context.kind() != FormulaKind::True) out += " & " + render(d.context);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError({path, 0, 0}, "file not found");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

BasicActionTheory parse_bat(std::string_view text, const std::string& file) {
    Parser p(text, file);
    return p.bat();
}

BasicActionTheory load_bat(const std::string& path) { return parse_bat(read_file(path), path); }

Formula parse_formula(std::string_view text, const Signature& sig, const FormulaScope& scope) {
    Parser p(text, "<formula>");
    return p.formula_only(sig, scope);
}

static GroundAction to_ground(const Term& t) {
    GroundAction a{t.name, {}};
    for (const auto& x : t.args) a.args.push_back(x.name);
    return a;
}

GroundAction parse_action(std::string_view text, const Signature& sig) {
    Parser p(text, "<action>");
    Term t = p.ground_action_only(sig);
    p.expect_end();
    return to_ground(t);
}

std::vector<GroundAction> parse_actions(std::string_view text, const Signature& sig) {
    Parser p(text, "<actions>");
    std::vector<GroundAction> out;
    for (const auto& t : p.ground_actions(sig)) out.push_back(to_ground(t));
    return out;
}

GroundAtom parse_atom(std::string_view text, const Signature& sig) {
    Formula f = parse_formula(text, sig);
    if (!f.is_atom()) throw ParseError({"<atom>", 1, 1}, "expected a ground atom");
    GroundAtom a;
    a.fluent = f.kind() == FormulaKind::Fluent;
    a.pred = f.name();
    a.stage = f.stage();
    for (const auto& t : f.terms()) {
        if (t.kind != Term::Kind::Const) throw ParseError({"<atom>", 1, 1}, "atom is not ground");
        a.args.push_back(t.name);
    }
    return a;
}

std::string render(const Term& t) {
    if (t.kind != Term::Kind::Action) return t.name;
    return t.name + "(" + join_terms(t.args) + ")";
}

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

std::string render(const Theory& t) {
    std::string out;
    for (const auto& a : t.axioms) out += render(a) + ";\n";
    return out;
}

std::string render(const GroundAtom& a) { return render(a.formula()); }
std::string render(const GroundAction& a) { return render(a.term()); }

std::string render(const BasicActionTheory& b) {
    std::string out = render_decls(b.sig);
    for (const auto& [name, s] : b.ssas) {
        out += "\nssa " + name;
        if (!s.head_vars.empty()) out += "(" + join(s.head_vars) + ")";
        out += " {\n";
        for (const auto& d : s.pos) out += "  pos: " + render_disjunct(d) + ";\n";
        for (const auto& d : s.neg) out += "  neg: " + render_disjunct(d) + ";\n";
        out += "}\n";
    }
    if (!b.preconditions.empty()) out += "\n";
    for (const auto& [name, p] : b.preconditions) {
        out += "poss " + name;
        if (!p.params.empty()) out += "(" + join(p.params) + ")";
        out += ": " + render(p.condition) + ";\n";
    }
    out += "\n" + render_init(b.init);
    return out;
}

std::string render_theory_file(const Signature& sig, const Theory& t) {
    return render_decls(sig) + "\n" + render_init(t);
}

}  // namespace sitcalc
