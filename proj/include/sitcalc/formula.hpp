#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sitcalc {

// Fluent atoms carry a stage tag instead of a situation term.
enum class Stage : std::uint8_t { Now, Next };

const char* stage_name(Stage s);

class SortError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Term {
    enum class Kind : std::uint8_t { Var, Const, ActionVar, Action };

    Kind kind = Kind::Var;
    std::string name;
    std::vector<Term> args;  // Action only

    static Term var(std::string n);
    static Term constant(std::string n);
    static Term action_var(std::string n);
    static Term action(std::string fn, std::vector<Term> args);

    bool is_object() const { return kind == Kind::Var || kind == Kind::Const; }
    bool is_ground() const;
};

std::strong_ordering compare(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
inline bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

enum class FormulaKind : std::uint8_t {
    Fluent,
    Static,
    ObjEq,
    ActionEq,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Forall,
    Exists,
};

class Formula;

namespace detail {
struct FormulaNode;
}

// Immutable formula tree with value semantics; children are shared.
class Formula {
public:
    Formula();  // TrueC

    static Formula fluent(std::string pred, std::vector<Term> args, Stage stage = Stage::Now);
    static Formula static_atom(std::string pred, std::vector<Term> args);
    static Formula eq(Term lhs, Term rhs);
    static Formula action_eq(Term lhs, Term rhs);
    static Formula top();
    static Formula bottom();
    static Formula negate(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula forall(std::string var, Formula body);
    static Formula exists(std::string var, Formula body);

    // Right-nested; empty lists give true / false.
    static Formula conj(const std::vector<Formula>& fs);
    static Formula disj(const std::vector<Formula>& fs);
    static Formula forall(const std::vector<std::string>& vars, Formula body);
    static Formula exists(const std::vector<std::string>& vars, Formula body);

    FormulaKind kind() const;
    bool is_atom() const;  // Fluent or Static
    bool is_quantifier() const;
    bool is_binary() const;

    // Atoms: predicate name. Quantifiers: bound variable.
    const std::string& name() const;
    Stage stage() const;
    // Atoms: arguments. Equalities: {lhs, rhs}.
    const std::vector<Term>& terms() const;
    const Term& lhs() const { return terms()[0]; }
    const Term& rhs() const { return terms()[1]; }
    const std::vector<Formula>& children() const;
    const Formula& child(std::size_t i = 0) const { return children()[i]; }
    const Formula& body() const { return children()[0]; }

private:
    explicit Formula(std::shared_ptr<const detail::FormulaNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::FormulaNode> node_;
};

std::strong_ordering compare(const Formula& a, const Formula& b);
inline bool operator==(const Formula& a, const Formula& b) { return compare(a, b) == 0; }
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

// Flatten nested And (resp. Or) nodes.
std::vector<Formula> conjuncts(const Formula& f);
std::vector<Formula> disjuncts(const Formula& f);

struct Signature {
    std::map<std::string, int> fluents;
    std::map<std::string, int> statics;
    std::map<std::string, int> actions;
    std::set<std::string> constants;

    bool empty() const;
    bool contains(const std::string& sym) const;
    std::set<std::string> symbols() const;
    // Symbols that are not object constants.
    std::set<std::string> predicates() const;

    Signature unite(const Signature& o) const;
    Signature intersect(const Signature& o) const;
    Signature minus(const Signature& o) const;
    bool subset_of(const Signature& o) const;
    // Keep only the named symbols, taking kinds and arities from *this.
    Signature restrict_to(const std::set<std::string>& names) const;

    friend bool operator==(const Signature&, const Signature&) = default;
};

std::string to_string(const Signature& s);

struct Theory {
    std::vector<Formula> axioms;

    Theory() = default;
    Theory(std::vector<Formula> ax) : axioms(std::move(ax)) {}
    Theory(std::initializer_list<Formula> ax) : axioms(ax) {}

    std::size_t size() const { return axioms.size(); }
    bool empty() const { return axioms.empty(); }
    Formula conjunction() const { return Formula::conj(axioms); }
    Theory operator+(const Theory& o) const;

    friend bool operator==(const Theory&, const Theory&) = default;
};

Signature signature_of(const Formula& f);
Signature signature_of(const Theory& t);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> term_vars(const Term& t);
bool is_sentence(const Formula& f);
bool mentions_stage(const Formula& f, Stage s);

using Binding = std::map<std::string, Term>;

Term substitute(const Term& t, const Binding& b);
// Capture-avoiding; bound variables that would capture are primed.
Formula substitute(const Formula& f, const Binding& b);

struct UniformityVerdict {
    bool uniform = true;
    std::optional<Stage> stage;  // unset when no fluent occurs
    std::vector<std::size_t> offenders;
};

UniformityVerdict check_uniform(const Theory& t);
Formula rename_stage(const Formula& f, Stage from, Stage to);
Theory rename_stage(const Theory& t, Stage from, Stage to);

// Ground fluent or static atom; statics ignore the stage.
struct GroundAtom {
    bool fluent = true;
    std::string pred;
    std::vector<std::string> args;
    Stage stage = Stage::Now;

    Formula formula() const;
    std::vector<Term> terms() const;
    bool matches(const Formula& atom) const;  // same predicate, kind and stage

    auto operator<=>(const GroundAtom& o) const {
        if (auto c = pred <=> o.pred; c != 0) return c;
        if (auto c = args <=> o.args; c != 0) return c;
        if (auto c = stage <=> o.stage; c != 0) return c;
        return fluent <=> o.fluent;
    }
    bool operator==(const GroundAtom& o) const = default;
};

struct GroundAction {
    std::string fn;
    std::vector<std::string> args;

    Term term() const;
    bool operator==(const GroundAction& o) const = default;
};

// `base` primed until it is not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace sitcalc
