#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sitcalc/formula.hpp"

namespace sitcalc {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bounded finite-model semantics. Under UNA the domain holds one element per
// named constant plus 0..max_extra anonymous ones; without UNA domain sizes
// run from 1 to |constants| + max_extra and constants are interpreted freely.
struct OracleConfig {
    int max_extra = 1;
    bool una = true;
    std::optional<std::set<Stage>> stages;  // fluent stages enumerated by models(); default: those occurring
    std::set<std::string> constants;        // added to the constants of the inputs
    Signature vocabulary;                   // added to the symbols of the inputs
    long budget_ms = 0;                     // 0 means unlimited
    std::size_t max_models = 200000;
};

struct FiniteModel {
    using Key = std::pair<std::string, Stage>;  // statics use Stage::Now
    using Tuple = std::vector<std::size_t>;

    std::size_t size = 0;
    std::vector<std::string> element_names;
    std::map<std::string, std::size_t> constants;
    std::map<Key, std::set<Tuple>> relations;

    bool holds_atom(const std::string& pred, Stage stage, const Tuple& t) const;
    std::string str() const;
};

// Direct evaluation; `env` binds free object variables to elements.
bool holds(const FiniteModel& m, const Formula& f, const std::map<std::string, std::size_t>& env = {});
bool holds(const FiniteModel& m, const Theory& t);

std::vector<FiniteModel> models(const Theory& t, const OracleConfig& cfg = {});

struct EntailmentResult {
    bool entailed = false;       // ENTAILED_FINITE(bound) when true
    std::size_t bound = 0;       // largest domain size checked
    std::optional<FiniteModel> countermodel;
};

EntailmentResult entails(const Theory& t, const Formula& phi, const OracleConfig& cfg = {});
EntailmentResult entails(const Theory& t, const Theory& phis, const OracleConfig& cfg = {});

struct EquivalenceResult {
    bool equivalent = false;
    std::size_t bound = 0;
    int side = 0;  // 1: countermodel satisfies t1 but not t2; 2: the reverse
    std::optional<FiniteModel> countermodel;
};

EquivalenceResult equivalent(const Theory& t1, const Theory& t2, const OracleConfig& cfg = {});

struct SatResult {
    bool sat = false;
    std::size_t bound = 0;
    std::optional<FiniteModel> model;
};

SatResult satisfiable(const Theory& t, const OracleConfig& cfg = {});

// Semantic check of forget(t, g) = result, independent of the syntactic
// construction: over every bounded domain, the models of result are exactly
// the models that agree with some model of t everywhere except on g.
struct ForgettingCheck {
    bool ok = false;
    std::string failure;  // which direction failed
    std::optional<FiniteModel> witness;
};

ForgettingCheck verify_forgetting(const Theory& t, const GroundAtom& g, const Theory& result,
                                  const OracleConfig& cfg = {});

struct InseparabilityResult {
    enum class Kind { InseparableFinite, Separated, Unknown };
    Kind kind = Kind::Unknown;
    std::size_t bound = 0;
    std::optional<Formula> witness;  // Separated: entailed by exactly one theory
    int entailed_by = 0;             // 1 or 2
    std::optional<FiniteModel> countermodel;  // model of the other theory refuting the witness
    std::size_t candidates = 0;
};

const char* to_string(InseparabilityResult::Kind k);

// Phase (a): equality of bounded Delta-reduct sets. Phase (b): search for a
// separating Delta-sentence with at most `depth` quantifiers and connectives.
InseparabilityResult check_inseparable(const Theory& t1, const Theory& t2, const Signature& delta,
                                       const OracleConfig& cfg = {}, int depth = 3);

// Bounded Delta-reduct inclusion. reducts1_in_2 means every Delta-consequence
// of t2 is one of t1.
struct ContainmentResult {
    bool reducts1_in_2 = false;
    bool reducts2_in_1 = false;
    std::size_t reducts1 = 0;
    std::size_t reducts2 = 0;
    std::size_t bound = 0;
};

ContainmentResult check_cons_containment(const Theory& t1, const Theory& t2, const Signature& delta,
                                         const OracleConfig& cfg = {});

// Every bounded model of t1 expands to a model of t1 and t2 and vice versa,
// with Delta the shared signature.
bool expansion_condition(const Theory& t1, const Theory& t2, const OracleConfig& cfg = {});

// Models are counted in Delta-reduct form, canonical up to permutations of
// elements not named by Delta constants.
std::size_t count_reducts(const Theory& t, const Signature& delta, const OracleConfig& cfg = {});

}  // namespace sitcalc
