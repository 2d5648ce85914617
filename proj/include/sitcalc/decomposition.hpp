#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sitcalc/bat.hpp"
#include "sitcalc/formula.hpp"
#include "sitcalc/oracle.hpp"

namespace sitcalc {

struct Decomposition {
    Signature delta;
    std::vector<Theory> components;

    std::vector<Signature> signature_components() const;
    Theory united() const;
};

// Finest partition of the axioms such that components share only Delta
// symbols. Axioms whose symbols all lie in Delta join the component of the
// nearest preceding axiom.
Decomposition syntactic_decompose(const Theory& t, const Signature& delta);

// Finest partition of a set of ground atoms sharing only Delta symbols.
std::vector<std::vector<GroundAtom>> decompose_ground(const std::vector<GroundAtom>& atoms, const Signature& delta);

struct DecompositionCheck {
    bool disjoint = false;   // pairwise signature intersections within Delta
    bool covering = false;   // union of component signatures is sig(t)
    bool proper = false;     // every component has a symbol outside Delta
    std::optional<bool> equivalent;  // oracle; unset when not requested
    std::vector<std::string> details;
    bool ok() const { return disjoint && covering && proper && equivalent.value_or(true); }
};

DecompositionCheck verify_decomposition(const Theory& t, const Decomposition& d,
                                        const std::optional<OracleConfig>& cfg = std::nullopt);

// Delta may not contain fluents.
bool check_fluent_free(const Signature& delta, std::vector<std::string>* offenders = nullptr);

Signature ssa_signature(const SuccessorStateAxiom& ssa);

// Finest grouping of the SSAs whose signatures share only Delta1 symbols.
std::vector<std::set<std::string>> ssa_groups(const BasicActionTheory& b, const Signature& delta1);

struct Condition {
    std::string name;
    bool holds = true;
    std::vector<std::string> details;
};

struct AlignmentReport {
    std::vector<Condition> conditions;
    std::map<std::size_t, std::size_t> f_map;  // SSA group -> init component

    bool ok() const;
    const Condition* find(const std::string& name) const;
};

AlignmentReport check_local_effect_preservation(const BasicActionTheory& b, const Signature& delta1,
                                                const Signature& delta2,
                                                const std::vector<std::set<std::string>>& ssa_partition,
                                                const Decomposition& init_decomp);

AlignmentReport check_strong_preservation(const BasicActionTheory& b, const Signature& delta1, const Signature& delta2,
                                          const GroundAction& alpha,
                                          const std::vector<std::set<std::string>>& ssa_partition,
                                          const Decomposition& init_decomp);

struct SplitReport {
    std::size_t before;
    std::vector<std::size_t> after;
};

// Replace each selected component by its syntactic decomposition.
Decomposition refine_components(const Decomposition& d, const std::vector<bool>& which);

// Before-components whose non-Delta symbols are spread over two or more
// after-components.
std::vector<SplitReport> detect_split(const Decomposition& before, const Decomposition& after);

}  // namespace sitcalc
