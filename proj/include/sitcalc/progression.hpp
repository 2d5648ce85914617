#pragma once

#include <map>
#include <set>
#include <vector>

#include "sitcalc/bat.hpp"
#include "sitcalc/decomposition.hpp"
#include "sitcalc/formula.hpp"
#include "sitcalc/oracle.hpp"

namespace sitcalc {

struct ProgressionResult {
    Theory theory;  // NOW-uniform
    std::set<GroundAtom> omega;
    Theory instances;  // D_ss[omega] before forgetting
};

// Progression of the initial theory through a ground action. Preconditions
// are not consulted; inline them first when they matter.
ProgressionResult progress(const BasicActionTheory& b, const GroundAction& alpha);

struct ComponentwiseResult {
    Decomposition decomposition;
    std::set<GroundAtom> omega;
    std::vector<bool> touched;  // per component
};

ComponentwiseResult progress_componentwise(const BasicActionTheory& b, const Decomposition& init_decomp,
                                           const std::vector<std::set<std::string>>& ssa_partition,
                                           const GroundAction& alpha, const Signature& delta1 = {});

BasicActionTheory with_init(const BasicActionTheory& b, Theory init);

std::vector<ProgressionResult> progress_sequence(const BasicActionTheory& b, const std::vector<GroundAction>& actions);

// Current theory after the whole sequence; b.init for the empty sequence.
Theory progressed_theory(const BasicActionTheory& b, const std::vector<GroundAction>& actions);

// Does the query hold after the actions? Finite-domain verdict.
EntailmentResult project(const BasicActionTheory& b, const std::vector<GroundAction>& actions, const Formula& query,
                         const OracleConfig& cfg = {});

struct ExecutabilityStep {
    GroundAction action;
    Formula precondition;
    EntailmentResult verdict;
};

// One step per action up to and including the first whose precondition is
// not entailed.
std::vector<ExecutabilityStep> executable(const BasicActionTheory& b, const std::vector<GroundAction>& actions,
                                          const OracleConfig& cfg = {});

}  // namespace sitcalc
