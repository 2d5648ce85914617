#include "sitcalc/progression.hpp"

#include <algorithm>

#include "sitcalc/forgetting.hpp"
#include "sitcalc/simplify.hpp"

namespace sitcalc {

namespace {

void require_local_effect(const BasicActionTheory& b) {
    auto le = is_local_effect(b);
    if (!le.local) throw ModelError(le.offenders.front().span.str() + ": " + le.offenders.front().message);
}

// Surviving NOW atoms are unaffected by the action, so NOW and NEXT collapse.
Theory shift(const Theory& t) {
    return rename_stage(rename_stage(t, Stage::Now, Stage::Next), Stage::Next, Stage::Now);
}

}  // namespace

ProgressionResult progress(const BasicActionTheory& b, const GroundAction& alpha) {
    require_local_effect(b);
    ProgressionResult r;
    r.omega = characteristic_set(b, alpha);
    r.instances = instantiate_ssas(b, alpha, r.omega);
    r.theory = shift(forget_atoms(r.instances + b.init, r.omega));
    return r;
}

ComponentwiseResult progress_componentwise(const BasicActionTheory& b, const Decomposition& init_decomp,
                                           const std::vector<std::set<std::string>>& ssa_partition,
                                           const GroundAction& alpha, const Signature& delta1) {
    auto report = check_local_effect_preservation(b, delta1, init_decomp.delta, ssa_partition, init_decomp);
    if (!report.ok()) {
        std::string failed;
        for (const auto& c : report.conditions)
            if (!c.holds) failed += (failed.empty() ? "" : ", ") + c.name;
        throw ModelError("componentwise progression preconditions fail: " + failed);
    }

    ComponentwiseResult r;
    r.omega = characteristic_set(b, alpha);
    r.decomposition.delta = init_decomp.delta;
    r.touched.assign(init_decomp.components.size(), false);

    std::map<std::string, std::size_t> fluent_component;
    for (std::size_t i = 0; i < ssa_partition.size(); ++i)
        for (const auto& f : ssa_partition[i]) fluent_component[f] = report.f_map.at(i);

    std::vector<std::set<GroundAtom>> local(init_decomp.components.size());
    for (const auto& g : r.omega) local[fluent_component.at(g.pred)].insert(g);

    for (std::size_t j = 0; j < init_decomp.components.size(); ++j) {
        const Theory& c = init_decomp.components[j];
        if (local[j].empty()) {
            r.decomposition.components.push_back(c);
            continue;
        }
        r.touched[j] = true;
        Theory instances = instantiate_ssas(b, alpha, local[j]);
        r.decomposition.components.push_back(shift(forget_atoms(instances + c, local[j])));
    }
    return r;
}

BasicActionTheory with_init(const BasicActionTheory& b, Theory init) {
    BasicActionTheory out = b;
    out.init = std::move(init);
    out.init_spans.clear();
    return out;
}

std::vector<ProgressionResult> progress_sequence(const BasicActionTheory& b, const std::vector<GroundAction>& actions) {
    std::vector<ProgressionResult> out;
    BasicActionTheory current = b;
    for (const auto& alpha : actions) {
        out.push_back(progress(current, alpha));
        current = with_init(current, out.back().theory);
    }
    return out;
}

Theory progressed_theory(const BasicActionTheory& b, const std::vector<GroundAction>& actions) {
    auto steps = progress_sequence(b, actions);
    return steps.empty() ? b.init : steps.back().theory;
}

EntailmentResult project(const BasicActionTheory& b, const std::vector<GroundAction>& actions, const Formula& query,
                         const OracleConfig& cfg) {
    if (!is_sentence(query)) throw ModelError("query has free variables");
    auto u = check_uniform(Theory{{query}});
    if (!u.uniform || u.stage.value_or(Stage::Now) != Stage::Now) throw ModelError("query is not uniform in NOW");
    return entails(progressed_theory(b, actions), query, cfg);
}

std::vector<ExecutabilityStep> executable(const BasicActionTheory& b, const std::vector<GroundAction>& actions,
                                          const OracleConfig& cfg) {
    std::vector<ExecutabilityStep> out;
    BasicActionTheory current = b;
    for (const auto& alpha : actions) {
        Formula pre = precondition_of(current, alpha);
        out.push_back({alpha, pre, entails(current.init, pre, cfg)});
        if (!out.back().verdict.entailed) break;
        current = with_init(current, progress(current, alpha).theory);
    }
    return out;
}

}  // namespace sitcalc
