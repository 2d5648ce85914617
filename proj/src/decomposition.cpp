#include "sitcalc/decomposition.hpp"

#include <algorithm>
#include <numeric>

#include "sitcalc/surface.hpp"

namespace sitcalc {

namespace {

class UnionFind {
public:
    std::size_t id(const std::string& s) {
        auto [it, fresh] = ids_.emplace(s, parent_.size());
        if (fresh) parent_.push_back(parent_.size());
        return it->second;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(const std::string& a, const std::string& b) {
        std::size_t ra = find(id(a)), rb = find(id(b));
        if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
    }

private:
    std::map<std::string, std::size_t> ids_;
    std::vector<std::size_t> parent_;
};

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
    return std::any_of(a.begin(), a.end(), [&](const std::string& s) { return b.count(s) > 0; });
}

// Group items by connectivity of their non-Delta symbols. Items with no such
// symbol join the group of the nearest preceding item that has one.
std::vector<std::vector<std::size_t>> group(const std::vector<std::set<std::string>>& syms) {
    UnionFind uf;
    for (const auto& s : syms) {
        if (s.empty()) continue;
        for (const auto& x : s) uf.unite(*s.begin(), x);
    }
    std::vector<std::vector<std::size_t>> groups;
    std::map<std::size_t, std::size_t> root_to_group;
    std::vector<std::optional<std::size_t>> assigned(syms.size());
    for (std::size_t i = 0; i < syms.size(); ++i) {
        if (syms[i].empty()) continue;
        std::size_t root = uf.find(uf.id(*syms[i].begin()));
        auto [it, fresh] = root_to_group.emplace(root, groups.size());
        if (fresh) groups.emplace_back();
        assigned[i] = it->second;
    }
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < syms.size(); ++i) {
        if (assigned[i]) {
            last = assigned[i];
            continue;
        }
        if (last) assigned[i] = last;
    }
    for (std::size_t i = 0; i < syms.size(); ++i) {
        if (!assigned[i]) {
            if (groups.empty()) groups.emplace_back();
            assigned[i] = 0;
        }
        groups[*assigned[i]].push_back(i);
    }
    return groups;
}

std::string join(const std::set<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
    return out;
}

}  // namespace

std::vector<Signature> Decomposition::signature_components() const {
    std::vector<Signature> out;
    for (const auto& c : components) out.push_back(signature_of(c));
    return out;
}

Theory Decomposition::united() const {
    Theory t;
    for (const auto& c : components) t = t + c;
    return t;
}

Decomposition syntactic_decompose(const Theory& t, const Signature& delta) {
    std::set<std::string> d = delta.symbols();
    std::vector<std::set<std::string>> syms;
    for (const auto& ax : t.axioms) syms.push_back(minus(signature_of(ax).symbols(), d));
    Decomposition out{delta, {}};
    for (const auto& g : group(syms)) {
        Theory c;
        for (auto i : g) c.axioms.push_back(t.axioms[i]);
        out.components.push_back(std::move(c));
    }
    return out;
}

std::vector<std::vector<GroundAtom>> decompose_ground(const std::vector<GroundAtom>& atoms, const Signature& delta) {
    std::set<std::string> d = delta.symbols();
    std::vector<std::set<std::string>> syms;
    for (const auto& a : atoms) {
        std::set<std::string> s{a.pred};
        s.insert(a.args.begin(), a.args.end());
        syms.push_back(minus(s, d));
    }
    std::vector<std::vector<GroundAtom>> out;
    for (const auto& g : group(syms)) {
        std::vector<GroundAtom> c;
        for (auto i : g) c.push_back(atoms[i]);
        out.push_back(std::move(c));
    }
    return out;
}

DecompositionCheck verify_decomposition(const Theory& t, const Decomposition& d, const std::optional<OracleConfig>& cfg) {
    DecompositionCheck r;
    std::set<std::string> delta = d.delta.symbols();
    auto sigs = d.signature_components();
    r.disjoint = true;
    for (std::size_t i = 0; i < sigs.size(); ++i)
        for (std::size_t j = i + 1; j < sigs.size(); ++j) {
            auto shared = minus(sigs[i].intersect(sigs[j]).symbols(), delta);
            if (!shared.empty()) {
                r.disjoint = false;
                r.details.push_back("components " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                    " share " + join(shared));
            }
        }
    Signature all;
    for (const auto& s : sigs) all = all.unite(s);
    r.covering = all.symbols() == signature_of(t).symbols();
    if (!r.covering) r.details.push_back("component signatures do not cover the theory signature");
    r.proper = true;
    for (std::size_t i = 0; i < sigs.size(); ++i)
        if (minus(sigs[i].symbols(), delta).empty()) {
            r.proper = false;
            r.details.push_back("component " + std::to_string(i + 1) + " has no symbol outside Delta");
        }
    if (cfg) {
        auto e = equivalent(t, d.united(), *cfg);
        r.equivalent = e.equivalent;
        if (!e.equivalent) r.details.push_back("components are not equivalent to the theory");
    }
    return r;
}

bool check_fluent_free(const Signature& delta, std::vector<std::string>* offenders) {
    if (offenders)
        for (const auto& [f, n] : delta.fluents) offenders->push_back(f);
    return delta.fluents.empty();
}

Signature ssa_signature(const SuccessorStateAxiom& ssa) {
    Signature s = signature_of(ssa_formula(ssa, "a$"));
    s.fluents[ssa.fluent] = static_cast<int>(ssa.head_vars.size());
    return s;
}

std::vector<std::set<std::string>> ssa_groups(const BasicActionTheory& b, const Signature& delta1) {
    std::set<std::string> d = delta1.symbols();
    std::vector<std::string> names;
    std::vector<std::set<std::string>> syms;
    for (const auto& [name, ssa] : b.ssas) {
        names.push_back(name);
        syms.push_back(minus(ssa_signature(ssa).symbols(), d));
    }
    std::vector<std::set<std::string>> out;
    for (const auto& g : group(syms)) {
        std::set<std::string> s;
        for (auto i : g) s.insert(names[i]);
        out.push_back(s);
    }
    return out;
}

bool AlignmentReport::ok() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.holds; });
}

const Condition* AlignmentReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

AlignmentReport check_local_effect_preservation(const BasicActionTheory& b, const Signature& delta1,
                                                const Signature& delta2,
                                                const std::vector<std::set<std::string>>& ssa_partition,
                                                const Decomposition& init_decomp) {
    AlignmentReport r;

    Condition le{"local-effect", true, {}};
    auto lev = is_local_effect(b);
    le.holds = lev.local;
    for (const auto& o : lev.offenders) le.details.push_back(o.span.str() + ": " + o.message);
    r.conditions.push_back(le);

    Condition ff{"delta-fluent-free", true, {}};
    std::vector<std::string> offenders;
    ff.holds = check_fluent_free(delta1, &offenders) & check_fluent_free(delta2, &offenders);
    for (const auto& f : offenders) ff.details.push_back("fluent " + f + " in Delta");
    r.conditions.push_back(ff);

    Condition part{"ssa-partition", true, {}};
    std::map<std::string, int> seen;
    for (const auto& g : ssa_partition) {
        if (g.empty()) {
            part.holds = false;
            part.details.push_back("empty SSA group");
        }
        for (const auto& f : g) {
            if (!b.ssas.count(f)) {
                part.holds = false;
                part.details.push_back("no successor state axiom for " + f);
            }
            ++seen[f];
        }
    }
    for (const auto& [f, ssa] : b.ssas)
        if (seen[f] != 1) {
            part.holds = false;
            part.details.push_back("successor state axiom for " + f + " is not in exactly one group");
        }
    r.conditions.push_back(part);

    std::vector<Signature> group_sigs;
    for (const auto& g : ssa_partition) {
        Signature s;
        for (const auto& f : g)
            if (auto it = b.ssas.find(f); it != b.ssas.end()) s = s.unite(ssa_signature(it->second));
        group_sigs.push_back(s);
    }

    Condition sep{"ssa-signature-separation", true, {}};
    std::set<std::string> d1 = delta1.symbols();
    for (std::size_t i = 0; i < group_sigs.size(); ++i)
        for (std::size_t j = i + 1; j < group_sigs.size(); ++j) {
            auto shared = minus(group_sigs[i].intersect(group_sigs[j]).symbols(), d1);
            if (!shared.empty()) {
                sep.holds = false;
                sep.details.push_back("SSA groups " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                      " share " + join(shared));
            }
        }
    r.conditions.push_back(sep);

    Condition dec{"init-decomposition", true, {}};
    Signature dd = delta1.unite(delta2);
    Decomposition as_given{delta2, init_decomp.components};
    auto vd = verify_decomposition(b.init, as_given);
    if (!vd.disjoint || !vd.covering) {
        dec.holds = false;
        dec.details = vd.details;
    }
    std::set<std::string> dds = dd.symbols();
    for (std::size_t j = 0; j < init_decomp.components.size(); ++j)
        if (minus(signature_of(init_decomp.components[j]).symbols(), dds).empty()) {
            dec.holds = false;
            dec.details.push_back("component " + std::to_string(j + 1) + " has no symbol outside Delta1 and Delta2");
        }
    {
        std::vector<Formula> a = b.init.axioms, u = init_decomp.united().axioms;
        std::sort(a.begin(), a.end());
        std::sort(u.begin(), u.end());
        if (a != u) {
            dec.holds = false;
            dec.details.push_back("components do not partition the initial axioms");
        }
    }
    r.conditions.push_back(dec);

    Signature init_sig = signature_of(b.init);
    Condition cov{"fluent-coverage", true, {}};
    Signature ss;
    for (const auto& [f, ssa] : b.ssas) ss = ss.unite(ssa_signature(ssa));
    for (const auto& [f, n] : ss.fluents)
        if (!init_sig.fluents.count(f)) {
            cov.holds = false;
            cov.details.push_back("fluent " + f + " does not occur in the initial theory");
        }
    r.conditions.push_back(cov);

    Condition align{"ssa-component-alignment", true, {}};
    auto comp_sigs = init_decomp.signature_components();
    for (std::size_t i = 0; i < group_sigs.size(); ++i) {
        auto need = group_sigs[i].intersect(init_sig).symbols();
        bool found = false;
        for (std::size_t j = 0; j < comp_sigs.size() && !found; ++j) {
            auto have = comp_sigs[j].symbols();
            if (std::includes(have.begin(), have.end(), need.begin(), need.end())) {
                r.f_map[i] = j;
                found = true;
            }
        }
        if (!found) {
            align.holds = false;
            align.details.push_back("no initial component contains the symbols {" + join(need) + "} of SSA group " +
                                    std::to_string(i + 1));
        }
    }
    r.conditions.push_back(align);
    return r;
}

AlignmentReport check_strong_preservation(const BasicActionTheory& b, const Signature& delta1, const Signature& delta2,
                                          const GroundAction& alpha,
                                          const std::vector<std::set<std::string>>& ssa_partition,
                                          const Decomposition& init_decomp) {
    AlignmentReport r = check_local_effect_preservation(b, delta1, delta2, ssa_partition, init_decomp);

    Condition na{"no-action-in-delta1", true, {}};
    for (const auto& [a, n] : delta1.actions) {
        na.holds = false;
        na.details.push_back("action " + a + " in Delta1");
    }
    r.conditions.push_back(na);

    Condition ac{"action-constants-aligned", true, {}};
    std::set<std::string> active_fluents;
    for (const auto& [f, ssa] : b.ssas) {
        bool active = false;
        for (const auto* ds : {&ssa.pos, &ssa.neg})
            for (const auto& d : *ds)
                if (d.action.name == alpha.fn) active = true;
        if (active) active_fluents.insert(f);
    }
    std::set<std::string> consts(alpha.args.begin(), alpha.args.end());
    auto comp_sigs = init_decomp.signature_components();
    for (std::size_t j = 0; j < comp_sigs.size(); ++j) {
        bool relevant = std::any_of(active_fluents.begin(), active_fluents.end(),
                                    [&](const std::string& f) { return comp_sigs[j].fluents.count(f) > 0; });
        if (!relevant) continue;
        auto missing = minus(consts, comp_sigs[j].constants);
        if (!missing.empty()) {
            ac.holds = false;
            ac.details.push_back("constants {" + join(missing) + "} of " + render(alpha) + " are not in component " +
                                 std::to_string(j + 1));
        }
    }
    r.conditions.push_back(ac);

    Condition pr{"components-proper", true, {}};
    std::set<std::string> dd = delta1.unite(delta2).symbols();
    dd.insert(consts.begin(), consts.end());
    for (std::size_t j = 0; j < comp_sigs.size(); ++j)
        if (minus(comp_sigs[j].symbols(), dd).empty()) {
            pr.holds = false;
            pr.details.push_back("component " + std::to_string(j + 1) + " lies inside Delta and the action constants");
        }
    r.conditions.push_back(pr);

    Condition inc{"delta1-in-delta2", delta1.symbols().size() == delta1.intersect(delta2).symbols().size(), {}};
    if (!inc.holds) inc.details.push_back("Delta1 is not a subset of Delta2");
    r.conditions.push_back(inc);
    return r;
}

Decomposition refine_components(const Decomposition& d, const std::vector<bool>& which) {
    Decomposition out{d.delta, {}};
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        if (i < which.size() && which[i]) {
            for (auto& c : syntactic_decompose(d.components[i], d.delta).components) out.components.push_back(c);
        } else {
            out.components.push_back(d.components[i]);
        }
    }
    return out;
}

std::vector<SplitReport> detect_split(const Decomposition& before, const Decomposition& after) {
    std::set<std::string> delta = before.delta.unite(after.delta).symbols();
    std::vector<std::set<std::string>> after_syms;
    for (const auto& s : after.signature_components()) after_syms.push_back(minus(s.symbols(), delta));
    std::vector<SplitReport> out;
    auto before_sigs = before.signature_components();
    for (std::size_t i = 0; i < before_sigs.size(); ++i) {
        auto mine = minus(before_sigs[i].symbols(), delta);
        SplitReport r{i, {}};
        for (std::size_t j = 0; j < after_syms.size(); ++j)
            if (intersects(mine, after_syms[j])) r.after.push_back(j);
        if (r.after.size() >= 2) out.push_back(r);
    }
    return out;
}

}  // namespace sitcalc
