// Standalone acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "sitcalc/decomposition.hpp"
#include "sitcalc/forgetting.hpp"
#include "sitcalc/oracle.hpp"
#include "sitcalc/progression.hpp"
#include "sitcalc/simplify.hpp"
#include "support.hpp"

using namespace sitcalc;
using namespace testsupport;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<Outcome()> run;
};

OracleConfig bounded(std::set<std::string> constants, int max_extra) {
    OracleConfig cfg;
    cfg.constants = std::move(constants);
    cfg.max_extra = max_extra;
    return cfg;
}

Formula ssa_body(const TransformedSSA& t) {
    std::vector<Term> head;
    for (const auto& v : t.head_vars) head.push_back(Term::var(v));
    return simplify(Formula::disj(t.gamma_pos, Formula::conj(Formula::fluent(t.fluent, head, Stage::Now),
                                                               Formula::negate(t.gamma_neg))));
}

Outcome bw_pipeline() {
    Outcome o;
    auto b = load("bw_move.bat");
    GroundAction alpha{"move", {"C1", "C2", "C3"}};
    std::set<GroundAtom> expected{{true, "Clear", {"C2"}, Stage::Now},
                                  {true, "Clear", {"C3"}, Stage::Now},
                                  {true, "On", {"C1", "C3"}, Stage::Now},
                                  {true, "On", {"C1", "C2"}, Stage::Now}};
    o.require(characteristic_set(b, alpha) == expected, "characteristic set differs");

    auto clear = transform_ssa(b.ssas.at("Clear"), alpha);
    auto on = transform_ssa(b.ssas.at("On"), alpha);
    Formula want_clear = simplify(f("x == C2 | Clear(x) & !(x == C3)", b.sig, {"x"}));
    Formula want_on = simplify(f("x == C1 & y == C3 | On(x, y) & !(x == C1 & y == C2)", b.sig, {"x", "y"}));
    o.require(ssa_body(clear) == want_clear, "Clear: got " + render(ssa_body(clear)));
    o.require(ssa_body(on) == want_on, "On: got " + render(ssa_body(on)));
    return o;
}

Outcome decomposability_lost() {
    Outcome o;
    auto b = load("decomposability_lost.bat");
    auto r = progress(b, {"A", {"c"}});
    auto want = theory({"F(c) <-> P(c)", "exists x P(x)"}, b.sig);
    auto e = equivalent(r.theory, want, bounded({"c"}, 2));
    o.require(e.equivalent, "not equivalent: " + (e.countermodel ? e.countermodel->str() : std::string()));
    return o;
}

Theory expected_running_result(const BasicActionTheory& b) {
    std::string phi = "(x != B & !exists y ((y != A | x != B) & On(y, x)))";
    std::string psi = "(x == A | exists y ((x != A | B != y) & On(x, y)))";
    auto t = theory({"forall x (" + phi + " & " + psi + " & x != C -> Clear(x))",
                     "forall x (" + psi + " -> Block(x))",
                     "Block(B) & Block(C) & On(A, C) & !On(A, B)",
                     "Clear(A) & Clear(B) & !Clear(C)"},
                    b.sig);
    return t + slice(b.init, 3, b.init.size());
}

Outcome running_example() {
    Outcome o;
    auto b = load("blocksstacks.bat");
    auto r = progress(b, {"move", {"A", "B", "C"}});
    auto e = equivalent(r.theory, expected_running_result(b), bounded({"A", "B", "C"}, 1));
    o.require(e.equivalent, "side " + std::to_string(e.side) + " countermodel: " +
                                (e.countermodel ? e.countermodel->str() : std::string()));
    return o;
}

Decomposition running_decomposition(const BasicActionTheory& b) {
    Signature delta;
    delta.statics["Block"] = 1;
    return syntactic_decompose(b.init, delta);
}

Outcome componentwise() {
    Outcome o;
    auto b = load("blocksstacks.bat");
    auto d = running_decomposition(b);
    o.require(d.components.size() == 2, "expected two initial components");
    if (!o.pass) return o;
    GroundAction alpha{"move", {"A", "B", "C"}};
    auto r = progress_componentwise(b, d, ssa_groups(b, {}), alpha);
    o.require(r.decomposition.components.at(1).axioms == d.components[1].axioms, "stacks component changed");
    o.require(r.touched == std::vector<bool>{true, false}, "unexpected touched components");
    auto e = equivalent(r.decomposition.united(), progress(b, alpha).theory, bounded({"A", "B", "C"}, 1));
    o.require(e.equivalent, "union differs from monolithic progression");
    return o;
}

Outcome forgetting_goldens() {
    Outcome o;
    Signature s;
    s.constants = {"c"};
    s.statics["P"] = 1;
    GroundAtom pc{false, "P", {"c"}, Stage::Now};
    auto cfg = bounded({"c"}, 2);

    auto r1 = forget_atom(theory({"!P(c)"}, s), pc);
    o.require(equivalent(r1, Theory{}, cfg).equivalent, "forget(!P(c)) is not a tautology");

    auto r2 = forget_atom(theory({"forall x P(x)"}, s), pc);
    o.require(equivalent(r2, theory({"forall x (x != c -> P(x))"}, s), cfg).equivalent,
              "forget(forall x P(x)) wrong: " + render(r2));

    auto sym = load("boole_symbol.bat");
    Formula a_to_b = f("A -> B", sym.sig);
    auto whole = forget_ground_symbol(sym.init, "P");
    o.require(entails(whole, a_to_b).entailed, "forgetting P in the union loses A -> B");
    Theory parts = forget_ground_symbol(slice(sym.init, 0, 1), "P") + forget_ground_symbol(slice(sym.init, 1, 2), "P");
    o.require(equivalent(parts, Theory{}).equivalent, "componentwise forgetting of P is not tautological");
    o.require(!entails(parts, a_to_b).entailed, "componentwise forgetting of P keeps A -> B");

    auto atom = load("boole_atom.bat");
    GroundAtom g = parse_atom("P(c)", atom.sig);
    Formula a_to_b2 = f("A -> B", atom.sig);
    o.require(entails(forget_atom(atom.init, g), a_to_b2).entailed, "forgetting P(c) in the union loses A -> B");
    Theory parts2 = forget_atom(slice(atom.init, 0, 1), g) + forget_atom(slice(atom.init, 1, 2), g);
    o.require(equivalent(parts2, Theory{}, bounded({"c"}, 1)).equivalent,
              "componentwise forgetting of P(c) is not tautological");
    return o;
}

Outcome inseparability_lost() {
    Outcome o;
    auto t1 = load("nominals_t1.bat"), t2 = load("nominals_t2.bat");
    GroundAtom rcc{false, "R", {"c", "c"}, Stage::Now};
    Signature delta;
    delta.statics["R"] = 2;
    delta.constants = {"c"};
    auto cfg = bounded({"a", "c"}, 1);

    auto r = check_inseparable(forget_atom(t1.init, rcc), forget_atom(t2.init, rcc), delta, cfg, 3);
    o.require(r.kind == InseparabilityResult::Kind::Separated, std::string("after forgetting: ") + to_string(r.kind));
    if (r.witness) {
        auto want = theory({"forall x exists y R(x, y)"}, t1.sig);
        o.require(equivalent(Theory{{*r.witness}}, want, cfg).equivalent,
                  "witness " + render(*r.witness) + " is not equivalent to forall x exists y R(x, y)");
    }
    return o;
}

Outcome negative_regressions() {
    Outcome o;
    auto b = load("decomposability_lost.bat");
    auto out = progress(b, {"A", {"c"}}).theory;
    Signature c_only;
    c_only.constants = {"c"};
    o.require(syntactic_decompose(out, {}).components.size() == 1, "progression decomposes with empty Delta");
    o.require(syntactic_decompose(out, c_only).components.size() == 1, "progression decomposes with Delta = {c}");

    auto s = load("component_split.bat");
    Signature delta;
    delta.statics = {{"D", 1}, {"R", 2}};
    Decomposition before{delta, {slice(s.init, 0, 3), slice(s.init, 3, 6)}};
    auto r = progress_componentwise(s, before, ssa_groups(s, {}), {"A", {"c"}});
    auto splits = detect_split(before, refine_components(r.decomposition, r.touched));
    o.require(splits.size() == 1 && splits[0].before == 0, "split of the first component not reported");
    return o;
}

Outcome checker_goldens() {
    Outcome o;
    auto b = load("blocksstacks.bat");
    Signature d2;
    d2.statics["Block"] = 1;
    auto groups = ssa_groups(b, {});
    auto d = running_decomposition(b);
    auto le = check_local_effect_preservation(b, {}, d2, groups, d);
    o.require(le.ok(), "local-effect preservation conditions fail");
    o.require(le.f_map == std::map<std::size_t, std::size_t>{{0, 0}, {1, 1}}, "unexpected f_map");
    auto sp = check_strong_preservation(b, {}, d2, {"move", {"A", "B", "C"}}, groups, d);
    o.require(sp.ok(), "strong preservation conditions fail");

    auto without = b;
    without.init.axioms.erase(without.init.axioms.begin() + 4);
    auto d_without = running_decomposition(without);
    auto le2 = check_local_effect_preservation(without, {}, d2, groups, d_without);
    const Condition* cov = le2.find("fluent-coverage");
    o.require(cov && !cov->holds, "fluent coverage still holds without the Under tautology");
    return o;
}

// Forgetting laws and semantic check over random small theories.
Outcome property_suites() {
    Outcome o;
    constexpr int kCases = 100;
    auto cfg_for = [](const Signature& s) {
        OracleConfig cfg;
        cfg.constants = s.constants;
        cfg.vocabulary = s;
        cfg.max_extra = 1;
        return cfg;
    };
    int failures[5] = {0, 0, 0, 0, 0};
    RandomTheory gen(20240601);
    for (int i = 0; i < kCases; ++i) {
        auto s = gen.signature();
        auto t = gen.theory(s);
        auto g1 = gen.ground_atom(s), g2 = gen.ground_atom(s);
        auto cfg = cfg_for(s);
        auto once = forget_atom(t, g1);
        bool idem = equivalent(forget_atom(once, g1), once, cfg).equivalent;
        bool comm = equivalent(forget_atom(once, g2), forget_atom(forget_atom(t, g2), g1), cfg).equivalent;
        GroundAtom absent{false, "Q", {*s.constants.begin()}, Stage::Now};
        bool irrelevant = forget_atom(t, absent).axioms == t.axioms;
        if (!(idem && comm && irrelevant)) ++failures[0];
    }
    RandomTheory gen2(20240602);
    for (int i = 0; i < kCases; ++i) {
        auto s = gen2.signature();
        s.statics["R"] = 2;
        auto t = gen2.theory(s);
        auto g = gen2.ground_atom(s, "P");
        Signature rs = s;
        rs.statics.erase("P");
        auto phi = gen2.formula(rs, 2);
        auto cfg = cfg_for(s);
        if (entails(t, phi, cfg).entailed != entails(forget_atom(t, g), phi, cfg).entailed) ++failures[1];
    }
    RandomTheory gen3(20240603);
    for (int i = 0; i < kCases; ++i) {
        auto s = gen3.signature();
        Signature s1 = s, s2 = s;
        s1.statics.erase("R");
        s2.statics.erase("P");
        s2.statics["R"] = 2;
        auto t1 = gen3.theory(s1), t2 = gen3.theory(s2);
        auto g = gen3.ground_atom(s1, "P");
        Signature all = s1.unite(s2);
        auto cfg = cfg_for(all);
        if (!equivalent(forget_atom(t1 + t2, g), forget_atom(t1, g) + t2, cfg).equivalent) ++failures[2];
    }
    RandomTheory gen4(20240604);
    for (int i = 0; i < kCases; ++i) {
        auto s = gen4.signature(i % 2 == 1);
        auto t = gen4.theory(s);
        auto g = gen4.ground_atom(s);
        if (!verify_forgetting(t, g, forget_atom(t, g), cfg_for(s)).ok) ++failures[3];
    }
    const char* names[] = {"basic laws", "consequence preservation", "one-component distributivity",
                           "semantic forgetting"};
    for (int k = 0; k < 4; ++k)
        o.require(failures[k] == 0, std::string(names[k]) + ": " + std::to_string(failures[k]) + " failures");
    return o;
}

Outcome inverse_round_trip() {
    Outcome o;
    auto b = load("blocksworld.bat");
    auto t = progressed_theory(b, {{"move", {"A", "B", "C"}}, {"move", {"A", "C", "B"}}});
    auto e = equivalent(t, b.init, bounded({"A", "B", "C"}, 1));
    o.require(e.equivalent, "round trip differs: " + (e.countermodel ? e.countermodel->str() : std::string()));
    return o;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "blocks world characteristic set and transformed axioms", 1, bw_pipeline},
        {2, "progression loses decomposability", 5, decomposability_lost},
        {3, "running example progression", 60, running_example},
        {4, "componentwise progression agrees", 60, componentwise},
        {5, "forgetting goldens", 3, forgetting_goldens},
        {6, "inseparability lost under forgetting", 30, inseparability_lost},
        {7, "no decomposition and component split", 10, negative_regressions},
        {8, "preservation checkers", 1, checker_goldens},
        {9, "forgetting property suites", 300, property_suites},
        {10, "inverse action round trip", 30, inverse_round_trip},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s) o.require(false, "runtime over limit");
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(3);
        line << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " (" << secs << " s, limit "
             << c.limit_s << " s)";
        if (!o.detail.empty()) line << ": " << o.detail;
        std::cout << line.str() << std::endl;
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
