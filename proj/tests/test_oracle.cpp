#include <gtest/gtest.h>

#include "sitcalc/decomposition.hpp"
#include "sitcalc/forgetting.hpp"
#include "sitcalc/oracle.hpp"
#include "support.hpp"

using namespace sitcalc;
using namespace testsupport;

namespace {

struct BruteVerdict {
    bool entailed = true;
    bool sat = false;
};

// Domain sizes |constants| .. |constants| + extra, constants distinct.
BruteVerdict brute(const Signature& s, const Theory& t, const Formula& phi, int extra) {
    BruteVerdict v;
    std::vector<std::string> cs(s.constants.begin(), s.constants.end());
    auto rels = relations_of(s, {Stage::Now});
    for (std::size_t n = cs.size(); n <= cs.size() + static_cast<std::size_t>(extra); ++n)
        enumerate(cs, n, rels, [&](const FiniteModel& m) {
            if (!holds(m, t)) return true;
            v.sat = true;
            if (!holds(m, phi)) v.entailed = false;
            return true;
        });
    return v;
}

std::size_t slot_count(const Signature& s, std::size_t n) {
    std::size_t k = 0;
    for (const auto& r : relations_of(s, {Stage::Now})) k += tuples(n, r.arity).size();
    return k;
}

}  // namespace

TEST(Oracle, AgreesWithBruteForce) {
    RandomTheory gen(2024);
    int checked = 0;
    while (checked < 100) {
        auto s = gen.signature();
        int extra = slot_count(s, s.constants.size() + 1) <= 16 ? 1 : 0;
        if (slot_count(s, s.constants.size() + extra) > 16) continue;
        auto t = gen.theory(s);
        auto phi = gen.formula(s, 2);
        OracleConfig cfg;
        cfg.max_extra = extra;
        cfg.constants = s.constants;
        cfg.vocabulary = s;
        auto expect = brute(s, t, phi, extra);
        auto e = entails(t, phi, cfg);
        ASSERT_EQ(e.entailed, expect.entailed) << render(t) << "|= " << render(phi);
        if (!e.entailed) {
            ASSERT_TRUE(e.countermodel);
            EXPECT_TRUE(holds(*e.countermodel, t));
            EXPECT_FALSE(holds(*e.countermodel, phi));
        }
        EXPECT_EQ(satisfiable(t, cfg).sat, expect.sat) << render(t);
        ++checked;
    }
}

TEST(Oracle, ModelsSatisfyTheTheory) {
    Signature s;
    s.constants = {"a"};
    s.statics = {{"P", 1}};
    OracleConfig cfg;
    cfg.max_extra = 1;
    auto ms = models(theory({"exists x !P(x)", "P(a)"}, s), cfg);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(ms[0].size, 2u);
    EXPECT_TRUE(holds(ms[0], f("P(a)", s)));
}

TEST(Oracle, EquivalenceReportsTheSide) {
    Signature s;
    s.constants = {"a"};
    s.statics = {{"P", 1}, {"Q", 1}};
    auto t1 = theory({"P(a) & Q(a)"}, s);
    auto t2 = theory({"P(a)"}, s);
    auto r = equivalent(t1, t2);
    EXPECT_FALSE(r.equivalent);
    EXPECT_EQ(r.side, 2);
    ASSERT_TRUE(r.countermodel);
    EXPECT_TRUE(holds(*r.countermodel, t2));
    EXPECT_FALSE(holds(*r.countermodel, t1));
    EXPECT_TRUE(equivalent(t1, theory({"Q(a)", "P(a)"}, s)).equivalent);
}

TEST(Oracle, UnaCanBeSwitchedOff) {
    Signature s;
    s.constants = {"a", "b"};
    OracleConfig cfg;
    EXPECT_TRUE(entails(Theory{}, f("a != b", s), cfg).entailed);
    cfg.una = false;
    EXPECT_FALSE(entails(Theory{}, f("a != b", s), cfg).entailed);
}

TEST(Oracle, HoldsEvaluatesBothStages) {
    Signature s;
    s.constants = {"a"};
    s.fluents = {{"F", 1}};
    OracleConfig cfg;
    cfg.max_extra = 0;
    auto ms = models(theory({"F(a) & !F(a)@next"}, s), cfg);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_TRUE(holds(ms[0], f("F(a)", s)));
    EXPECT_FALSE(holds(ms[0], f("F(a)@next", s)));
}

TEST(Oracle, BudgetIsEnforced) {
    Signature s;
    s.statics = {{"R", 2}};
    OracleConfig cfg;
    cfg.max_extra = 7;
    cfg.budget_ms = 1;
    auto t = theory({"forall x exists y R(x, y)", "forall x !R(x, x)", "forall x, y, z (R(x, y) & R(y, z) -> R(x, z))"},
                    s);
    EXPECT_THROW(entails(t, f("false", s), cfg), BudgetExceeded);
}

TEST(Inseparable, StacksAndBlocksShareOnlyBlock) {
    auto b = load("blocksstacks.bat");
    auto d = syntactic_decompose(b.init, b.sig.restrict_to({"Block"}));
    ASSERT_EQ(d.components.size(), 2u);
    Signature delta = b.sig.restrict_to({"Block"});
    OracleConfig cfg;
    cfg.constants = {"A", "B", "C"};
    cfg.una = false;
    cfg.max_extra = 0;
    auto r = check_inseparable(d.components[0], d.components[1], delta, cfg, 2);
    EXPECT_EQ(r.kind, InseparabilityResult::Kind::InseparableFinite) << to_string(r.kind);
    cfg.una = true;
    r = check_inseparable(d.components[0], d.components[1], delta, cfg, 2);
    EXPECT_EQ(r.kind, InseparabilityResult::Kind::Separated);
    ASSERT_TRUE(r.witness);
    ASSERT_TRUE(r.countermodel);
    Theory entailing = r.entailed_by == 1 ? d.components[0] : d.components[1];
    EXPECT_TRUE(entails(entailing, *r.witness, cfg).entailed);
    EXPECT_FALSE(holds(*r.countermodel, *r.witness));
}

TEST(Inseparable, SmallestWitnessFirst) {
    Signature s;
    s.constants = {"c"};
    s.statics = {{"P", 1}, {"Q", 1}};
    auto r = check_inseparable(theory({"P(c)", "Q(c)"}, s), theory({"Q(c)"}, s), s.restrict_to({"P", "c"}));
    ASSERT_EQ(r.kind, InseparabilityResult::Kind::Separated);
    EXPECT_EQ(render(*r.witness), "exists x (P(x))");
    EXPECT_EQ(r.entailed_by, 1);
}

TEST(Reducts, CountAndContainment) {
    Signature s;
    s.constants = {"c"};
    s.statics = {{"P", 1}, {"Q", 1}};
    Signature delta = s.restrict_to({"P", "c"});
    OracleConfig cfg;
    cfg.constants = {"c"};
    cfg.max_extra = 1;
    // Sizes 1 and 2; the anonymous element is told apart from c.
    EXPECT_EQ(count_reducts(Theory{}, delta, cfg), 2u + 4u);
    auto strong = theory({"forall x P(x)"}, s);
    auto c = check_cons_containment(strong, Theory{}, delta, cfg);
    EXPECT_TRUE(c.reducts1_in_2);
    EXPECT_FALSE(c.reducts2_in_1);
    EXPECT_EQ(c.reducts1, 2u);
}

TEST(Reducts, ExpansionCondition) {
    Signature s;
    s.constants = {"c"};
    s.statics = {{"P", 1}, {"Q", 1}, {"S", 1}};
    OracleConfig cfg;
    EXPECT_TRUE(expansion_condition(theory({"forall x (P(x) -> Q(x))"}, s), theory({"forall x (P(x) -> S(x))"}, s), cfg));
    EXPECT_FALSE(expansion_condition(theory({"exists x P(x)"}, s), theory({"forall x !P(x)", "Q(c)"}, s), cfg));
}

TEST(VerifyForgetting, NominalExamples) {
    GroundAtom g{false, "R", {"c", "c"}, Stage::Now};
    OracleConfig cfg;
    cfg.max_extra = 1;
    // R(c, a) already gives c a successor, so R(c, c) is irrelevant in the first theory.
    auto t1 = load("nominals_t1.bat");
    EXPECT_TRUE(verify_forgetting(t1.init, g, t1.init, cfg).ok);
    auto t2 = load("nominals_t2.bat");
    auto r = forget_atom(t2.init, g);
    EXPECT_TRUE(verify_forgetting(t2.init, g, r, cfg).ok);
    EXPECT_FALSE(verify_forgetting(t2.init, g, t2.init, cfg).ok);
}
