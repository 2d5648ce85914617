#include <gtest/gtest.h>

#include "sitcalc/decomposition.hpp"
#include "sitcalc/progression.hpp"
#include "sitcalc/simplify.hpp"
#include "support.hpp"

using namespace sitcalc;
using namespace testsupport;

namespace {

GroundAction act(const BasicActionTheory& b, const std::string& text) { return parse_action(text, b.sig); }

constexpr const char* kRandomBat = R"(
object c1, c2;
static R/2;
fluent P/1;
action A/2, B/1;

ssa P(x) {
  pos: exists y a == A(x, y) & R(y, x);
  neg: a == B(x);
}
)";

std::string key(const FiniteModel& m) {
    std::string k = std::to_string(m.size);
    for (const auto& [rel, tuples] : m.relations) {
        k += "|" + rel.first;
        for (const auto& t : tuples) {
            k += "(";
            for (auto e : t) k += std::to_string(e) + ",";
            k += ")";
        }
    }
    return k;
}

// Successor of m under alpha, computed from the SSAs by direct evaluation.
FiniteModel successor(const BasicActionTheory& b, const FiniteModel& m, const GroundAction& alpha) {
    FiniteModel out = m;
    for (const auto& [name, ssa] : b.ssas) {
        Binding act_binding{{"a", alpha.term()}};
        Formula gp = substitute(gamma(ssa, true), act_binding);
        Formula gn = substitute(gamma(ssa, false), act_binding);
        auto& rel = out.relations[{name, Stage::Now}];
        rel.clear();
        for (const auto& t : tuples(m.size, static_cast<int>(ssa.head_vars.size()))) {
            std::map<std::string, std::size_t> env;
            for (std::size_t i = 0; i < t.size(); ++i) env[ssa.head_vars[i]] = t[i];
            bool now = m.holds_atom(name, Stage::Now, t);
            if (holds(m, gp, env) || (now && !holds(m, gn, env))) rel.insert(t);
        }
    }
    return out;
}

}  // namespace

TEST(Progress, ResultIsNowUniform) {
    for (const char* name : {"blocksworld.bat", "blocksstacks.bat", "decomposability_lost.bat"}) {
        auto b = load(name);
        const auto& [fn, decl] = *b.sig.actions.begin();
        GroundAction alpha{fn, std::vector<std::string>(static_cast<std::size_t>(decl), *b.sig.constants.begin())};
        auto r = progress(b, alpha);
        auto u = check_uniform(r.theory);
        EXPECT_TRUE(u.uniform) << name;
        EXPECT_FALSE(u.stage && *u.stage == Stage::Next) << name;
        EXPECT_EQ(r.omega, characteristic_set(b, alpha));
        for (const auto& ax : r.theory.axioms) EXPECT_TRUE(is_sentence(ax));
    }
}

TEST(Progress, EmptyOmegaLeavesTheTheory) {
    auto b = load("decomposability_lost.bat");
    Signature s = b.sig;
    s.actions["Noop"] = 0;
    b.sig = s;
    auto r = progress(b, GroundAction{"Noop", {}});
    EXPECT_TRUE(r.omega.empty());
    EXPECT_TRUE(equivalent(r.theory, b.init).equivalent);
}

TEST(Progress, NonLocalEffectIsRejected) {
    auto b = load("blocksstacks_pop1.bat");
    const auto& [fn, arity] = *b.sig.actions.begin();
    GroundAction alpha{fn, std::vector<std::string>(static_cast<std::size_t>(arity), *b.sig.constants.begin())};
    EXPECT_THROW(progress(b, alpha), ModelError);
}

TEST(Progress, LosesNoConsequences) {
    auto b = load("decomposability_lost.bat");
    auto r = progress(b, act(b, "A(c)"));
    OracleConfig cfg;
    cfg.max_extra = 2;
    EXPECT_TRUE(entails(r.theory, f("exists x P(x)", b.sig)).entailed);
    EXPECT_TRUE(entails(r.theory, f("P(c) <-> F(c)", b.sig), cfg).entailed);
    EXPECT_FALSE(entails(r.theory, f("F(c)", b.sig), cfg).entailed);
}

TEST(Progress, AgreesWithSuccessorModels) {
    auto b = parse_bat(kRandomBat);
    RandomTheory gen(31);
    for (int i = 0; i < 100; ++i) {
        Signature s = b.sig;
        if (gen.pick(0, 1)) s.constants.erase("c2");
        s.actions.clear();
        b.init = gen.theory(s);
        std::vector<std::string> cs(s.constants.begin(), s.constants.end());
        auto c = [&] { return cs[static_cast<std::size_t>(gen.pick(0, static_cast<int>(cs.size()) - 1))]; };
        GroundAction alpha = gen.pick(0, 2) ? GroundAction{"A", {c(), c()}} : GroundAction{"B", {c()}};
        auto r = progress(b, alpha);

        for (std::size_t n = cs.size(); n <= 3; ++n) {
            std::set<std::string> expected, actual;
            enumerate(cs, n, relations_of(s, {Stage::Now}), [&](const FiniteModel& m) {
                if (holds(m, b.init)) expected.insert(key(successor(b, m, alpha)));
                if (holds(m, r.theory)) actual.insert(key(m));
                return true;
            });
            ASSERT_EQ(expected, actual) << "init:\n" << render(b.init) << "action " << render(alpha) << "\nresult:\n"
                                        << render(r.theory) << "size " << n;
        }
    }
}

TEST(Sequence, BaseCases) {
    auto b = load("blocksworld.bat");
    EXPECT_TRUE(progress_sequence(b, {}).empty());
    EXPECT_EQ(progressed_theory(b, {}), b.init);
    auto alpha = act(b, "move(A,B,C)");
    auto one = progress_sequence(b, {alpha});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].theory, progress(b, alpha).theory);
    auto two = progress_sequence(b, {alpha, act(b, "move(A,C,B)")});
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[1].theory, progress(with_init(b, one[0].theory), act(b, "move(A,C,B)")).theory);
}

TEST(Sequence, Projection) {
    auto b = load("blocksstacks.bat");
    auto moves = parse_actions("move(A,B,C)", b.sig);
    EXPECT_TRUE(project(b, moves, f("Clear(B) & On(A, C)", b.sig)).entailed);
    auto r = project(b, moves, f("Clear(C)", b.sig));
    EXPECT_FALSE(r.entailed);
    ASSERT_TRUE(r.countermodel);
    EXPECT_TRUE(project(b, {}, f("On(A, B)", b.sig)).entailed);
    EXPECT_THROW(project(b, moves, f("On(x, B)", b.sig, {"x"})), ModelError);
    EXPECT_THROW(project(b, moves, f("On(A, B)@next", b.sig)), ModelError);
}

TEST(Sequence, Executability) {
    auto b = load("blocksstacks.bat");
    auto steps = executable(b, parse_actions("move(A,B,C); move(A,C,B)", b.sig));
    ASSERT_EQ(steps.size(), 2u);
    EXPECT_TRUE(steps[0].verdict.entailed);
    EXPECT_TRUE(steps[1].verdict.entailed);

    auto w = load("blocksworld.bat");
    steps = executable(w, parse_actions("move(B,A,C); move(A,B,C)", w.sig));
    ASSERT_EQ(steps.size(), 1u);
    EXPECT_FALSE(steps[0].verdict.entailed);
    EXPECT_TRUE(executable(w, {}).empty());
}

TEST(Componentwise, UntouchedComponentsAreVerbatim) {
    auto b = load("blocksstacks.bat");
    Signature delta2 = b.sig.restrict_to({"Block"});
    auto d = syntactic_decompose(b.init, delta2);
    ASSERT_EQ(d.components.size(), 2u);
    std::vector<std::set<std::string>> part{{"On", "Clear"}, {"Top", "Inheap", "Under"}};
    for (const char* text : {"move(A,B,C)", "push(A,B)"}) {
        auto alpha = act(b, text);
        auto cw = progress_componentwise(b, d, part, alpha);
        ASSERT_EQ(cw.decomposition.components.size(), 2u);
        int touched = 0;
        for (std::size_t j = 0; j < 2; ++j) {
            if (cw.touched[j]) ++touched;
            else EXPECT_EQ(cw.decomposition.components[j], d.components[j]) << text;
        }
        EXPECT_EQ(touched, 1) << text;
        OracleConfig cfg;
        cfg.max_extra = 0;
        EXPECT_TRUE(equivalent(cw.decomposition.united(), progress(b, alpha).theory, cfg).equivalent) << text;
    }
}

TEST(Componentwise, FailedConditionsThrow) {
    auto b = load("blocksstacks.bat");
    auto d = syntactic_decompose(b.init, b.sig.restrict_to({"Block"}));
    std::vector<std::set<std::string>> wrong{{"On", "Top"}, {"Clear", "Inheap", "Under"}};
    EXPECT_THROW(progress_componentwise(b, d, wrong, act(b, "move(A,B,C)")), ModelError);
}
