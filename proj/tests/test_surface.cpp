#include <gtest/gtest.h>

#include <filesystem>

#include "sitcalc/surface.hpp"
#include "support.hpp"

using namespace sitcalc;
using namespace testsupport;

namespace {

std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(SITCALC_CORPUS_DIR))
        if (e.path().extension() == ".bat") out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

const char* kSmall = R"(object c;
static P/1;
fluent F/1;
action A/1;
ssa F(x) {
  pos: a == A(x) & P(x);
}
init {
  !F(c);
}
)";

SourceSpan error_at(const std::string& text) {
    try {
        parse_bat(text, "t.bat");
    } catch (const ParseError& e) {
        return e.span();
    }
    ADD_FAILURE() << "no parse error";
    return {};
}

}  // namespace

TEST(Surface, CorpusRoundTrips) {
    auto files = corpus_files();
    ASSERT_GE(files.size(), 10u);
    for (const auto& name : files) {
        auto b = load(name);
        std::string once = render(b);
        auto again = parse_bat(once, name);
        EXPECT_TRUE(structurally_equal(b, again)) << name;
        EXPECT_EQ(render(again), once) << name;
    }
}

TEST(Surface, TheoryFileRoundTrips) {
    auto b = load("blocksstacks.bat");
    auto t = parse_bat(render_theory_file(b.sig, b.init));
    EXPECT_EQ(t.init, b.init);
    EXPECT_EQ(t.sig, b.sig);
}

TEST(Surface, RenderPrecedence) {
    auto b = load("blocksstacks.bat");
    EXPECT_EQ(render(f("(Block(A) | Block(B)) & Block(C)", b.sig)), "(Block(A) | Block(B)) & Block(C)");
    EXPECT_EQ(render(f("Block(A) -> Block(B) -> Block(C)", b.sig)), "Block(A) -> Block(B) -> Block(C)");
    EXPECT_EQ(render(f("(Block(A) -> Block(B)) -> Block(C)", b.sig)), "(Block(A) -> Block(B)) -> Block(C)");
    EXPECT_EQ(render(f("!(A == B)", b.sig)), "A != B");
    EXPECT_EQ(render(f("Clear(A)@next", b.sig)), "Clear(A)@next");
}

TEST(Surface, RandomFormulasRoundTrip) {
    RandomTheory gen(11);
    for (int i = 0; i < 100; ++i) {
        auto s = gen.signature(i % 2 == 0);
        Formula g = gen.formula(s, 4);
        EXPECT_EQ(parse_formula(render(g), s), g) << render(g);
    }
}

TEST(Surface, ParsesActions) {
    auto b = load("blocksstacks.bat");
    auto as = parse_actions("move(A,B,C); push(A, B)", b.sig);
    ASSERT_EQ(as.size(), 2u);
    EXPECT_EQ(render(as[1]), "push(A, B)");
    EXPECT_THROW(parse_action("move(A,B)", b.sig), ParseError);
    EXPECT_THROW(parse_action("move(A,B,D)", b.sig), ParseError);
    EXPECT_EQ(render(parse_atom("On(A, B)", b.sig)), "On(A, B)");
}

TEST(Surface, ErrorsCarryPositions) {
    std::string text = kSmall;
    EXPECT_NO_THROW(parse_bat(text));

    auto free_var = text;
    free_var.replace(free_var.find("!F(c)"), 5, "!F(y)");
    auto span = error_at(free_var);
    EXPECT_EQ(span.file, "t.bat");
    EXPECT_EQ(span.line, 9);
    EXPECT_EQ(span.col, 6);

    auto stage = text;
    stage.replace(stage.find("!F(c)"), 5, "F(c)@next");
    EXPECT_EQ(error_at(stage).line, 9);

    auto arity = text;
    arity.replace(arity.find("P(x)"), 4, "P(x, x)");
    EXPECT_EQ(error_at(arity).line, 6);

    auto twice = text + "ssa F(x) { }\n";
    EXPECT_EQ(error_at(twice).line, 11);
}

TEST(Surface, ErrorMessages) {
    try {
        parse_bat("object c;\ninit { Q(c); }\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("free variables are not allowed"), std::string::npos) << e.what();
    }
    try {
        load_bat("no/such/file.bat");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("file not found"), std::string::npos);
    }
}
