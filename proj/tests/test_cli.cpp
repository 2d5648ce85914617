#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "sitcalc/cli.hpp"
#include "sitcalc/progression.hpp"
#include "support.hpp"

using namespace sitcalc;
using namespace testsupport;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    for (auto& a : args)
        if (a.size() > 4 && a.ends_with(".bat") && !a.starts_with("/")) a = corpus(a);
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ValidateExitCodes) {
    EXPECT_EQ(run({"validate", "blocksworld.bat"}).code, 0);
    auto r = run({"validate", "decomposability_lost.bat"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, MissingFileIsAnError) {
    auto r = run({"parse", "/nonexistent/missing.bat"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("file not found"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"progress", "blocksworld.bat"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"forget", "boole_symbol.bat"}).code, 2);
    EXPECT_EQ(run({"progress", "blocksworld.bat", "--action", "move(A,B)"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, JsonIsReproducible) {
    std::vector<std::string> args{"--json", "progress", "blocksworld.bat", "--action", "move(A,B,C)"};
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    auto j = json::parse(a.out);
    EXPECT_EQ(j["exit"], 0);
    EXPECT_FALSE(j.contains("elapsed_ms"));
    EXPECT_EQ(j["omega"].size(), 5u);
    EXPECT_TRUE(json::parse(run({"--json", "--timings", "validate", "blocksworld.bat"}).out).contains("elapsed_ms"));
}

TEST(Cli, DecomposeReportsComponents) {
    auto r = run({"--json", "decompose", "blocksstacks.bat", "--delta", "Block", "--verify"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["components"].size(), 2u);
    EXPECT_EQ(run({"decompose", "blocksstacks.bat"}).code, 1);
    EXPECT_EQ(run({"decompose", "blocksstacks.bat", "--delta", "Nope"}).code, 2);
}

TEST(Cli, ProgressOutputLoadsBack) {
    auto path = std::filesystem::temp_directory_path() / "sitcalc_cli_progress.bat";
    auto r = run({"progress", "blocksstacks.bat", "--action", "move(A,B,C)", "-o", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto back = load_bat(path.string());
    auto b = load("blocksstacks.bat");
    OracleConfig cfg;
    cfg.max_extra = 0;
    EXPECT_TRUE(equivalent(back.init, progress(b, GroundAction{"move", {"A", "B", "C"}}).theory, cfg).equivalent);

    auto cw = run({"progress", "blocksstacks.bat", "--action", "move(A,B,C)", "--componentwise", "--delta2", "Block",
                   "-o", path.string()});
    ASSERT_EQ(cw.code, 0) << cw.err;
    EXPECT_TRUE(equivalent(load_bat(path.string()).init, back.init, cfg).equivalent);
    std::filesystem::remove(path);
}

TEST(Cli, NegativeVerdictsExitOne) {
    EXPECT_EQ(run({"project", "blocksstacks.bat", "--actions", "move(A,B,C)", "--query", "Clear(B)"}).code, 0);
    auto r = run({"project", "blocksstacks.bat", "--actions", "move(A,B,C)", "--query", "Clear(C)"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("countermodel"), std::string::npos);
    EXPECT_EQ(run({"executable", "blocksworld.bat", "--actions", "move(B,A,C)"}).code, 1);
    EXPECT_EQ(run({"oracle", "equiv", "nominals_t1.bat", "nominals_t2.bat"}).code, 1);
    EXPECT_EQ(run({"oracle", "equiv", "boole_symbol.bat", "boole_atom.bat"}).code, 2);
    EXPECT_EQ(run({"oracle", "sat", "blocksworld.bat"}).code, 0);
}

TEST(Cli, ForgetAndSeparate) {
    auto r = run({"--json", "forget", "boole_symbol.bat", "--symbol", "P", "--verify"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto path = std::filesystem::temp_directory_path() / "sitcalc_cli_nominal.bat";
    ASSERT_EQ(run({"forget", "nominals_t1.bat", "--atom", "R(c,c)", "-o", path.string()}).code, 0);
    auto s = run({"--json", "oracle", "insep", path.string(), "nominals_t2.bat", "--delta", "R"});
    EXPECT_EQ(s.code, 1) << s.err;
    auto j = json::parse(s.out);
    EXPECT_EQ(j["verdict"], "SEPARATED");
    std::filesystem::remove(path);
}

TEST(Cli, CheckPreservation) {
    auto r = run({"check-preservation", "blocksstacks.bat", "--delta2", "Block"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    r = run({"check-preservation", "blocksstacks.bat", "--delta2", "Block", "--action", "push(A,B)"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL action-constants-aligned"), std::string::npos) << r.out;
}
