#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lmd/cli.hpp"
#include "lmd/kernel.hpp"
#include "lmd/prelude.hpp"
#include "lmd/session.hpp"

namespace lmd {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome lmd(std::vector<std::string> args, const std::string& input = {}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = run_cli(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return (fs::path(LMD_SAMPLES_DIR) / name).string(); }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

std::string temp_file(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / ("lmd-cli-" + name);
    std::ofstream(p) << text;
    return p.string();
}

TEST(Check, MainZero) {
    Outcome r = lmd({"--prelude", "check", sample("zero.lmd")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "main : Int @ ε\n");
}

TEST(Check, VaddRunForm) {
    Outcome r = lmd({"--prelude", "check", sample("vadd-unrolled.lmd")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    EXPECT_NE(std::find(ls.begin(), ls.end(), "vadd3 : Vector 3 -> Vector 3 -> Vector 3 @ ε"), ls.end()) << r.out;
    EXPECT_EQ(ls.back(), "main : Vector 3 @ ε");
}

TEST(Check, WrongStageNamesTVarAndBothStages) {
    Outcome r = lmd({"--prelude", "check", sample("wrong-stage.lmd")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("T-Var"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("stage a"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("stage ε"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("wrong-stage.lmd:2:1"), std::string::npos) << r.err;
}

TEST(Check, ParseErrorIsAUserError) {
    Outcome r = lmd({"check", temp_file("bad.lmd", "main = (\\x:Int. ;")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Check, MissingFileAndMissingCommand) {
    EXPECT_EQ(lmd({"check", "/definitely/not/here.lmd"}).code, 1);
    EXPECT_EQ(lmd({}).code, 1);
    EXPECT_EQ(lmd({"--help"}).code, 0);
}

TEST(Check, JsonAndDerivation) {
    Outcome r = lmd({"--prelude", "--json", "check", "--dump-derivation", sample("zero.lmd")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 2u);
    auto j = nlohmann::json::parse(ls[0]);
    EXPECT_EQ(j["name"], "main");
    EXPECT_EQ(j["type"], "Int");
    auto d = nlohmann::json::parse(ls[1]);
    EXPECT_EQ(d["rule"], "T-Const");
    EXPECT_EQ(d["conclusion"], "∅ ⊢ 0 : Int @ ε");
}

TEST(Check, JsonErrors) {
    Outcome r = lmd({"--prelude", "--json", "check", sample("wrong-stage.lmd")});
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["error"]["line"], 2);
    EXPECT_FALSE(j["error"]["trace"].empty());
}

TEST(Eval, StagedExampleInThreeSteps) {
    Outcome r = lmd({"--prelude", "--trace", "eval", sample("staged-example.lmd")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 4u) << r.out;
    EXPECT_EQ(ls.back(), "10");
    std::vector<std::string> rules;
    for (int i = 0; i < 3; ++i) rules.push_back(nlohmann::json::parse(ls[i])["rule"]);
    EXPECT_EQ(rules, (std::vector<std::string>{"diamond", "Lambda", "beta"}));
}

TEST(Eval, TraceRoundTrips) {
    Outcome r = lmd({"--prelude", "--trace", "eval", sample("vadd-unrolled.lmd")});
    ASSERT_EQ(r.code, 0) << r.err;
    auto ls = lines(r.out);
    NameSet consts = constant_names(prelude_signature());
    Term prev;
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
        auto j = nlohmann::json::parse(ls[i]);
        Term before = parse_term(j["before"].get<std::string>(), consts);
        Term after = parse_term(j["after"].get<std::string>(), consts);
        if (prev) EXPECT_TRUE(alpha_eq(prev, before)) << i;
        prev = after;
        Path p = j["path"].get<Path>();
        (void)subterm_at(before, p);  // the path addresses a node of `before`
    }
    EXPECT_EQ(ls.back(), "cons 2 11 (cons 1 22 (cons 0 33 nil))");
}

TEST(Eval, MissingMain) {
    Outcome r = lmd({"--prelude", "eval", temp_file("nomain.lmd", "def x = 1;")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("main"), std::string::npos);
}

TEST(Eval, StepBudget) {
    Outcome r = lmd({"--prelude", "--max-steps", "2", "eval", sample("vadd-unrolled.lmd")});
    EXPECT_EQ(r.code, 1);
}

TEST(Normalize, FullExampleIsFour) {
    Outcome r = lmd({"--prelude", "normalize", sample("full-example.lmd")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "4\n");
    for (const char* s : {"staged", "random:7"}) EXPECT_EQ(lmd({"--prelude", "normalize", "--strategy", s, sample("full-example.lmd")}).out, "4\n");
    EXPECT_EQ(lmd({"--prelude", "normalize", "--strategy", "sideways", sample("full-example.lmd")}).code, 1);
}

TEST(Normalize, WithoutPreludeDeltaDoesNotFire) {
    std::string sig = temp_file("int.sig", "type Int :: *; const add : Int -> Int -> Int;");
    Outcome r = lmd({"--signature", sig, "normalize", temp_file("add.lmd", "main = add 1 2;")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1 + 2\n");
}

TEST(Natural, PrintsImageAndType) {
    Outcome r = lmd({"--prelude", "natural", sample("staged-example.lmd")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "(\\x:Int. x) 10 : Int\n");
}

TEST(Repl, CommandsAndDefs) {
    Outcome r = lmd({"--prelude", "repl"},
                ":check \\x:Int. x\n"
                "def two = 1 + 1\n"
                ":eval two * 3\n"
                ":norm (/\\a. |>a (two + 1)) @[]\n"
                "(\\x:Int. x) 5\n"
                ":quit\n"
                ":check 1\n");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "Int -> Int\ntwo : Int @ ε\n6\n3\n5 : Int\n");
}

TEST(Repl, ErrorsDoNotEndTheSession) {
    Outcome r = lmd({"--prelude", "repl"}, "y\n:nope\n:check true\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "Bool\n");
    EXPECT_NE(r.err.find("T-Var"), std::string::npos);
    EXPECT_NE(r.err.find(":nope"), std::string::npos);
}

TEST(Prelude, PathOverride) {
    std::string p = temp_file("prelude.sig", "type Int :: *; type Nat :: *; const z : Nat;");
    ::setenv("LMD_PRELUDE_PATH", p.c_str(), 1);
    Outcome r = lmd({"--prelude", "check", temp_file("nat.lmd", "main = z;")});
    ::unsetenv("LMD_PRELUDE_PATH");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "main : Nat @ ε\n");
}

TEST(Suites, SummaryLine) {
    Outcome r = lmd({"test", "--suite", "natural", "--n", "20", "--seed", "5"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "suite=natural pass=20 fail=0 seed=5\n");
    EXPECT_EQ(lmd({"test", "--suite", "nope", "--n", "2"}).code, 1);
    EXPECT_EQ(lmd({"test", "--n", "0"}).code, 1);
}

TEST(Session, DefinitionsAreInlinedAndChecked) {
    SessionOptions opts;
    opts.prelude = true;
    Session s(opts);
    s.define("one", s.parse("1"));
    const Definition& d = s.define("inc", s.parse("\\x:Int. x + one"));
    EXPECT_EQ(pretty(d.term), "\\x:Int. x + 1");
    EXPECT_THROW(s.define("add", s.parse("1")), SessionError);
    EXPECT_THROW(s.define("bad", s.parse("one true")), TypeError);
    EXPECT_EQ(s.definitions().size(), 2u);
}

}  // namespace
}  // namespace lmd
