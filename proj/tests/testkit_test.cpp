#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "lmd/kernel.hpp"
#include "lmd/prelude.hpp"
#include "lmd/surface.hpp"
#include "lmd/testkit.hpp"
#include "lmd/typesystem.hpp"

namespace lmd {
namespace {

Term parse(const char* s) { return parse_term(s, constant_names(prelude_signature())); }

void count_formers(const Term& t, std::map<TermTag, int>& out) {
    ++out[t->tag];
    if (t->fun) count_formers(t->fun, out);
    if (t->arg) count_formers(t->arg, out);
    if (t->body) count_formers(t->body, out);
}

GenConfig seeded(std::uint64_t seed) {
    GenConfig cfg;
    cfg.seed = seed;
    return cfg;
}

TEST(Generator, EveryCaseTypechecks) {
    Checker checker(prelude_signature());
    for (std::uint64_t s = 0; s < 5000; ++s) {
        GeneratedCase c = gen_typed(seeded(s));
        SCOPED_TRACE(testing::Message() << "seed " << s << ": " << pretty(c.term) << " : " << pretty(c.type) << " @ "
                                        << pretty(c.stage));
        try {
            auto [t, d] = checker.infer_type(c.env, c.term, c.stage);
            checker.equiv_type(c.env, t, c.type, mk_star(), c.stage);
        } catch (const TypeError& e) {
            FAIL() << e.what();
        }
    }
}

TEST(Generator, AbstractedStageMustStillKind) {
    // Abstracting b out of `Vector (%b 0)` is only sound at a stage ending in
    // the new binder; the generator kind-checks before offering @[b].
    Checker checker(prelude_signature());
    TypeEnv env;
    EXPECT_THROW(checker.infer_type(env, parse("/\\a. \\v:Vector (%a 0). v"), Stage{"b"}), TypeError);
    EXPECT_NO_THROW(checker.infer_type(env, parse("\\v:Vector (%b 0). v"), Stage{"b"}));
}

TEST(Generator, EveryFormerOccursOften) {
    std::map<TermTag, int> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) count_formers(gen_typed(seeded(s)).term, seen);
    for (TermTag tag : {TermTag::Var, TermTag::Const, TermTag::Lam, TermTag::App, TermTag::Bracket, TermTag::Escape,
                        TermTag::StageLam, TermTag::StageApp, TermTag::Csp})
        EXPECT_GE(seen[tag], 20) << "former " << static_cast<int>(tag);
}

TEST(Generator, RunsAtTheEmptyStageOccur) {
    int runs = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        GeneratedCase c = gen_typed(seeded(s));
        std::function<void(const Term&)> walk = [&](const Term& t) {
            if (t->tag == TermTag::StageApp && t->stage.empty()) ++runs;
            if (t->fun) walk(t->fun);
            if (t->arg) walk(t->arg);
            if (t->body) walk(t->body);
        };
        walk(c.term);
    }
    EXPECT_GE(runs, 20);
}

TEST(Generator, SameSeedSameCase) {
    GeneratedCase a = gen_typed(seeded(42));
    GeneratedCase b = gen_typed(seeded(42));
    EXPECT_EQ(pretty(a.term), pretty(b.term));
    EXPECT_EQ(pretty(a.type), pretty(b.type));
    EXPECT_EQ(pretty(a.env), pretty(b.env));
    EXPECT_EQ(a.trace, b.trace);
}

TEST(Generator, DepthOneIsALeaf) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        GenConfig cfg = seeded(s);
        cfg.max_depth = 1;
        GeneratedCase c = gen_typed(cfg);
        std::map<TermTag, int> seen;
        count_formers(c.term, seen);
        EXPECT_EQ(seen[TermTag::Escape] + seen[TermTag::Csp] + seen[TermTag::StageApp], 0) << pretty(c.term);
        if (c.type->tag == TypeTag::Const)
            EXPECT_TRUE(c.term->tag == TermTag::Const || c.term->tag == TermTag::Var) << pretty(c.term);
        if (c.type->tag == TypeTag::Pi) EXPECT_EQ(c.term->tag, TermTag::Lam) << pretty(c.term);
    }
}

TEST(Generator, EpsilonFreeEnvironment) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        GeneratedCase c = gen_typed(seeded(s));
        for (const auto& e : c.env.entries()) EXPECT_FALSE(e.stage.empty()) << pretty(c.env);
    }
}

TEST(Generator, RejectsBadConfig) {
    GenConfig cfg;
    cfg.max_depth = 0;
    EXPECT_THROW(gen_typed(cfg), std::invalid_argument);
    cfg = GenConfig{};
    cfg.weights["lam"] = -1;
    EXPECT_THROW(gen_typed(cfg), std::invalid_argument);
}

TEST(Oracle, ValueHasNoDecomposition) {
    Term v = parse("|>a ((\\x:Int. x) 1)");
    EXPECT_TRUE(oracle_is_value(v, {}));
    EXPECT_TRUE(oracle_decompose_all(v, {}).empty());
}

TEST(Oracle, StagedExampleMatchesDecompose) {
    Term m = parse("(/\\a. |>a <|a |>a ((\\x:Int. x) 10)) @[]");
    auto all = oracle_decompose_all(m, {});
    ASSERT_EQ(all.size(), 1u);
    auto r = decompose(m, {});
    const auto* d = std::get_if<Decomposition>(&r);
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->hole, all[0].hole);
    EXPECT_EQ(d->hole_stage, all[0].hole_stage);
    EXPECT_EQ(d->rule, all[0].rule);
    EXPECT_TRUE(alpha_eq(d->redex, all[0].redex));
}

TEST(Oracle, StuckOpenTermIsNeither) {
    Term m = parse("x 1");
    EXPECT_TRUE(oracle_decompose_all(m, {}).empty());
    EXPECT_FALSE(oracle_is_value(m, {}));
}

TEST(Oracle, FindsEveryStageOfTheStagedExample) {
    Term m = parse("(/\\a. |>a <|a |>a ((\\x:Int. x) 10)) @[]");
    std::size_t steps = 0;
    for (auto step = step_staged(m); step; step = step_staged(step->after), ++steps) {
        auto all = oracle_decompose_all(step->before, {});
        ASSERT_EQ(all.size(), 1u);
        EXPECT_EQ(all[0].rule, step->rule);
        EXPECT_EQ(all[0].hole, step->position);
    }
    EXPECT_EQ(steps, 3u);
}

TEST(Checks, StagedExampleIsAFullReductionSubset) {
    auto r = eval_staged(parse("(/\\a. |>a <|a |>a ((\\x:Int. x) 10)) @[]"), 100);
    EXPECT_EQ(check_staged_subset(r.steps), "");
}

TEST(Checks, BudgetPathOnOmega) {
    // Ill-typed on purpose: the annotation is a lie the checker would reject.
    GeneratedCase c;
    c.term = parse("(\\x:Int. x x) (\\x:Int. x x)");
    c.type = mk_tconst("Int");
    EXPECT_NE(check_sn(c, 1000).find("no normal form within 1000 steps"), std::string::npos);
}

TEST(Checks, NaturalFlagsAWrongType) {
    GeneratedCase c;
    c.term = parse("\\x:Int. x");
    c.type = mk_tconst("Int");
    EXPECT_NE(check_natural(c), "");
    c.type = parse_type("Int -> Int");
    EXPECT_EQ(check_natural(c), "");
}

TEST(Shrink, KeepsTheFailureAndTheType) {
    GeneratedCase c;
    c.term = parse("(\\x:Int. add x 1) ((\\y:Int. y) 3)");
    c.type = mk_tconst("Int");
    auto fails = [](const GeneratedCase& k) { return term_size(k.term) >= 3; };
    Term small = shrink(c, fails);
    GeneratedCase k = c;
    k.term = small;
    EXPECT_TRUE(fails(k));
    EXPECT_LT(term_size(small), term_size(c.term));
    Checker checker(prelude_signature());
    auto [t, d] = checker.infer_type({}, small, {});
    EXPECT_NO_THROW(checker.equiv_type({}, t, c.type, mk_star(), {}));
}

TEST(Suites, SmallRunsPass) {
    for (const auto& name : suite_names()) {
        SuiteReport r = run_suite(name, 40, 7);
        EXPECT_EQ(r.failed, 0u) << r.summary() << "\n"
                                << (r.counterexamples.empty() ? "" : r.counterexamples[0].message);
        EXPECT_EQ(r.passed, 40u);
    }
}

TEST(Suites, SummaryLine) {
    SuiteReport r = suite_natural(5, 3);
    EXPECT_EQ(r.summary(), "suite=natural pass=5 fail=0 seed=3");
}

TEST(Suites, UnknownNameAndZeroCount) {
    EXPECT_THROW(run_suite("nope", 1, 1), std::invalid_argument);
    EXPECT_THROW(run_suite("sn", 0, 1), std::invalid_argument);
}

TEST(Suites, CounterexampleFiles) {
    SuiteReport r;
    r.name = "demo";
    r.seed = 9;
    GeneratedCase c;
    c.term = parse("add 1 2");
    c.type = mk_tconst("Int");
    r.counterexamples.push_back({c, parse("1"), "made up"});
    auto dir = std::filesystem::temp_directory_path() / "lmd-ce-test";
    std::filesystem::remove_all(dir);
    auto paths = write_counterexamples(r, dir.string());
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_TRUE(std::filesystem::exists(paths[0]));
    std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lmd
