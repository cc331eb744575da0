#include <gtest/gtest.h>

#include "lmd/kernel.hpp"
#include "lmd/reduction.hpp"
#include "lmd/surface.hpp"

namespace lmd {
namespace {

const NameSet kConsts{"add", "sub", "mul", "eq", "true", "false", "cons", "nil", "head", "tail"};

Term parse(const char* s) { return parse_term(s, kConsts); }

std::vector<RuleTag> rules(const std::vector<ReductionStep>& steps) {
    std::vector<RuleTag> out;
    for (const auto& s : steps) out.push_back(s.rule);
    return out;
}

const char* kFullExample = "(\\f:Int->Int. (/\\a. |>a (%a f 1 + <|a |>a 3)) @[]) (\\x:Int. x)";
const char* kStagedExample = "(/\\a. |>a <|a |>a ((\\x:Int. x) 10)) @[]";

TEST(Enumerate, FullExampleRedexesInPreOrder) {
    // Outer β, the run (Λa. ...) @[] and the inner ◆.
    auto rs = enumerate_redexes(parse(kFullExample));
    EXPECT_EQ(rules(rs), (std::vector<RuleTag>{RuleTag::Beta, RuleTag::StageBeta, RuleTag::Diamond}));
    EXPECT_TRUE(rs[0].position.empty());
    EXPECT_EQ(rs[1].position, (Path{0, 0}));
}

TEST(Enumerate, ClosedLambdaHasNone) {
    EXPECT_TRUE(enumerate_redexes(parse("\\x:Int. x")).empty());
}

TEST(Enumerate, StagedExampleHasThreeInPreOrder) {
    auto rs = enumerate_redexes(parse(kStagedExample));
    EXPECT_EQ(rules(rs), (std::vector<RuleTag>{RuleTag::StageBeta, RuleTag::Diamond, RuleTag::Beta}));
    for (const auto& r : rs) EXPECT_TRUE(alpha_eq(r.before, parse(kStagedExample)));
}

TEST(Enumerate, DeltaOnlyWhenEnabled) {
    Term t = parse("1 + 3");
    EXPECT_TRUE(enumerate_redexes(t).empty());
    auto rs = enumerate_redexes(t, {.delta = true});
    ASSERT_EQ(rs.size(), 1u);
    EXPECT_EQ(rs[0].rule, RuleTag::Delta);
}

TEST(StepFull, ContractsTheChosenRedex) {
    EXPECT_TRUE(alpha_eq(step_full(parse("<|a |>a 3"), 0), mk_int(3)));
    EXPECT_TRUE(alpha_eq(step_full(parse("(\\x:Int. x) 1"), 0), mk_int(1)));
    Term lam = parse("(/\\a. |>a (%a (\\x:Int. x) 1 + 3)) @[]");
    EXPECT_TRUE(alpha_eq(step_full(lam, 0), parse("(\\x:Int. x) 1 + 3")));
    EXPECT_THROW(step_full(parse("\\x:Int. x"), 0), std::out_of_range);
}

TEST(StepFull, StageBetaExpandsMultiVariableStages) {
    Term t = parse("(/\\a. |>a <|a %a x) @[b c]");
    EXPECT_TRUE(alpha_eq(step_full(t, 0), parse("|>b |>c <|c <|b %c %b x")));
}

TEST(Delta, Arithmetic) {
    EXPECT_TRUE(alpha_eq(*delta_step(parse("add 1 3")), mk_int(4)));
    EXPECT_FALSE(delta_step(parse("add x 3")));
    EXPECT_TRUE(alpha_eq(*delta_step(parse("eq 0 0")), mk_const("true")));
    EXPECT_TRUE(alpha_eq(*delta_step(parse("eq 0 1")), mk_const("false")));
    EXPECT_TRUE(alpha_eq(*delta_step(parse("sub 2 5")), mk_int(-3)));
    EXPECT_TRUE(alpha_eq(*delta_step(parse("mul 6 7")), mk_int(42)));
    EXPECT_FALSE(delta_step(parse("add 1")));
    EXPECT_FALSE(delta_step(parse("mul 999999999999999999 100")));
}

TEST(Delta, HeadAndTailOfCons) {
    EXPECT_TRUE(alpha_eq(*delta_step(parse("head 0 (cons 0 7 nil)")), mk_int(7)));
    EXPECT_TRUE(alpha_eq(*delta_step(parse("tail 0 (cons 0 7 nil)")), mk_const("nil")));
    EXPECT_FALSE(delta_step(parse("head 0 nil")));
}

TEST(Normalize, FullExampleReachesFour) {
    auto r = normalize(parse(kFullExample), Strategy::leftmost_outermost(), 1000, {.delta = true});
    EXPECT_TRUE(alpha_eq(r.term, mk_int(4)));
}

TEST(Normalize, StagedStrategyFollowsTheUnderlinedRedexes) {
    auto r = normalize(parse(kFullExample), Strategy::staged(), 1000, {.delta = true});
    EXPECT_TRUE(alpha_eq(r.term, mk_int(4)));
    EXPECT_EQ(rules(r.steps), (std::vector<RuleTag>{RuleTag::Beta, RuleTag::Diamond, RuleTag::StageBeta,
                                                   RuleTag::Beta, RuleTag::Delta}));
}

TEST(Normalize, ValueTakesNoSteps) {
    auto r = normalize(parse("\\x:Int. x"), Strategy::leftmost_outermost(), 10);
    EXPECT_TRUE(r.steps.empty());
}

TEST(Normalize, StepsChainWholeTerms) {
    auto r = normalize(parse(kFullExample), Strategy::random(3), 1000, {.delta = true});
    Term cur = parse(kFullExample);
    for (const auto& s : r.steps) {
        EXPECT_TRUE(alpha_eq(s.before, cur));
        EXPECT_TRUE(alpha_eq(replace_at(s.before, s.position, contract(subterm_at(s.before, s.position), s.rule)),
                             s.after));
        cur = s.after;
    }
    EXPECT_TRUE(alpha_eq(cur, mk_int(4)));
}

TEST(Normalize, BudgetExceededOnOmega) {
    // Untyped self-application; the annotation is bogus on purpose.
    Term w = parse("\\x:Int. x x");
    EXPECT_THROW(normalize(mk_app(w, w), Strategy::leftmost_outermost(), 50), StepBudgetExceeded);
    EXPECT_THROW(normal_form(mk_app(w, w), 50), StepBudgetExceeded);
}

TEST(Value, EpsilonStage) {
    const Stage eps;
    EXPECT_TRUE(is_value(parse("\\x:Int. (\\y:Int. y) x"), eps));
    EXPECT_FALSE(is_value(parse("/\\a. (\\x:Int. x) 1"), eps));
    EXPECT_TRUE(is_value(parse("/\\a. |>a ((\\x:Int. x) 1)"), eps));
    EXPECT_FALSE(is_value(parse("x"), eps));
    EXPECT_TRUE(is_value(parse("10"), eps));
    EXPECT_TRUE(is_value(parse("cons 0 1 nil"), eps));
    EXPECT_TRUE(is_value(parse("add 1 2"), eps));
    EXPECT_FALSE(is_value(parse("add 1 2"), eps, {.delta = true}));
    EXPECT_FALSE(is_value(parse("<|a x"), eps));
}

TEST(Value, NonEmptyStages) {
    EXPECT_TRUE(is_value(parse("x"), Stage{"a"}));
    EXPECT_FALSE(is_value(parse("<|a x"), Stage{"a"}));
    EXPECT_TRUE(is_value(parse("<|a x"), Stage{"b", "a"}));
    EXPECT_FALSE(is_value(parse("<|a x"), Stage{"a", "b"}));
    EXPECT_FALSE(is_value(parse("%a x"), Stage{"a"}));
    EXPECT_TRUE(is_value(parse("%a 1"), Stage{"a"}));
    EXPECT_TRUE(is_value(parse("%a x"), Stage{"b", "a"}));
    EXPECT_FALSE(is_value(parse("%a x"), Stage{"a"}.push("b")));
    EXPECT_TRUE(is_value(parse("(\\x:Int. x) 1"), Stage{"a"}));
    EXPECT_FALSE(is_value(parse("<|a |>a 1"), Stage{"a"}));
}

TEST(Decompose, StagedExampleFirstSplit) {
    Term t = parse(kStagedExample);
    auto r = decompose(t, Stage::epsilon());
    auto* d = std::get_if<Decomposition>(&r);
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->hole_stage, Stage{"a"});
    EXPECT_EQ(d->rule, RuleTag::Diamond);
    EXPECT_TRUE(alpha_eq(d->redex, parse("<|a |>a ((\\x:Int. x) 10)")));
    EXPECT_EQ(d->hole, (Path{0, 0, 0}));
    EXPECT_TRUE(alpha_eq(d->plug(d->redex), t));
}

TEST(Decompose, TopLevelRedex) {
    Term t = parse("(\\x:Int. x) 10");
    auto r = decompose(t, Stage::epsilon());
    auto* d = std::get_if<Decomposition>(&r);
    ASSERT_NE(d, nullptr);
    EXPECT_TRUE(d->hole.empty());
    EXPECT_TRUE(d->hole_stage.empty());
    EXPECT_EQ(d->rule, RuleTag::Beta);
}

TEST(Decompose, CallByValueLeftToRight) {
    auto r = decompose(parse("(\\x:Int. x) ((\\y:Int. y) 1)"), Stage::epsilon());
    auto* d = std::get_if<Decomposition>(&r);
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->hole, (Path{1}));
}

TEST(Decompose, ValuesAndStuckTerms) {
    auto r = decompose(parse("\\x:Int. x"), Stage::epsilon());
    EXPECT_TRUE(std::holds_alternative<ValueJudgment>(r));
    EXPECT_THROW(decompose(parse("x 1"), Stage::epsilon()), Stuck);
    EXPECT_THROW(decompose(parse("<|a |>a 1"), Stage::epsilon()), Stuck);
    try {
        decompose(parse("(\\y:Int. y) (x 1)"), Stage::epsilon());
        FAIL();
    } catch (const Stuck& s) {
        EXPECT_TRUE(alpha_eq(s.subterm(), mk_var("x")));
        EXPECT_TRUE(s.stage().empty());
    }
}

TEST(Decompose, NoReductionUnderQuotationExceptDiamond) {
    auto r = decompose(parse("|>a ((\\x:Int. x) 1)"), Stage::epsilon());
    EXPECT_TRUE(std::holds_alternative<ValueJudgment>(r));
    auto r2 = decompose(parse("|>a (\\y:Int. <|a ((\\x:Code. x) |>a y))"), Stage::epsilon());
    auto* d = std::get_if<Decomposition>(&r2);
    ASSERT_NE(d, nullptr);
    EXPECT_EQ(d->rule, RuleTag::Beta);
    EXPECT_TRUE(d->hole_stage.empty());
}

TEST(Staged, SpliceExampleInThreeSteps) {
    auto r = eval_staged(parse(kStagedExample), 100);
    ASSERT_EQ(r.steps.size(), 3u);
    EXPECT_TRUE(alpha_eq(r.steps[0].after, parse("(/\\a. |>a ((\\x:Int. x) 10)) @[]")));
    EXPECT_TRUE(alpha_eq(r.steps[1].after, parse("(\\x:Int. x) 10")));
    EXPECT_TRUE(alpha_eq(r.value, mk_int(10)));
}

TEST(Staged, ValueTakesNoStep) {
    EXPECT_FALSE(step_staged(parse("\\x:Int. x")));
    auto r = eval_staged(parse("10"), 5);
    EXPECT_TRUE(r.steps.empty());
}

TEST(Staged, EveryStepIsAFullReductionStep) {
    auto r = eval_staged(parse(kStagedExample), 100);
    for (const auto& s : r.steps) {
        bool found = false;
        for (const auto& f : enumerate_redexes(s.before))
            found = found || alpha_eq(f.after, s.after);
        EXPECT_TRUE(found) << pretty(s.before);
    }
}

TEST(Staged, DeltaAtStageEpsilon) {
    auto r = eval_staged(parse("head 0 (cons 0 (1 + 2) nil)"), 100, {.delta = true});
    EXPECT_TRUE(alpha_eq(r.value, mk_int(3)));
}

TEST(Trace, JsonLine) {
    auto r = eval_staged(parse("(\\x:Int. x) 10"), 10);
    ASSERT_EQ(r.steps.size(), 1u);
    EXPECT_EQ(trace_json_line(r.steps[0]),
              R"({"after":"10","before":"(\\x:Int. x) 10","path":[],"rule":"beta"})");
}

}  // namespace
}  // namespace lmd
