#include <gtest/gtest.h>

#include "lmd/kernel.hpp"
#include "lmd/surface.hpp"

namespace lmd {
namespace {

const Type kInt = mk_tconst("Int");

TEST(Stage, ConcatIsAssociativeWithEpsilonIdentity) {
    Stage a{"a"}, bc{"b", "c"};
    EXPECT_EQ(a.concat(bc), (Stage{"a", "b", "c"}));
    EXPECT_EQ(a.concat(Stage::epsilon()), a);
    EXPECT_EQ(Stage::epsilon().concat(a), a);
    EXPECT_EQ(a.concat(bc).pop(), (Stage{"a", "b"}));
    EXPECT_THROW(Stage::epsilon().pop(), std::logic_error);
}

TEST(Subst, VariableHit) {
    EXPECT_TRUE(alpha_eq(subst(mk_var("x"), "x", mk_const("c")), mk_const("c")));
}

TEST(Subst, BoundOccurrenceIsShadowed) {
    Term t = mk_lam("x", kInt, mk_var("x"));
    EXPECT_TRUE(alpha_eq(subst(t, "x", mk_const("c")), t));
}

TEST(Subst, BetaContractumOfIdentity) {
    // (\x:Int. x) 1 contracts to x[x := 1]
    EXPECT_TRUE(alpha_eq(subst(mk_var("x"), "x", mk_int(1)), mk_int(1)));
}

TEST(Subst, AvoidsCapture) {
    // (\y:Int. x)[x := y] must not capture y
    Term t = mk_lam("y", kInt, mk_var("x"));
    Term r = subst(t, "x", mk_var("y"));
    ASSERT_EQ(r->tag, TermTag::Lam);
    EXPECT_NE(r->name, "y");
    EXPECT_EQ(r->body->tag, TermTag::Var);
    EXPECT_EQ(r->body->name, "y");
}

TEST(Subst, ReachesIndexTermsInsideAnnotations) {
    // (\v:Vector n. v)[n := 3]
    Term t = mk_lam("v", mk_tapp(mk_tconst("Vector"), mk_var("n")), mk_var("v"));
    Term r = subst(t, "n", mk_int(3));
    EXPECT_TRUE(alpha_eq(r->annot, mk_tapp(mk_tconst("Vector"), mk_int(3))));
}

TEST(Subst, PiBinderAvoidsCapture) {
    Type t = mk_pi("y", kInt, mk_tapp(mk_tconst("Vector"), mk_var("x")));
    Type r = subst(t, "x", mk_var("y"));
    ASSERT_EQ(r->tag, TypeTag::Pi);
    EXPECT_NE(r->name, "y");
    EXPECT_EQ(r->body->index->name, "y");
}

TEST(Subst, EnvironmentDropsTheSubstitutedEntry) {
    TypeEnv env{{"n", kInt, {}}, {"v", mk_tapp(mk_tconst("Vector"), mk_var("n")), {}}};
    TypeEnv r = subst(env, "n", mk_int(2));
    ASSERT_EQ(r.size(), 1u);
    EXPECT_TRUE(alpha_eq(r.entries()[0].type, mk_tapp(mk_tconst("Vector"), mk_int(2))));
}

TEST(SubstStage, BracketExpandsLeftToRight) {
    Term r = subst_stage(mk_bracket("a", mk_var("x")), "a", Stage{"b", "c"});
    EXPECT_TRUE(alpha_eq(r, mk_bracket("b", mk_bracket("c", mk_var("x")))));
}

TEST(SubstStage, CspDisappearsUnderEpsilon) {
    EXPECT_TRUE(alpha_eq(subst_stage(mk_csp("a", mk_var("x")), "a", Stage::epsilon()), mk_var("x")));
}

TEST(SubstStage, EscapeExpandsInReverse) {
    // ⊲_{b c} x = ⊲_c ⊲_b x
    Term r = subst_stage(mk_escape("a", mk_var("x")), "a", Stage{"b", "c"});
    EXPECT_TRUE(alpha_eq(r, mk_escape("c", mk_escape("b", mk_var("x")))));
    EXPECT_TRUE(alpha_eq(r, mk_escapes(Stage{"b", "c"}, mk_var("x"))));
}

TEST(SubstStage, CspExpandsInReverse) {
    Term r = subst_stage(mk_csp("a", mk_var("x")), "a", Stage{"b", "c"});
    EXPECT_TRUE(alpha_eq(r, mk_csp("c", mk_csp("b", mk_var("x")))));
}

TEST(SubstStage, StageApplicationArgumentsSplice) {
    Term r = subst_stage(mk_stage_app(mk_var("f"), Stage{"x", "a", "y"}), "a", Stage{"b", "c"});
    ASSERT_EQ(r->tag, TermTag::StageApp);
    EXPECT_EQ(r->stage, (Stage{"x", "b", "c", "y"}));
}

TEST(SubstStage, CodeTypeExpands) {
    Type r = subst_stage(mk_code("a", kInt), "a", Stage{"b", "c"});
    EXPECT_TRUE(alpha_eq(r, mk_code("b", mk_code("c", kInt))));
    EXPECT_TRUE(alpha_eq(subst_stage(mk_code("a", kInt), "a", Stage::epsilon()), kInt));
}

TEST(SubstStage, StageBinderAvoidsCapture) {
    // (Λb. ⊳a ⊳b x)[a ↦ b] must rename the inner b
    Term t = mk_stage_lam("b", mk_bracket("a", mk_bracket("b", mk_var("x"))));
    Term r = subst_stage(t, "a", Stage{"b"});
    ASSERT_EQ(r->tag, TermTag::StageLam);
    EXPECT_NE(r->name, "b");
    EXPECT_EQ(r->body->name, "b");
    EXPECT_EQ(r->body->body->name, r->name);
}

TEST(SubstStage, IdentityWhenVariableAbsent) {
    Term t = mk_stage_lam("a", mk_bracket("a", mk_csp("a", mk_var("x"))));
    EXPECT_TRUE(alpha_eq(subst_stage(t, "c", Stage{"d", "e"}), t));
}

TEST(SubstStage, ComposesAsExpected) {
    // t[a ↦ A][b ↦ B] = t[b ↦ B][a ↦ A[b ↦ B]] for a ∉ FTV(B)
    Term t = mk_bracket("a", mk_escape("b", mk_csp("a", mk_bracket("b", mk_var("x")))));
    Stage A{"b", "c"}, B{"d"};
    Term lhs = subst_stage(subst_stage(t, "a", A), "b", B);
    Term rhs = subst_stage(subst_stage(t, "b", B), "a", subst_stage(A, "b", B));
    EXPECT_TRUE(alpha_eq(lhs, rhs));
}

TEST(Alpha, BoundRenaming) {
    EXPECT_TRUE(alpha_eq(mk_lam("x", kInt, mk_var("x")), mk_lam("y", kInt, mk_var("y"))));
    EXPECT_TRUE(alpha_eq(mk_stage_lam("a", mk_bracket("a", mk_var("x"))),
                         mk_stage_lam("b", mk_bracket("b", mk_var("x")))));
    EXPECT_FALSE(alpha_eq(mk_lam("x", kInt, mk_var("x")), mk_lam("x", mk_tconst("Bool"), mk_var("x"))));
}

TEST(Alpha, FreeNamesAreNotRenamed) {
    EXPECT_FALSE(alpha_eq(mk_lam("x", kInt, mk_var("y")), mk_lam("x", kInt, mk_var("z"))));
    EXPECT_FALSE(alpha_eq(mk_lam("x", kInt, mk_var("x")), mk_lam("y", kInt, mk_var("x"))));
}

TEST(Alpha, TypesAndKinds) {
    Type v = mk_tconst("Vector");
    EXPECT_TRUE(alpha_eq(mk_pi("n", kInt, mk_tapp(v, mk_var("n"))), mk_pi("m", kInt, mk_tapp(v, mk_var("m")))));
    EXPECT_TRUE(alpha_eq(mk_forall("a", mk_code("a", kInt)), mk_forall("b", mk_code("b", kInt))));
    EXPECT_TRUE(alpha_eq(mk_kpi("x", kInt, mk_star()), mk_kpi("y", kInt, mk_star())));
}

TEST(FreeVars, LambdaAndStageBinders) {
    EXPECT_EQ(free_vars(mk_lam("x", kInt, mk_app(mk_var("x"), mk_var("y")))), NameSet{"y"});
    EXPECT_EQ(free_stage_vars(mk_stage_lam("a", mk_bracket("a", mk_csp("b", mk_var("x"))))), NameSet{"b"});
}

TEST(FreeVars, AnnotationIndicesCount) {
    Term t = mk_lam("v", mk_tapp(mk_tconst("Vector"), mk_var("n")), mk_var("v"));
    EXPECT_EQ(free_vars(t), NameSet{"n"});
}

TEST(FreeVars, UnrolledVaddBodyHasOnlyTheSizeFree) {
    // One unrolled level of vadd, with the size n left open.
    NameSet consts{"add", "sub", "cons", "head", "tail", "vadd_prev"};
    Term t = parse_term(
        "/\\a. \\v1:|>a Vector n. \\v2:|>a Vector n. "
        "|>a (cons (sub n 1) (add (head (sub n 1) <|a v1) (head (sub n 1) <|a v2)) "
        "<|a (vadd_prev @[a] |>a (tail (sub n 1) <|a v1) |>a (tail (sub n 1) <|a v2)))",
        consts);
    EXPECT_EQ(free_vars(t), NameSet{"n"});
}

TEST(FreshName, SkipsTakenNames) {
    EXPECT_EQ(fresh_name("x", {}), "x");
    EXPECT_EQ(fresh_name("x", {"x"}), "x_1");
    EXPECT_EQ(fresh_name("x_1", {"x_1", "x_2"}), "x_3");
}

TEST(Measures, SizeAndStageLambdaCount) {
    Term t = mk_stage_app(mk_stage_lam("a", mk_bracket("a", mk_int(1))), {});
    EXPECT_EQ(term_size(t), 4u);
    EXPECT_EQ(stage_lam_count(t), 1u);
}

TEST(RenameApart, BindersBecomeDistinct) {
    Term t = mk_app(mk_lam("x", kInt, mk_var("x")), mk_lam("x", kInt, mk_var("x")));
    Term r = rename_apart(t);
    EXPECT_TRUE(alpha_eq(r, t));
    EXPECT_NE(r->fun->name, r->arg->name);
}

}  // namespace
}  // namespace lmd
