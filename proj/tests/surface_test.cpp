#include <random>

#include <gtest/gtest.h>

#include "lmd/kernel.hpp"
#include "lmd/surface.hpp"

namespace lmd {
namespace {

const NameSet kConsts{"add", "sub", "mul", "eq", "c", "cons", "nil"};

TEST(Parse, StagedLambdaExample) {
    Term t = parse_term("/\\a. |>a ((\\x:Int. x + 10) 5)", kConsts);
    Term expected = mk_stage_lam(
        "a", mk_bracket("a", mk_app(mk_lam("x", mk_tconst("Int"), mk_apps(mk_const("add"), {mk_var("x"), mk_int(10)})),
                                    mk_int(5))));
    EXPECT_TRUE(alpha_eq(t, expected));
}

TEST(Parse, ForallCodeType) {
    Type t = parse_type("forall a. |>a (Pi x:Int. Vector 5)");
    Type expected =
        mk_forall("a", mk_code("a", mk_pi("x", mk_tconst("Int"), mk_tapp(mk_tconst("Vector"), mk_int(5)))));
    EXPECT_TRUE(alpha_eq(t, expected));
}

TEST(Parse, BindersExtendRightAndPrefixOperatorsBindTighter) {
    // Λa.(λx:Int.((⊳a x) y))
    Term t = parse_term("/\\a. \\x:Int. |>a x y");
    Term expected =
        mk_stage_lam("a", mk_lam("x", mk_tconst("Int"), mk_app(mk_bracket("a", mk_var("x")), mk_var("y"))));
    EXPECT_TRUE(alpha_eq(t, expected));
}

TEST(Parse, InfixIsLeftAssociativeWithPrecedence) {
    Term t = parse_term("1 + 2 * 3 - 4 = 3");
    Term mul = mk_apps(mk_const("mul"), {mk_int(2), mk_int(3)});
    Term add = mk_apps(mk_const("add"), {mk_int(1), mul});
    Term sub = mk_apps(mk_const("sub"), {add, mk_int(4)});
    EXPECT_TRUE(alpha_eq(t, mk_apps(mk_const("eq"), {sub, mk_int(3)})));
}

TEST(Parse, StageApplicationAndRun) {
    Term t = parse_term("f @[a b] @[]");
    ASSERT_EQ(t->tag, TermTag::StageApp);
    EXPECT_TRUE(t->stage.empty());
    EXPECT_EQ(t->fun->stage, (Stage{"a", "b"}));
}

TEST(Parse, ConstantsResolveUnlessBound) {
    Term t = parse_term("\\c:Int. c c", {"c"});
    EXPECT_EQ(t->body->fun->tag, TermTag::Var);
    Term u = parse_term("c x", {"c"});
    EXPECT_EQ(u->fun->tag, TermTag::Const);
    EXPECT_EQ(u->arg->tag, TermTag::Var);
}

TEST(Parse, NegativeLiteral) {
    Term t = parse_term("f (-3)");
    EXPECT_EQ(t->arg->tag, TermTag::Const);
    EXPECT_EQ(int_value(t->arg), -3);
    Term u = parse_term("x - 3");
    EXPECT_EQ(u->fun->fun->name, "sub");
}

TEST(Parse, Kinds) {
    EXPECT_TRUE(alpha_eq(parse_kind("Pi x:Int. *"), mk_kpi("x", mk_tconst("Int"), mk_star())));
    EXPECT_TRUE(alpha_eq(parse_kind("Int -> *"), mk_kpi("y", mk_tconst("Int"), mk_star())));
}

TEST(Parse, FileDirectives) {
    auto file = parse_file(
        "-- prelude fragment\n"
        "type Int :: *;\n"
        "const one : Int;\n"
        "def id = \\x:Int. x;\n"
        "main : Int = id one;\n");
    ASSERT_EQ(file.directives.size(), 4u);
    ASSERT_NE(file.main(), nullptr);
    EXPECT_EQ(file.main()->term->arg->tag, TermTag::Const);
    EXPECT_EQ(file.directives[2].name, "id");
    EXPECT_EQ(file.directives[1].span.line, 3);
}

TEST(ParseErrors, CarrySpans) {
    try {
        parse_term("(\\x:Int. x");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.diagnostic().span.line, 1);
        EXPECT_EQ(e.diagnostic().span.column, 1);
        EXPECT_NE(e.diagnostic().message.find("unbalanced"), std::string::npos);
    }
    try {
        parse_term("x\n  $ y");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.diagnostic().span.line, 2);
        EXPECT_EQ(e.diagnostic().span.column, 3);
        EXPECT_NE(e.diagnostic().message.find("unknown token"), std::string::npos);
    }
    EXPECT_THROW(parse_term("x )"), ParseError);
    EXPECT_THROW(parse_term("\\x. x"), ParseError);
    EXPECT_THROW(parse_type("Int ->"), ParseError);
}

TEST(ParseErrors, DeepNestingIsRejectedNotCrashed) {
    std::string s(5000, '(');
    s += "x";
    s += std::string(5000, ')');
    EXPECT_THROW(parse_term(s), ParseError);
}

TEST(Pretty, RoundTripExamples) {
    EXPECT_EQ(pretty(parse_term("(\\x:Int. x) 1")), "(\\x:Int. x) 1");
    EXPECT_EQ(pretty(parse_type("Pi x:Int. Int")), "Int -> Int");
    EXPECT_EQ(pretty(mk_bracket("a", mk_escape("a", mk_var("m")))), "|>a <|a m");
    EXPECT_EQ(pretty(parse_term("(\\f:Int->Int. (/\\a. |>a (%a f 1 + <|a |>a 3)) @[]) (\\x:Int. x)", kConsts)),
              "(\\f:Int -> Int. (/\\a. |>a (%a f 1 + <|a |>a 3)) @[]) (\\x:Int. x)");
    EXPECT_EQ(pretty(parse_type("Pi n:Int. Vector n -> Vector (add n 1)", kConsts)),
              "Pi n:Int. Vector n -> Vector (n + 1)");
    EXPECT_EQ(pretty(parse_type("|>a (Vector 5)")), "|>a (Vector 5)");
    EXPECT_EQ(pretty(Stage{"a", "b"}), "a b");
    EXPECT_EQ(pretty(Stage::epsilon()), "ε");
}

// Random, possibly ill-typed syntax trees over a small vocabulary.
class AstGen {
public:
    explicit AstGen(std::uint64_t seed) : rng_(seed) {}

    Term term(int depth) {
        int pick = depth <= 0 ? below(3) : below(13);
        switch (pick) {
            case 0: return mk_var(one_of({"x", "y", "z"}));
            case 1: return mk_const(one_of({"c", "nil", "0", "3", "-2", "add", "cons"}));
            case 2: return mk_int(below(20));
            case 3: return mk_lam(one_of({"x", "y"}), type(depth - 1), term(depth - 1));
            case 4:
            case 5: return mk_app(term(depth - 1), term(depth - 1));
            case 6: return mk_bracket(svar(), term(depth - 1));
            case 7: return mk_escape(svar(), term(depth - 1));
            case 8: return mk_stage_lam(svar(), term(depth - 1));
            case 9: {
                std::vector<StageVar> vs;
                for (int i = below(3); i > 0; --i) vs.push_back(svar());
                return mk_stage_app(term(depth - 1), Stage(vs));
            }
            case 10: return mk_csp(svar(), term(depth - 1));
            default:
                return mk_apps(mk_const(one_of({"add", "sub", "mul", "eq"})), {term(depth - 1), term(depth - 1)});
        }
    }

    Type type(int depth) {
        int pick = depth <= 0 ? 0 : below(6);
        switch (pick) {
            case 0: return mk_tconst(one_of({"Int", "Bool", "Vector"}));
            case 1: return mk_pi(one_of({"n", "x"}), type(depth - 1), type(depth - 1));
            case 2: return mk_arrow(type(depth - 1), type(depth - 1));
            case 3: return mk_tapp(type(depth - 1), term(depth - 1));
            case 4: return mk_code(svar(), type(depth - 1));
            default: return mk_forall(svar(), type(depth - 1));
        }
    }

    Kind kind(int depth) {
        if (depth <= 0 || below(2) == 0) return mk_star();
        return mk_kpi(one_of({"n", "x"}), type(depth - 1), kind(depth - 1));
    }

private:
    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    std::string one_of(std::initializer_list<const char*> xs) { return *(xs.begin() + below(int(xs.size()))); }
    StageVar svar() { return below(2) ? "a" : "b"; }

    std::mt19937_64 rng_;
};

TEST(Pretty, ParsePrettyRoundTripOnGeneratedTrees) {
    AstGen gen(20261018);
    for (int i = 0; i < 1000; ++i) {
        Term t = gen.term(1 + i % 6);
        std::string text = pretty(t);
        Term back;
        ASSERT_NO_THROW(back = parse_term(text, kConsts)) << text;
        EXPECT_TRUE(alpha_eq(back, t)) << text << "\n reparsed as " << pretty(back);
        EXPECT_EQ(pretty(back), text);

        Type ty = gen.type(1 + i % 4);
        std::string ttext = pretty(ty);
        Type tback;
        ASSERT_NO_THROW(tback = parse_type(ttext, kConsts)) << ttext;
        EXPECT_TRUE(alpha_eq(tback, ty)) << ttext << "\n reparsed as " << pretty(tback);

        Kind k = gen.kind(1 + i % 3);
        std::string ktext = pretty(k);
        Kind kback;
        ASSERT_NO_THROW(kback = parse_kind(ktext, kConsts)) << ktext;
        EXPECT_TRUE(alpha_eq(kback, k)) << ktext;
    }
}

TEST(Pretty, SignatureRoundTrip) {
    const char* text =
        "type Int :: *;\n"
        "type Vector :: Int -> *;\n"
        "const cons : Pi n:Int. Int -> Vector n -> Vector (n + 1);\n";
    Signature sig = parse_signature(text);
    EXPECT_EQ(pretty(sig), text);
}

TEST(Fuzz, RandomInputNeverCrashes) {
    const std::string alphabet = "()\\/.:;->|<%@[]+*= \nabxyzInt0123456789PiforallVector_'$#";
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> len(0, 40), ch(0, alphabet.size() - 1);
    int parsed = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string s;
        for (std::size_t n = len(rng); n > 0; --n) s += alphabet[ch(rng)];
        if (i % 3 == 0) {
            for (std::size_t n = len(rng) / 4; n > 0; --n) s += static_cast<char>(rng() & 0xff);
        }
        try {
            parse_term(s);
            ++parsed;
        } catch (const ParseError& e) {
            const auto& span = e.diagnostic().span;
            EXPECT_GE(span.line, 1);
            EXPECT_GE(span.column, 1);
        }
        try {
            parse_file(s);
        } catch (const ParseError&) {
        }
    }
    EXPECT_GT(parsed, 0);
}

}  // namespace
}  // namespace lmd
