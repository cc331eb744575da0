// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every criterion passes within its time limit.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "lmd/kernel.hpp"
#include "lmd/prelude.hpp"
#include "lmd/session.hpp"
#include "lmd/testkit.hpp"

using namespace lmd;

namespace {

const ReductionOptions kDelta{.delta = true};

Term term(const char* s) { return parse_term(s, constant_names(prelude_signature())); }
Type type(const char* s) { return parse_type(s, constant_names(prelude_signature())); }

std::string rules_of(const std::vector<ReductionStep>& steps) {
    std::string out;
    for (const auto& s : steps) out += (out.empty() ? "" : " ") + std::string(rule_name(s.rule));
    return out;
}

bool contains_rule(const Derivation& d, const std::string& rule) {
    if (d.rule == rule) return true;
    for (const auto& p : d.premises)
        if (contains_rule(p, rule)) return true;
    return false;
}

struct Outcome {
    bool ok;
    std::string detail;
};

// Staged steps taken by criteria 2 and 5, re-examined by criterion 11.
std::vector<ReductionStep> g_staged_steps;

Outcome full_example() {
    Term m = term("(\\f:Int->Int. (/\\a. |>a (%a f 1 + <|a |>a 3)) @[]) (\\x:Int. x)");
    NormalizeResult r = normalize(m, Strategy::staged(), 1000, kDelta);
    std::string rules = rules_of(r.steps);
    bool lo_agrees = alpha_eq(normal_form(m, 1000, kDelta), r.term);
    bool ok = pretty(r.term) == "4" && rules == "beta diamond Lambda beta delta" && lo_agrees;
    return {ok, pretty(r.term) + " via " + rules + (lo_agrees ? "" : "; leftmost-outermost disagrees")};
}

Outcome staged_example() {
    EvalResult r = eval_staged(term("(/\\a. |>a <|a |>a ((\\x:Int. x) 10)) @[]"), 1000, kDelta);
    g_staged_steps.insert(g_staged_steps.end(), r.steps.begin(), r.steps.end());
    bool ok = pretty(r.value) == "10" && r.steps.size() == 3;
    return {ok, pretty(r.value) + " in " + std::to_string(r.steps.size()) + " steps (" + rules_of(r.steps) + ")"};
}

Outcome typing_walls() {
    Checker c(prelude_signature());
    int right = 0;
    std::string wrong;
    auto expect = [&](bool want, const char* what, const std::function<void()>& judgment) {
        bool got = true;
        try {
            judgment();
        } catch (const TypeError&) {
            got = false;
        }
        if (got == want)
            ++right;
        else
            wrong += std::string(wrong.empty() ? "" : "; ") + what;
    };
    TypeEnv ya{{"y", type("Int"), Stage{"a"}}};
    TypeEnv xe{{"x", type("Int"), Stage{}}};
    expect(true, "y:Int@a ⊢ \\x:Int.y @ a", [&] { c.check_type(ya, term("\\x:Int. y"), type("Int -> Int"), {"a"}); });
    expect(false, "y:Int@a ⊢ \\x:Int.y @ ε", [&] { c.check_type(ya, term("\\x:Int. y"), type("Int -> Int"), {}); });
    expect(true, "x:Int@ε ⊢ Vector x @ ε", [&] { c.infer_kind(xe, type("Vector x"), {}); });
    expect(false, "x:Int@ε ⊢ Vector x @ a", [&] { c.infer_kind(xe, type("Vector x"), {"a"}); });
    expect(true, "x:Int@ε ⊢ Vector (%a x) @ a", [&] { c.infer_kind(xe, type("Vector (%a x)"), {"a"}); });
    return {right == 5, std::to_string(right) + "/5 judgments as expected" + (wrong.empty() ? "" : ": " + wrong)};
}

Outcome q_percent() {
    Checker c(prelude_signature(), {.delta = true});
    Term gen = term("/\\g. |>g (\\v:Vector (%g 5). v)");
    auto [t, d] = c.infer_type({}, gen, {});
    if (!alpha_eq(t, type("forall g. |>g (Vector (%g 5) -> Vector (%g 5))")))
        return {false, "generator has type " + pretty(t)};
    // Run at ε, and splice the code instantiated at g where Vector 5 is expected.
    c.check_type({}, mk_stage_app(gen, {}), type("Vector 5 -> Vector 5"), {});
    Term at_g = mk_stage_lam("g", mk_bracket("g", mk_escape("g", mk_stage_app(gen, Stage{"g"}))));
    Derivation conv = c.check_type({}, at_g, type("forall g. |>g (Vector 5 -> Vector 5)"), {});
    bool used = contains_rule(conv, "Q-Percent");
    return {used, used ? "coercion accepted by Q-Percent" : "accepted without Q-Percent"};
}

Outcome vadd() {
    SessionOptions opts;
    opts.prelude = true;
    Session s(opts);
    s.load_file(std::string(LMD_SAMPLES_DIR) + "/vadd-unrolled.lmd");
    Type pi = s.parse_type_text("Pi n:Int. forall b. |>b (Vector (%b n) -> Vector (%b n) -> Vector (%b n))");
    Type at3 = subst(pi->body, pi->name, mk_int(3));
    const Definition& gen = s.definitions().at("vadd_3");
    Checker c(s.signature(), s.check_options());
    c.check_type({}, gen.term, at3, {});
    EvalResult r = s.eval(s.require_main().term);
    g_staged_steps.insert(g_staged_steps.end(), r.steps.begin(), r.steps.end());
    bool ok = alpha_eq(r.value, term("cons 2 11 (cons 1 22 (cons 0 33 nil))"));
    return {ok, "vadd_3 : " + pretty(at3) + "; evaluates to " + pretty(r.value)};
}

Outcome suite(SuiteReport r, std::size_t n) {
    std::string detail = r.summary();
    if (!r.counterexamples.empty()) detail += "; first: " + r.counterexamples.front().message;
    return {r.passed == n && r.failed == 0, detail};
}

Outcome staged_subset() {
    if (g_staged_steps.empty()) return {false, "no staged steps recorded"};
    std::string bad = check_staged_subset(g_staged_steps, kDelta);
    return {bad.empty(), std::to_string(g_staged_steps.size()) + " staged steps" + (bad.empty() ? "" : ": " + bad)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit;
        std::function<Outcome()> run;
    };
    const std::uint64_t seed = 1;
    std::vector<Criterion> criteria{
        {1, "full reduction of the code-generation example", 1, full_example},
        {2, "staged reduction of the splice example", 1, staged_example},
        {3, "stage walls in typing and kinding", 1, typing_walls},
        {4, "Q-Percent coercion of generated vector code", 1, q_percent},
        {5, "vadd at n=3, generated, run and applied", 5, vadd},
        {6, "preservation over 500 terms", 60, [&] { return suite(suite_preservation(500, seed), 500); }},
        {7, "confluence over 300 terms", 60, [&] { return suite(suite_confluence(300, seed), 300); }},
        {8, "strong normalization over 500 terms", 60, [&] { return suite(suite_sn(500, 100000, seed), 500); }},
        {9, "♮ translation typing over 500 terms", 30, [&] { return suite(suite_natural(500, seed), 500); }},
        {10, "unique decomposition over 300 terms", 60, [&] { return suite(suite_decomposition(300, seed), 300); }},
        {11, "staged steps are full-reduction steps", 1, staged_subset},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = secs < c.limit;
        bool pass = o.ok && in_time;
        if (!pass) ++failed;
        std::ostringstream time;
        time << std::fixed << std::setprecision(3) << secs << "s";
        std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << c.id << "  " << c.name << "  ("
                  << time.str() << ", limit " << c.limit << "s" << (in_time ? "" : ", too slow") << ")  " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
    return failed == 0 ? 0 : 1;
}
