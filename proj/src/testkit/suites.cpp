#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lmd/kernel.hpp"
#include "lmd/natural.hpp"
#include "lmd/prelude.hpp"
#include "lmd/surface.hpp"
#include "lmd/testkit.hpp"
#include "lmd/typesystem.hpp"

namespace lmd {

namespace {

constexpr std::size_t kMaxCounterexamples = 5;
constexpr std::size_t kNormalizeBudget = 100000;
// Preservation re-checks every one-step reduct of this many terms along the
// leftmost-outermost path.
constexpr std::size_t kPreservationPathLimit = 64;
// Generated cases draw from the prelude, so its δ-rules are part of full
// reduction and of conversion throughout.
const ReductionOptions kDelta{.delta = true};
const CheckOptions kCheckDelta{.delta = true};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string describe(const GeneratedCase& c) {
    std::ostringstream os;
    os << (c.env.empty() ? std::string("∅") : pretty(c.env)) << " ⊢ " << pretty(c.term) << " : " << pretty(c.type)
       << " @ " << pretty(c.stage);
    return os.str();
}

void collect_paths(const Term& t, Path& here, std::vector<Path>& out) {
    out.push_back(here);
    auto child = [&](const Term& sub, std::uint8_t i) {
        here.push_back(i);
        collect_paths(sub, here, out);
        here.pop_back();
    };
    switch (t->tag) {
        case TermTag::Const:
        case TermTag::Var: break;
        case TermTag::App:
            child(t->fun, 0);
            child(t->arg, 1);
            break;
        case TermTag::StageApp: child(t->fun, 0); break;
        default: child(t->body, 0); break;
    }
}

std::vector<Term> shrink_candidates(const Term& sub) {
    std::vector<Term> out{mk_int(0), mk_const("true"), mk_const("nil")};
    switch (sub->tag) {
        case TermTag::Const:
        case TermTag::Var: break;
        case TermTag::App:
            out.push_back(sub->fun);
            out.push_back(sub->arg);
            break;
        case TermTag::StageApp: out.push_back(sub->fun); break;
        default: out.push_back(sub->body); break;
    }
    return out;
}

using CaseCheck = std::function<std::string(const GeneratedCase&, std::uint64_t)>;

SuiteReport run_cases(const std::string& name, std::size_t n, std::uint64_t seed, GenConfig cfg,
                      const CaseCheck& check) {
    if (n == 0) throw std::invalid_argument("suite " + name + ": n must be positive");
    auto start = std::chrono::steady_clock::now();
    SuiteReport report;
    report.name = name;
    report.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t case_seed = splitmix(seed * 0x100000001b3ULL + i);
        cfg.seed = case_seed;
        GeneratedCase c = gen_typed(cfg);
        auto run = [&](const GeneratedCase& k) {
            try {
                return check(k, case_seed);
            } catch (const std::exception& e) {
                return std::string("exception: ") + e.what();
            }
        };
        std::string msg = run(c);
        if (msg.empty()) {
            ++report.passed;
            continue;
        }
        ++report.failed;
        if (report.counterexamples.size() < kMaxCounterexamples) {
            Term small = shrink(c, [&](const GeneratedCase& k) { return !run(k).empty(); });
            report.counterexamples.push_back({c, small, msg});
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace

std::string SuiteReport::summary() const {
    return "suite=" + name + " pass=" + std::to_string(passed) + " fail=" + std::to_string(failed) +
           " seed=" + std::to_string(seed);
}

// --- properties -----------------------------------------------------------

std::string check_preservation(const GeneratedCase& c) {
    Checker checker(prelude_signature(), kCheckDelta);
    Term cur = c.term;
    for (std::size_t k = 0; k < kPreservationPathLimit; ++k) {
        auto steps = enumerate_redexes(cur, kDelta);
        if (steps.empty()) return {};
        for (const auto& s : steps) {
            try {
                auto [t, d] = checker.infer_type(c.env, s.after, c.stage);
                checker.equiv_type(c.env, t, c.type, mk_star(), c.stage);
            } catch (const TypeError& e) {
                return std::string(rule_name(s.rule)) + "-step " + pretty(s.before) + " ⟶ " + pretty(s.after) +
                       " does not re-check: " + e.what();
            }
        }
        cur = steps.front().after;
    }
    return {};
}

std::string check_confluence(const GeneratedCase& c, std::uint64_t seed) {
    Term lo = normal_form(c.term, kNormalizeBudget, kDelta);
    for (std::uint64_t k = 0; k < 3; ++k) {
        auto r = normalize(c.term, Strategy::random(splitmix(seed + k)), kNormalizeBudget, kDelta);
        if (!alpha_eq(r.term, lo))
            return "random strategy " + std::to_string(k) + " reached " + pretty(r.term) +
                   " but leftmost-outermost reached " + pretty(lo);
    }
    return {};
}

std::string check_sn(const GeneratedCase& c, std::size_t budget) {
    NormalizeResult r;
    try {
        r = normalize(c.term, Strategy::leftmost_outermost(), budget, kDelta);
    } catch (const StepBudgetExceeded&) {
        return std::string("no normal form within ") + std::to_string(budget) + " steps";
    }
    for (const auto& s : r.steps) {
        StlcTerm before = nat_term(s.before);
        StlcTerm after = nat_term(s.after);
        if (s.rule == RuleTag::Beta) {
            bool found = false;
            for (const auto& t : stlc_contractions(before)) found = found || stlc_alpha_eq(t, after);
            if (!found) return "β-step " + pretty(s.before) + " has no matching STLC step";
            continue;
        }
        auto measure = [](const Term& t) { return std::make_pair(stage_lam_count(t), term_size(t)); };
        if (s.rule == RuleTag::Delta) {
            // A δ-step computes with constants and may drop a subterm; its ♮
            // image changes, but the measure still has to go down.
            if (!(measure(s.after) < measure(s.before)))
                return "δ-step " + pretty(s.before) + " does not shrink the measure";
            continue;
        }
        if (!stlc_alpha_eq(before, after)) return std::string(rule_name(s.rule)) + "-step changes the ♮ image";
        if (!(measure(s.after) < measure(s.before)))
            return std::string(rule_name(s.rule)) + "-step " + pretty(s.before) + " does not shrink the measure";
    }
    return {};
}

std::string check_natural(const GeneratedCase& c) {
    StlcEnv env = nat_signature(prelude_signature());
    for (auto& e : nat_env(c.env)) env.push_back(std::move(e));
    StlcType got;
    try {
        got = stlc_check(env, nat_term(c.term));
    } catch (const StlcError& e) {
        return std::string("translation does not check: ") + e.what();
    }
    StlcType want = nat_type(c.type);
    if (!stlc_eq(got, want)) return "translation has type " + pretty(got) + ", expected " + pretty(want);
    return {};
}

namespace {

std::string decomposition_agrees(const Term& m, const Stage& a) {
    auto all = oracle_decompose_all(m, a, kDelta);
    bool val = oracle_is_value(m, a, kDelta);
    if (val && !all.empty()) return "value " + pretty(m) + " also decomposes";
    if (!val && all.size() != 1)
        return pretty(m) + " has " + std::to_string(all.size()) + " decompositions at stage " + pretty(a);
    DecomposeResult r;
    try {
        r = decompose(m, a, kDelta);
    } catch (const Stuck& e) {
        return "decompose is stuck on " + pretty(e.subterm()) + " but the oracle is not";
    }
    if (val) return std::holds_alternative<ValueJudgment>(r) ? "" : "decompose misses value " + pretty(m);
    const auto* d = std::get_if<Decomposition>(&r);
    if (!d) return "decompose calls " + pretty(m) + " a value";
    const Decomposition& o = all.front();
    if (d->hole != o.hole || d->hole_stage != o.hole_stage || d->rule != o.rule)
        return "decompose and the oracle disagree on " + pretty(m) + ": " + rule_name(d->rule) + " vs " +
               rule_name(o.rule);
    return {};
}

}  // namespace

std::string check_decomposition(const GeneratedCase& c) {
    Term cur = c.term;
    for (std::size_t k = 0; k < 1000; ++k) {
        std::string err = decomposition_agrees(cur, c.stage);
        if (!err.empty()) return err;
        if (!c.stage.empty()) return {};
        auto step = step_staged(cur, kDelta);
        if (!step) return {};
        cur = step->after;
    }
    return {};
}

std::string check_staged_subset(const std::vector<ReductionStep>& staged, const ReductionOptions& opts) {
    for (const auto& s : staged) {
        bool found = false;
        for (const auto& f : enumerate_redexes(s.before, opts)) found = found || alpha_eq(f.after, s.after);
        if (!found) return "staged step " + pretty(s.before) + " ⟶s " + pretty(s.after) + " is not a full step";
    }
    return {};
}

// --- suites ---------------------------------------------------------------

SuiteReport suite_preservation(std::size_t n, std::uint64_t seed) {
    return run_cases("preservation", n, seed, {}, [](const GeneratedCase& c, std::uint64_t) {
        return check_preservation(c);
    });
}

SuiteReport suite_confluence(std::size_t n, std::uint64_t seed) {
    return run_cases("confluence", n, seed, {}, check_confluence);
}

SuiteReport suite_sn(std::size_t n, std::size_t budget, std::uint64_t seed) {
    return run_cases("sn", n, seed, {}, [budget](const GeneratedCase& c, std::uint64_t) { return check_sn(c, budget); });
}

SuiteReport suite_natural(std::size_t n, std::uint64_t seed) {
    return run_cases("natural", n, seed, {}, [](const GeneratedCase& c, std::uint64_t) { return check_natural(c); });
}

SuiteReport suite_decomposition(std::size_t n, std::uint64_t seed) {
    GenConfig cfg;
    cfg.epsilon_free_env = true;
    return run_cases("decomposition", n, seed, cfg, [](const GeneratedCase& c, std::uint64_t) {
        return check_decomposition(c);
    });
}

SuiteReport suite_staged_subset(std::size_t n, std::uint64_t seed) {
    GenConfig cfg;
    cfg.epsilon_free_env = true;
    return run_cases("staged-subset", n, seed, cfg, [](const GeneratedCase& c, std::uint64_t) -> std::string {
        if (!c.stage.empty()) return {};
        return check_staged_subset(eval_staged(c.term, kNormalizeBudget, kDelta).steps, kDelta);
    });
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"preservation", "confluence",    "sn",
                                                "natural",      "decomposition", "staged-subset"};
    return names;
}

SuiteReport run_suite(const std::string& name, std::size_t n, std::uint64_t seed) {
    if (name == "preservation") return suite_preservation(n, seed);
    if (name == "confluence") return suite_confluence(n, seed);
    if (name == "sn") return suite_sn(n, kNormalizeBudget, seed);
    if (name == "natural") return suite_natural(n, seed);
    if (name == "decomposition") return suite_decomposition(n, seed);
    if (name == "staged-subset") return suite_staged_subset(n, seed);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

// --- shrinking and reporting ----------------------------------------------

Term shrink(const GeneratedCase& c, const std::function<bool(const GeneratedCase&)>& still_fails) {
    Checker checker(prelude_signature(), kCheckDelta);
    GeneratedCase cur = c;
    for (bool progress = true; progress;) {
        progress = false;
        std::vector<Path> paths;
        Path here;
        collect_paths(cur.term, here, paths);
        for (const auto& p : paths) {
            for (const Term& cand : shrink_candidates(subterm_at(cur.term, p))) {
                Term next = replace_at(cur.term, p, cand);
                if (term_size(next) >= term_size(cur.term)) continue;
                GeneratedCase k = cur;
                k.term = next;
                try {
                    auto [t, d] = checker.infer_type(k.env, next, k.stage);
                    checker.equiv_type(k.env, t, k.type, mk_star(), k.stage);
                } catch (const TypeError&) {
                    continue;
                }
                if (!still_fails(k)) continue;
                cur = std::move(k);
                progress = true;
                break;
            }
            if (progress) break;
        }
    }
    return cur.term;
}

std::vector<std::string> write_counterexamples(const SuiteReport& report, const std::string& dir) {
    std::vector<std::string> paths;
    if (report.counterexamples.empty()) return paths;
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < report.counterexamples.size(); ++i) {
        const auto& ce = report.counterexamples[i];
        std::string path =
            (std::filesystem::path(dir) / (report.name + "-" + std::to_string(report.seed) + "-" + std::to_string(i) +
                                           ".txt"))
                .string();
        std::ofstream out(path);
        out << "-- " << report.summary() << "\n";
        out << "-- failure: " << ce.message << "\n";
        out << "-- case: " << describe(ce.original) << "\n";
        out << "-- shrunk term:\n" << pretty(ce.shrunk) << "\n";
        paths.push_back(path);
    }
    return paths;
}

}  // namespace lmd
