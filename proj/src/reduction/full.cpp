#include <algorithm>
#include <limits>
#include <random>

#include "json.hpp"

#include "lmd/kernel.hpp"
#include "lmd/reduction.hpp"
#include "lmd/surface.hpp"

namespace lmd {

const char* rule_name(RuleTag r) {
    switch (r) {
        case RuleTag::Beta: return "beta";
        case RuleTag::Diamond: return "diamond";
        case RuleTag::StageBeta: return "Lambda";
        case RuleTag::Delta: return "delta";
    }
    return "?";
}

StepBudgetExceeded::StepBudgetExceeded(std::size_t budget)
    : std::runtime_error("step budget of " + std::to_string(budget) + " exceeded"), budget_(budget) {}

Stuck::Stuck(Term subterm, Stage stage)
    : std::runtime_error("stuck at stage " + pretty(stage) + ": " + pretty(subterm)),
      subterm_(std::move(subterm)),
      stage_(std::move(stage)) {}

namespace {

Term child(const Term& t, std::uint8_t i) {
    switch (t->tag) {
        case TermTag::App: return i == 0 ? t->fun : t->arg;
        case TermTag::StageApp: return i == 0 ? t->fun : nullptr;
        case TermTag::Const:
        case TermTag::Var: return nullptr;
        default: return i == 0 ? t->body : nullptr;
    }
}

Term with_child(const Term& t, std::uint8_t i, Term c) {
    switch (t->tag) {
        case TermTag::App: return i == 0 ? mk_app(std::move(c), t->arg) : mk_app(t->fun, std::move(c));
        case TermTag::StageApp: return mk_stage_app(std::move(c), t->stage);
        case TermTag::Lam: return mk_lam(t->name, t->annot, std::move(c));
        case TermTag::Bracket: return mk_bracket(t->name, std::move(c));
        case TermTag::Escape: return mk_escape(t->name, std::move(c));
        case TermTag::StageLam: return mk_stage_lam(t->name, std::move(c));
        case TermTag::Csp: return mk_csp(t->name, std::move(c));
        default: throw std::logic_error("with_child on a leaf");
    }
}

struct Spine {
    Term head;
    std::vector<Term> args;
};

// Term applications only; a stage application ends the spine.
Spine spine(const Term& t) {
    Spine s;
    Term cur = t;
    while (cur->tag == TermTag::App) {
        s.args.push_back(cur->arg);
        cur = cur->fun;
    }
    std::reverse(s.args.begin(), s.args.end());
    s.head = cur;
    return s;
}

std::optional<std::int64_t> arith(const Name& op, std::int64_t a, std::int64_t b) {
    std::int64_t r = 0;
    bool overflow = false;
    if (op == "add")
        overflow = __builtin_add_overflow(a, b, &r);
    else if (op == "sub")
        overflow = __builtin_sub_overflow(a, b, &r);
    else if (op == "mul")
        overflow = __builtin_mul_overflow(a, b, &r);
    else
        return std::nullopt;
    if (overflow) return std::nullopt;
    return r;
}

void enumerate(const Term& root, const Term& t, Path& path, const ReductionOptions& opts,
               std::vector<ReductionStep>& out) {
    if (auto rule = redex_rule(t, opts)) {
        out.push_back({*rule, path, root, replace_at(root, path, contract(t, *rule))});
    }
    for (std::uint8_t i = 0; i < 2; ++i) {
        Term c = child(t, i);
        if (!c) continue;
        path.push_back(i);
        enumerate(root, c, path, opts, out);
        path.pop_back();
    }
}

// Leftmost-outermost single step without materializing every redex.
std::optional<std::pair<Term, ReductionStep>> lo_step(const Term& t, Path& path, const ReductionOptions& opts) {
    if (auto rule = redex_rule(t, opts)) {
        Term c = contract(t, *rule);
        return std::pair{c, ReductionStep{*rule, path, nullptr, nullptr}};
    }
    for (std::uint8_t i = 0; i < 2; ++i) {
        Term c = child(t, i);
        if (!c) continue;
        path.push_back(i);
        auto r = lo_step(c, path, opts);
        path.pop_back();
        if (r) {
            r->first = with_child(t, i, r->first);
            return r;
        }
    }
    return std::nullopt;
}

}  // namespace

Term subterm_at(const Term& t, const Path& p) {
    Term cur = t;
    for (auto i : p) {
        cur = child(cur, i);
        if (!cur) throw std::out_of_range("path leaves the term");
    }
    return cur;
}

Term replace_at(const Term& t, const Path& p, const Term& replacement) {
    std::vector<Term> chain{t};
    for (auto i : p) {
        Term c = child(chain.back(), i);
        if (!c) throw std::out_of_range("path leaves the term");
        chain.push_back(c);
    }
    Term cur = replacement;
    for (std::size_t k = p.size(); k-- > 0;) cur = with_child(chain[k], p[k], cur);
    return cur;
}

std::optional<Term> delta_step(const Term& t) {
    Spine s = spine(t);
    if (s.head->tag != TermTag::Const) return std::nullopt;
    const Name& op = s.head->name;
    if (s.args.size() != 2) return std::nullopt;
    if (op == "add" || op == "sub" || op == "mul" || op == "eq") {
        auto a = int_value(s.args[0]);
        auto b = int_value(s.args[1]);
        if (!a || !b) return std::nullopt;
        if (op == "eq") return mk_const(*a == *b ? "true" : "false");
        if (auto r = arith(op, *a, *b)) return mk_int(*r);
        return std::nullopt;
    }
    if (op == "head" || op == "tail") {
        Spine v = spine(s.args[1]);
        if (v.head->tag != TermTag::Const || v.head->name != "cons" || v.args.size() != 3) return std::nullopt;
        return op == "head" ? v.args[1] : v.args[2];
    }
    return std::nullopt;
}

std::optional<RuleTag> redex_rule(const Term& t, const ReductionOptions& opts) {
    switch (t->tag) {
        case TermTag::App:
            if (t->fun->tag == TermTag::Lam) return RuleTag::Beta;
            if (opts.delta && delta_step(t)) return RuleTag::Delta;
            return std::nullopt;
        case TermTag::Escape:
            if (t->body->tag == TermTag::Bracket && t->body->name == t->name) return RuleTag::Diamond;
            return std::nullopt;
        case TermTag::StageApp:
            if (t->fun->tag == TermTag::StageLam) return RuleTag::StageBeta;
            return std::nullopt;
        default: return std::nullopt;
    }
}

Term contract(const Term& t, RuleTag rule) {
    switch (rule) {
        case RuleTag::Beta: return subst(t->fun->body, t->fun->name, t->arg);
        case RuleTag::Diamond: return t->body->body;
        case RuleTag::StageBeta: return subst_stage(t->fun->body, t->fun->name, t->stage);
        case RuleTag::Delta:
            if (auto r = delta_step(t)) return *r;
            break;
    }
    throw std::logic_error(std::string("not a ") + rule_name(rule) + " redex: " + pretty(t));
}

std::vector<ReductionStep> enumerate_redexes(const Term& t, const ReductionOptions& opts) {
    std::vector<ReductionStep> out;
    Path path;
    enumerate(t, t, path, opts, out);
    return out;
}

Term step_full(const Term& t, std::size_t choice, const ReductionOptions& opts) {
    auto all = enumerate_redexes(t, opts);
    if (choice >= all.size())
        throw std::out_of_range("redex choice " + std::to_string(choice) + " out of range (" +
                                std::to_string(all.size()) + " redexes)");
    return all[choice].after;
}

NormalizeResult normalize(const Term& t, Strategy strategy, std::size_t max_steps, const ReductionOptions& opts) {
    NormalizeResult res{t, {}};
    std::mt19937_64 rng(strategy.seed);
    while (true) {
        std::optional<ReductionStep> step;
        if (strategy.kind == Strategy::Kind::Staged) {
            try {
                if (auto s = step_staged(res.term, opts)) step = std::move(s);
            } catch (const Stuck&) {
            }
        }
        if (!step) {
            if (strategy.kind == Strategy::Kind::Random) {
                auto all = enumerate_redexes(res.term, opts);
                if (all.empty()) break;
                std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
                step = std::move(all[pick(rng)]);
            } else {
                Path path;
                auto r = lo_step(res.term, path, opts);
                if (!r) break;
                step = ReductionStep{r->second.rule, r->second.position, res.term, r->first};
            }
        }
        if (res.steps.size() >= max_steps) throw StepBudgetExceeded(max_steps);
        res.term = step->after;
        res.steps.push_back(std::move(*step));
    }
    return res;
}

Term normal_form(const Term& t, std::size_t max_steps, const ReductionOptions& opts) {
    Term cur = t;
    for (std::size_t n = 0;; ++n) {
        Path path;
        auto r = lo_step(cur, path, opts);
        if (!r) return cur;
        if (n >= max_steps) throw StepBudgetExceeded(max_steps);
        cur = r->first;
    }
}

std::string trace_json_line(const ReductionStep& step) {
    nlohmann::json j;
    j["rule"] = rule_name(step.rule);
    j["path"] = step.position;
    j["before"] = pretty(step.before);
    j["after"] = pretty(step.after);
    return j.dump();
}

}  // namespace lmd
