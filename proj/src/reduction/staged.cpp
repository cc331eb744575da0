#include "lmd/kernel.hpp"
#include "lmd/reduction.hpp"

namespace lmd {

namespace {

// A constant applied to values, with no δ-rule firing anywhere on the spine.
bool constant_value(const Term& t, const Stage& stage, const ReductionOptions& opts) {
    switch (t->tag) {
        case TermTag::Const: return true;
        case TermTag::App:
            if (opts.delta && delta_step(t)) return false;
            return constant_value(t->fun, stage, opts) && is_value(t->arg, stage, opts);
        case TermTag::StageApp: return constant_value(t->fun, stage, opts);
        default: return false;
    }
}

bool value_at_epsilon(const Term& t, const ReductionOptions& opts) {
    switch (t->tag) {
        case TermTag::Lam: return true;
        case TermTag::Bracket: return is_value(t->body, Stage{t->name}, opts);
        case TermTag::StageLam: return value_at_epsilon(t->body, opts);
        case TermTag::Const:
        case TermTag::App:
        case TermTag::StageApp: return constant_value(t, Stage::epsilon(), opts);
        default: return false;
    }
}

bool value_at_nonempty(const Term& t, const Stage& stage, const ReductionOptions& opts) {
    switch (t->tag) {
        case TermTag::Var:
        case TermTag::Const: return true;
        case TermTag::Lam: return value_at_nonempty(t->body, stage, opts);
        case TermTag::App: return value_at_nonempty(t->fun, stage, opts) && value_at_nonempty(t->arg, stage, opts);
        case TermTag::Bracket: return value_at_nonempty(t->body, stage.push(t->name), opts);
        case TermTag::StageLam: return value_at_nonempty(t->body, stage, opts);
        case TermTag::StageApp: return value_at_nonempty(t->fun, stage, opts);
        case TermTag::Escape:
            return stage.ends_with(t->name) && stage.size() >= 2 && value_at_nonempty(t->body, stage.pop(), opts);
        case TermTag::Csp: return stage.ends_with(t->name) && is_value(t->body, stage.pop(), opts);
    }
    return false;
}

struct Decomposer {
    const ReductionOptions& opts;
    Term root;
    Stage root_stage;
    Path path;

    Decomposition found(const Term& redex, const Stage& hole_stage, RuleTag rule) {
        return Decomposition{root_stage, hole_stage, root, path, redex, rule};
    }

    Decomposition descend(const Term& sub, std::uint8_t i, const Stage& stage) {
        path.push_back(i);
        Decomposition d = go(sub, stage);
        path.pop_back();
        return d;
    }

    // Precondition: t is not a value at `stage`.
    Decomposition go(const Term& t, const Stage& stage) {
        if (stage.empty()) return at_epsilon(t);
        return at_nonempty(t, stage);
    }

    Decomposition at_epsilon(const Term& t) {
        const Stage eps;
        switch (t->tag) {
            case TermTag::App:
                if (!is_value(t->fun, eps, opts)) return descend(t->fun, 0, eps);
                if (!is_value(t->arg, eps, opts)) return descend(t->arg, 1, eps);
                if (t->fun->tag == TermTag::Lam) return found(t, eps, RuleTag::Beta);
                if (opts.delta && delta_step(t)) return found(t, eps, RuleTag::Delta);
                break;
            case TermTag::StageApp:
                if (!is_value(t->fun, eps, opts)) return descend(t->fun, 0, eps);
                if (t->fun->tag == TermTag::StageLam) return found(t, eps, RuleTag::StageBeta);
                break;
            case TermTag::Bracket: return descend(t->body, 0, Stage{t->name});
            case TermTag::StageLam: return descend(t->body, 0, eps);
            default: break;
        }
        throw Stuck(t, eps);
    }

    Decomposition at_nonempty(const Term& t, const Stage& stage) {
        switch (t->tag) {
            case TermTag::Lam: return descend(t->body, 0, stage);
            case TermTag::App:
                if (!is_value(t->fun, stage, opts)) return descend(t->fun, 0, stage);
                return descend(t->arg, 1, stage);
            case TermTag::Bracket: return descend(t->body, 0, stage.push(t->name));
            case TermTag::StageLam: return descend(t->body, 0, stage);
            case TermTag::StageApp: return descend(t->fun, 0, stage);
            case TermTag::Escape:
                if (!stage.ends_with(t->name)) break;
                if (stage.size() == 1 && t->body->tag == TermTag::Bracket && t->body->name == t->name &&
                    is_value(t->body->body, stage, opts))
                    return found(t, stage, RuleTag::Diamond);
                if (is_value(t->body, stage.pop(), opts)) break;
                return descend(t->body, 0, stage.pop());
            case TermTag::Csp:
                if (!stage.ends_with(t->name)) break;
                return descend(t->body, 0, stage.pop());
            default: break;
        }
        throw Stuck(t, stage);
    }
};

}  // namespace

bool is_value(const Term& t, const Stage& stage, const ReductionOptions& opts) {
    return stage.empty() ? value_at_epsilon(t, opts) : value_at_nonempty(t, stage, opts);
}

DecomposeResult decompose(const Term& t, const Stage& stage, const ReductionOptions& opts) {
    if (is_value(t, stage, opts)) return ValueJudgment{t, stage, true};
    Decomposer d{opts, t, stage, {}};
    return d.go(t, stage);
}

std::optional<ReductionStep> step_staged(const Term& t, const ReductionOptions& opts) {
    auto r = decompose(t, Stage::epsilon(), opts);
    auto* d = std::get_if<Decomposition>(&r);
    if (!d) return std::nullopt;
    return ReductionStep{d->rule, d->hole, t, d->plug(contract(d->redex, d->rule))};
}

EvalResult eval_staged(const Term& t, std::size_t max_steps, const ReductionOptions& opts) {
    EvalResult res{t, {}};
    while (auto step = step_staged(res.value, opts)) {
        if (res.steps.size() >= max_steps) throw StepBudgetExceeded(max_steps);
        res.value = step->after;
        res.steps.push_back(std::move(*step));
    }
    return res;
}

}  // namespace lmd
