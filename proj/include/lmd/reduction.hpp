#pragma once

// Full reduction (β, ◆, Λ and optional δ), normalization strategies,
// the staged value grammar V^A, evaluation-context decomposition and the
// staged call-by-value evaluator.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lmd/syntax.hpp"

namespace lmd {

enum class RuleTag : std::uint8_t { Beta, Diamond, StageBeta, Delta };

const char* rule_name(RuleTag r);  // "beta", "diamond", "Lambda", "delta"

/// Child indices from the root: 0 is the function / body, 1 the argument.
/// Type annotations are never entered.
using Path = std::vector<std::uint8_t>;

struct ReductionStep {
    RuleTag rule;
    Path position;
    Term before;  // whole term
    Term after;   // whole term with the sub-term at `position` contracted
};

struct ReductionOptions {
    bool delta = false;
};

class StepBudgetExceeded : public std::runtime_error {
public:
    explicit StepBudgetExceeded(std::size_t budget);
    std::size_t budget() const { return budget_; }

private:
    std::size_t budget_;
};

/// Neither a value nor decomposable into context and redex.
class Stuck : public std::runtime_error {
public:
    Stuck(Term subterm, Stage stage);
    const Term& subterm() const { return subterm_; }
    const Stage& stage() const { return stage_; }

private:
    Term subterm_;
    Stage stage_;
};

Term subterm_at(const Term& t, const Path& p);
Term replace_at(const Term& t, const Path& p, const Term& replacement);

/// Contracts `t` at its root with `rule`; the caller guarantees the shape.
Term contract(const Term& t, RuleTag rule);
/// The rule for which `t` is a redex at its root, if any.
std::optional<RuleTag> redex_rule(const Term& t, const ReductionOptions& opts);

/// δ-contraction at the root: add/sub/mul/eq on literals, head/tail on cons.
std::optional<Term> delta_step(const Term& t);

/// Every redex occurrence in pre-order (leftmost-outermost first).
std::vector<ReductionStep> enumerate_redexes(const Term& t, const ReductionOptions& opts = {});

Term step_full(const Term& t, std::size_t choice, const ReductionOptions& opts = {});

struct Strategy {
    enum class Kind { LeftmostOutermost, Random, Staged };
    Kind kind = Kind::LeftmostOutermost;
    std::uint64_t seed = 0;

    static Strategy leftmost_outermost() { return {}; }
    static Strategy random(std::uint64_t seed) { return {Kind::Random, seed}; }
    /// Contract the staged-reduction redex when there is one, otherwise
    /// fall back to leftmost-outermost.
    static Strategy staged() { return {Kind::Staged, 0}; }
};

struct NormalizeResult {
    Term term;
    std::vector<ReductionStep> steps;
};

NormalizeResult normalize(const Term& t, Strategy strategy, std::size_t max_steps,
                          const ReductionOptions& opts = {});

/// Normal form only; no trace is kept.
Term normal_form(const Term& t, std::size_t max_steps, const ReductionOptions& opts = {});

// --- staged semantics -----------------------------------------------------

/// M ∈ V^A
bool is_value(const Term& t, const Stage& stage, const ReductionOptions& opts = {});

struct ValueJudgment {
    Term term;
    Stage stage;
    bool is_value = true;
};

/// M = E^A_B[R^B]. The context is the original term with the hole at `hole`.
struct Decomposition {
    Stage context_stage;
    Stage hole_stage;
    Term context;  // original term; the hole is the sub-term at `hole`
    Path hole;
    Term redex;
    RuleTag rule;

    Term plug(const Term& filler) const { return replace_at(context, hole, filler); }
};

using DecomposeResult = std::variant<ValueJudgment, Decomposition>;

/// Syntax-directed decomposition; throws Stuck.
DecomposeResult decompose(const Term& t, const Stage& stage, const ReductionOptions& opts = {});

/// One ⟶s step at stage ε; nullopt for values. Throws Stuck.
std::optional<ReductionStep> step_staged(const Term& t, const ReductionOptions& opts = {});

struct EvalResult {
    Term value;
    std::vector<ReductionStep> steps;
};

/// Iterates ⟶s to a value in V^ε. Throws Stuck or StepBudgetExceeded.
EvalResult eval_staged(const Term& t, std::size_t max_steps, const ReductionOptions& opts = {});

/// One JSON object per line: {"rule","path","before","after"}.
std::string trace_json_line(const ReductionStep& step);

}  // namespace lmd
