#pragma once

// Random well-typed terms, a brute-force decomposition oracle, and the
// metatheory property suites built on them.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lmd/reduction.hpp"
#include "lmd/syntax.hpp"

namespace lmd {

struct GenConfig {
    std::uint64_t seed = 0;
    int max_depth = 6;  // 1 is a single leaf
    /// Stage-variable pool; generated types and binders draw from it.
    std::vector<StageVar> stage_pool{"a", "b"};
    Signature signature;  // defaults to the prelude when empty
    /// No free variable of the generated environment lives at stage ε.
    bool epsilon_free_env = true;
    /// Relative weights, keyed by construction: var, const, lam, app, bracket,
    /// escape, stage-lam, stage-app, csp, conv. Missing keys weigh 1.
    std::map<std::string, double> weights;
};

struct GeneratedCase {
    TypeEnv env;
    Term term;
    Type type;
    Stage stage;
    std::vector<std::string> trace;  // typing rules used, in construction order
};

/// Deterministic in the config: the same seed gives the same case.
GeneratedCase gen_typed(const GenConfig& config);

/// Every split of M (at stage A) into an evaluation context and a redex,
/// found by trying each position; shares no code with `decompose`.
std::vector<Decomposition> oracle_decompose_all(const Term& m, const Stage& a, const ReductionOptions& opts = {});
bool oracle_is_value(const Term& m, const Stage& a, const ReductionOptions& opts = {});

struct Counterexample {
    GeneratedCase original;
    Term shrunk;
    std::string message;
};

struct SuiteReport {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::vector<Counterexample> counterexamples;
    double seconds = 0;

    /// `suite=<name> pass=<p> fail=<f> seed=<s>`
    std::string summary() const;
};

SuiteReport suite_preservation(std::size_t n, std::uint64_t seed = 1);
SuiteReport suite_confluence(std::size_t n, std::uint64_t seed = 1);
SuiteReport suite_sn(std::size_t n, std::size_t budget = 100000, std::uint64_t seed = 1);
SuiteReport suite_natural(std::size_t n, std::uint64_t seed = 1);
SuiteReport suite_decomposition(std::size_t n, std::uint64_t seed = 1);
SuiteReport suite_staged_subset(std::size_t n, std::uint64_t seed = 1);

/// Runs a suite by name (preservation, confluence, sn, natural,
/// decomposition, staged-subset); throws std::invalid_argument otherwise.
SuiteReport run_suite(const std::string& name, std::size_t n, std::uint64_t seed);
const std::vector<std::string>& suite_names();

/// Checks for one case; an empty string means the property holds.
std::string check_preservation(const GeneratedCase& c);
std::string check_confluence(const GeneratedCase& c, std::uint64_t seed);
std::string check_sn(const GeneratedCase& c, std::size_t budget);
std::string check_natural(const GeneratedCase& c);
std::string check_decomposition(const GeneratedCase& c);
/// Every staged step's (before, after) pair is a full-reduction contraction.
std::string check_staged_subset(const std::vector<ReductionStep>& staged, const ReductionOptions& opts = {});

/// Greedy sub-term shrinking. A candidate is kept only when it still checks
/// at an equivalent type and `still_fails` holds for it.
Term shrink(const GeneratedCase& c, const std::function<bool(const GeneratedCase&)>& still_fails);

/// Writes one file per counterexample into `dir`; returns the paths.
std::vector<std::string> write_counterexamples(const SuiteReport& report, const std::string& dir);

}  // namespace lmd
