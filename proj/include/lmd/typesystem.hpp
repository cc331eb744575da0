#pragma once

// The eight judgment forms: signature and environment well-formedness, kind
// well-formedness, kinding, typing, and kind / type / term equivalence.
//
// Typing is bidirectional: synthesis everywhere, checking (hence conversion)
// at application arguments and explicit ascriptions. Equivalence is a sound,
// incomplete procedure: index terms are normalized with full reduction,
// closed stage-local CSPs are erased, and the results are compared up to α.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lmd/kernel.hpp"
#include "lmd/reduction.hpp"
#include "lmd/surface.hpp"
#include "lmd/syntax.hpp"

namespace lmd {

struct Judgment {
    enum class Form { SigOk, EnvOk, KindOk, Kinding, Typing, KindEq, TypeEq, TermEq };
    Form form;
    TypeEnv env;
    Stage stage;
    Kind kind;    // KindOk, Kinding, KindEq (left), TypeEq
    Kind kind2;   // KindEq (right)
    Type type;    // Kinding, Typing, TypeEq (left), TermEq
    Type type2;   // TypeEq (right)
    Term term;    // Typing, TermEq (left)
    Term term2;   // TermEq (right)
    std::vector<Name> decls;  // SigOk: names of the declarations checked so far

    static Judgment sig_ok(std::vector<Name> decls);
    static Judgment env_ok(TypeEnv env);
    static Judgment kind_ok(TypeEnv env, Kind k, Stage a);
    static Judgment kinding(TypeEnv env, Type t, Kind k, Stage a);
    static Judgment typing(TypeEnv env, Term m, Type t, Stage a);
    static Judgment kind_eq(TypeEnv env, Kind k, Kind j, Stage a);
    static Judgment type_eq(TypeEnv env, Type t, Type s, Kind k, Stage a);
    static Judgment term_eq(TypeEnv env, Term m, Term n, Type t, Stage a);

    std::string str() const;
};

const char* form_name(Judgment::Form f);

struct Derivation {
    std::string rule;
    Judgment conclusion;
    std::vector<Derivation> premises;

    std::size_t size() const;
};

/// A failed judgment. `stack` holds the innermost judgments being derived
/// when the failure happened, innermost first (at most five).
class TypeError : public std::runtime_error {
public:
    TypeError(std::string rule, std::string message, std::string expected = {}, std::string actual = {});

    const std::string& rule() const { return rule_; }
    const std::string& message() const { return message_; }
    const std::string& expected() const { return expected_; }
    const std::string& actual() const { return actual_; }
    const std::vector<std::string>& stack() const { return stack_; }
    const std::optional<SourceSpan>& span() const { return span_; }

    void set_stack(std::vector<std::string> s) { stack_ = std::move(s); }
    void set_span(SourceSpan s) { span_ = s; }
    Diagnostic diagnostic() const;

private:
    std::string rule_;
    std::string message_;
    std::string expected_;
    std::string actual_;
    std::vector<std::string> stack_;
    std::optional<SourceSpan> span_;
    static std::string compose(const std::string& rule, const std::string& message, const std::string& expected,
                               const std::string& actual);
};

struct CheckOptions {
    bool delta = false;  // δ-rules inside equivalence
    std::size_t max_steps = 100000;
};

class Checker {
public:
    explicit Checker(Signature sig, CheckOptions opts = {});

    const Signature& signature() const { return sig_; }
    const CheckOptions& options() const { return opts_; }

    Derivation wf_signature();
    Derivation wf_env(const TypeEnv& env);
    Derivation wf_kind(const TypeEnv& env, const Kind& k, const Stage& a);
    std::pair<Kind, Derivation> infer_kind(const TypeEnv& env, const Type& t, const Stage& a);
    std::pair<Type, Derivation> infer_type(const TypeEnv& env, const Term& m, const Stage& a);
    Derivation check_type(const TypeEnv& env, const Term& m, const Type& t, const Stage& a);

    Derivation equiv_kind(const TypeEnv& env, const Kind& k, const Kind& j, const Stage& a);
    Derivation equiv_type(const TypeEnv& env, const Type& t, const Type& s, const Kind& k, const Stage& a);
    Derivation equiv_term(const TypeEnv& env, const Term& m, const Term& n, const Type& t, const Stage& a);

    /// Canonical forms used by equivalence.
    Term canonical(const Term& m) const;
    Type canonical(const Type& t) const;
    Kind canonical(const Kind& k) const;

private:
    class Frame;

    std::pair<Kind, Derivation> kind_direct(const TypeEnv& env, const Type& t, const Stage& a);
    std::pair<Type, Derivation> type_of(const TypeEnv& env, const Term& m, const Stage& a);
    Derivation type_eq_rec(const TypeEnv& env, const Type& t, const Type& s, const Kind& k, const Stage& a);
    Derivation term_chain(const TypeEnv& env, const Term& m, const Term& n, const Type& t, const Stage& a);
    std::vector<std::pair<std::string, Term>> canonical_steps(const Term& m) const;
    [[noreturn]] void fail(TypeError e) const;
    bool is_literal_const(const Term& m) const;

    Signature sig_;
    CheckOptions opts_;
    std::vector<Judgment> frames_;  // judgments under construction, outermost first
};

/// Removes every `%α P` whose body P is closed (no free term variables) and
/// stage-local (each escape or CSP in P pops a stage pushed inside P).
Term percent_erase(const Term& m);
/// One erasure, innermost-leftmost; nullopt when none applies.
std::optional<Term> percent_erase_step(const Term& m);
bool stage_local(const Term& m);

/// The type of `%α M` given M : τ at some stage A: occurrences of variables
/// free in τ are re-quoted so the result kinds at Aα. Throws TypeError when
/// an index term escapes below A around a bound variable.
Type lift_type(const Type& t, const StageVar& alpha);

/// Re-checks every node of a derivation against its rule schema. Returns an
/// empty string on success, otherwise a description of the first bad node.
std::string validate(const Derivation& d, const Signature& sig, const CheckOptions& opts = {});

/// {"rule", "conclusion", "premises": [...]}
std::string derivation_json(const Derivation& d, int indent = -1);

}  // namespace lmd
