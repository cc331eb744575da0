#pragma once

// The ♮ translation: erases stages, stage abstraction and type indices,
// mapping λMD into the simply typed λ-calculus. A small STLC checker and
// reducer are included so the translation can serve as an oracle.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lmd/syntax.hpp"

namespace lmd {

struct StlcTypeNode;
struct StlcTermNode;
using StlcType = std::shared_ptr<const StlcTypeNode>;
using StlcTerm = std::shared_ptr<const StlcTermNode>;

struct StlcTypeNode {
    enum class Tag : std::uint8_t { Base, Arrow } tag;
    Name name;  // Base
    StlcType from, to;
};

struct StlcTermNode {
    enum class Tag : std::uint8_t { Var, Lam, App } tag;
    Name name;  // Var, Lam
    StlcType annot;
    StlcTerm fun, arg;  // App
    StlcTerm body;      // Lam
};

StlcType stlc_base(Name name);
StlcType stlc_arrow(StlcType from, StlcType to);
StlcTerm stlc_var(Name name);
StlcTerm stlc_lam(Name var, StlcType annot, StlcTerm body);
StlcTerm stlc_app(StlcTerm fun, StlcTerm arg);

using StlcEnv = std::vector<std::pair<Name, StlcType>>;

class StlcError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

StlcTerm nat_term(const Term& m);
StlcType nat_type(const Type& t);
/// Every kind translates to the single base type `*`.
StlcType nat_kind(const Kind& k);
/// Drops stages; later entries shadow earlier ones.
StlcEnv nat_env(const TypeEnv& env);
/// Term constants of the signature, as STLC variables.
StlcEnv nat_signature(const Signature& sig);

/// Integer literals not bound in `env` have type Int.
StlcType stlc_check(const StlcEnv& env, const StlcTerm& t);
/// One leftmost-outermost β-step.
std::optional<StlcTerm> stlc_step(const StlcTerm& t);
/// Every term reachable by contracting exactly one β-redex.
std::vector<StlcTerm> stlc_contractions(const StlcTerm& t);
StlcTerm stlc_subst(const StlcTerm& t, const Name& x, const StlcTerm& n);

bool stlc_eq(const StlcType& a, const StlcType& b);
bool stlc_alpha_eq(const StlcTerm& a, const StlcTerm& b);
std::string pretty(const StlcType& t);
std::string pretty(const StlcTerm& t);

}  // namespace lmd
