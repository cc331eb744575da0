#pragma once

// Abstract syntax of the calculus: stages, terms, types, kinds,
// signatures and stage-annotated type environments.
//
// All nodes are immutable and shared through std::shared_ptr<const ...>;
// functions in this library never mutate a node after construction.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lmd {

using Name = std::string;
using StageVar = std::string;

/// A finite sequence of stage variables. The empty sequence is ε.
class Stage {
public:
    Stage() = default;
    Stage(std::initializer_list<StageVar> vars) : vars_(vars) {}
    explicit Stage(std::vector<StageVar> vars) : vars_(std::move(vars)) {}

    static Stage epsilon() { return Stage{}; }

    bool empty() const { return vars_.empty(); }
    std::size_t size() const { return vars_.size(); }
    const std::vector<StageVar>& vars() const { return vars_; }
    const StageVar& back() const { return vars_.back(); }
    const StageVar& operator[](std::size_t i) const { return vars_[i]; }

    /// A·α
    Stage push(const StageVar& v) const;
    /// A·B
    Stage concat(const Stage& other) const;
    /// A for A·α; precondition: !empty()
    Stage pop() const;
    /// Prefix of the first n variables.
    Stage prefix(std::size_t n) const;
    bool ends_with(const StageVar& v) const { return !vars_.empty() && vars_.back() == v; }
    bool contains(const StageVar& v) const;

    friend bool operator==(const Stage&, const Stage&) = default;

private:
    std::vector<StageVar> vars_;
};

struct TermNode;
struct TypeNode;
struct KindNode;

using Term = std::shared_ptr<const TermNode>;
using Type = std::shared_ptr<const TypeNode>;
using Kind = std::shared_ptr<const KindNode>;

enum class TermTag : std::uint8_t {
    Const,
    Var,
    Lam,
    App,
    Bracket,
    Escape,
    StageLam,
    StageApp,
    Csp,
};

inline constexpr std::size_t kTermTagCount = 9;

/// One node of a term.
///
///   Const   name
///   Var     name
///   Lam     name (binder), annot, body
///   App     fun, arg
///   Bracket name (stage variable), body
///   Escape  name (stage variable), body
///   StageLam name (bound stage variable), body
///   StageApp fun, stage
///   Csp     name (stage variable), body
struct TermNode {
    TermTag tag;
    Name name;
    Type annot;
    Term fun;   // App, StageApp
    Term arg;   // App
    Term body;  // Lam, Bracket, Escape, StageLam, Csp
    Stage stage;  // StageApp
};

enum class TypeTag : std::uint8_t { Const, Pi, App, Code, Forall };

/// Const name | Pi name domain codomain | App head index | Code name body | Forall name body
struct TypeNode {
    TypeTag tag;
    Name name;
    Type domain;  // Pi
    Type body;    // Pi codomain, App head, Code, Forall
    Term index;   // App
};

enum class KindTag : std::uint8_t { Star, Pi };

struct KindNode {
    KindTag tag;
    Name name;
    Type domain;
    Kind body;
};

// --- constructors ---------------------------------------------------------

Term mk_const(Name name);
Term mk_int(std::int64_t value);
Term mk_var(Name name);
Term mk_lam(Name var, Type annot, Term body);
Term mk_app(Term fun, Term arg);
Term mk_apps(Term fun, std::initializer_list<Term> args);
Term mk_bracket(StageVar a, Term body);
Term mk_escape(StageVar a, Term body);
Term mk_stage_lam(StageVar a, Term body);
Term mk_stage_app(Term fun, Stage stage);
Term mk_csp(StageVar a, Term body);

Type mk_tconst(Name name);
Type mk_pi(Name var, Type domain, Type codomain);
Type mk_arrow(Type domain, Type codomain);  // Pi with an unused binder
Type mk_tapp(Type head, Term index);
Type mk_code(StageVar a, Type body);
Type mk_forall(StageVar a, Type body);

Kind mk_star();
Kind mk_kpi(Name var, Type domain, Kind body);

/// ⊳_A M, expanded left to right; ⊳_ε M = M.
Term mk_brackets(const Stage& stage, Term body);
/// ⊲_A M = ⊲_{αn} ... ⊲_{α1} M; ⊲_ε M = M.
Term mk_escapes(const Stage& stage, Term body);
/// %_A M = %_{αn} ... %_{α1} M; %_ε M = M.
Term mk_csps(const Stage& stage, Term body);
/// ▷_A τ, expanded left to right.
Type mk_codes(const Stage& stage, Type body);

/// Integer literals are constants whose name is the decimal numeral.
bool is_int_literal(const Name& name);
std::optional<std::int64_t> int_value(const Term& t);

const char* tag_name(TermTag tag);

// --- signatures and environments -----------------------------------------

struct Declaration {
    enum class Sort : std::uint8_t { TypeConst, Const };
    Sort sort;
    Name name;
    Kind kind;  // TypeConst
    Type type;  // Const
};

class Signature {
public:
    void add_type_const(Name name, Kind kind);
    void add_const(Name name, Type type);
    const std::vector<Declaration>& decls() const { return decls_; }

    const Kind* find_type_const(const Name& name) const;
    const Type* find_const(const Name& name) const;
    bool declares(const Name& name) const;
    /// The first `n` declarations.
    Signature prefix(std::size_t n) const;

private:
    std::vector<Declaration> decls_;
};

struct EnvEntry {
    Name var;
    Type type;
    Stage stage;
};

class TypeEnv {
public:
    TypeEnv() = default;
    TypeEnv(std::initializer_list<EnvEntry> entries) : entries_(entries) {}

    TypeEnv extend(Name var, Type type, Stage stage) const;
    const EnvEntry* find(const Name& var) const;
    bool contains(const Name& var) const { return find(var) != nullptr; }
    const std::vector<EnvEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    TypeEnv prefix(std::size_t n) const;
    /// True when some entry is declared at stage ε.
    bool has_epsilon_entry() const;

private:
    std::vector<EnvEntry> entries_;
};

}  // namespace lmd
