#pragma once

// Concrete ASCII syntax: lexer, recursive-descent parser and
// minimal-parenthesis pretty printer.
//
//   bracket  |>a M        escape   <|a M        CSP  %a M
//   Λ        /\a. M       stage application  M @[a b]   run  M @[]
//   λ        \x:T. M      Π  Pi x:T. S  (sugar T -> S)  ∀  forall a. T
//   code type |>a T       kinds  *  and  Pi x:T. K  (sugar T -> K)
//   infix + - * =  desugar to add / sub / mul / eq
//
// File directives: `type X :: K;`, `const c : T;`, `def f [: T] = M;`,
// `main [: T] = M;`. Comments run from `--` to the end of the line.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmd/kernel.hpp"
#include "lmd/syntax.hpp"

namespace lmd {

struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning, Note };
    Severity severity = Severity::Error;
    SourceSpan span;
    std::string message;
    std::vector<std::string> trace;  // innermost judgment first

    std::string render(std::string_view path = {}) const;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(Diagnostic d);
    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

/// Free identifiers listed in `constants` parse as Const nodes, everything
/// else that is not bound parses as Var. Numerals are always Const.
Term parse_term(std::string_view text, const NameSet& constants = {});
Type parse_type(std::string_view text, const NameSet& constants = {});
Kind parse_kind(std::string_view text, const NameSet& constants = {});
/// A sequence of `type` / `const` directives.
Signature parse_signature(std::string_view text, const NameSet& constants = {});

struct Directive {
    enum class Sort { TypeDecl, ConstDecl, Def, Main };
    Sort sort;
    Name name;             // empty for Main
    Kind kind;             // TypeDecl
    Type type;             // ConstDecl, or optional ascription on Def/Main
    Term term;             // Def, Main
    SourceSpan span;
};

struct SourceFile {
    std::string path;
    std::string text;
    std::vector<Directive> directives;

    const Directive* main() const;
};

/// Parses a whole `.lmd` file. `constants` seeds the constant set (e.g. the
/// prelude); `const` directives extend it as the file is read.
SourceFile parse_file(std::string text, std::string path = {}, const NameSet& constants = {});

std::string pretty(const Term& t);
std::string pretty(const Type& t);
std::string pretty(const Kind& k);
std::string pretty(const Stage& s);  // "ε" or "a b"
std::string pretty(const Signature& sig);
std::string pretty(const TypeEnv& env);

/// Names of all constants declared in a signature.
NameSet constant_names(const Signature& sig);

}  // namespace lmd
