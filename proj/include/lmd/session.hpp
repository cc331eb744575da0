#pragma once

// A loaded program: signature, checked definitions and main, plus the flags
// that drive the command-line tool and the REPL.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmd/natural.hpp"
#include "lmd/reduction.hpp"
#include "lmd/surface.hpp"
#include "lmd/syntax.hpp"
#include "lmd/typesystem.hpp"

namespace lmd {

struct SessionOptions {
    bool prelude = false;  // Int/Bool/Vector signature and δ-rules
    std::size_t max_steps = 100000;
    std::vector<std::string> signature_files;
};

/// Definitions are closed, checked at ε, and stored with every earlier
/// definition already inlined.
struct Definition {
    Name name;
    Term term;
    Type type;
    Derivation derivation;
};

/// A user-facing failure other than a parse or type error (unreadable file,
/// missing main, unknown definition).
class SessionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Session {
public:
    explicit Session(SessionOptions opts = {});

    const SessionOptions& options() const { return opts_; }
    const Signature& signature() const { return sig_; }
    ReductionOptions reduction_options() const { return {.delta = opts_.prelude}; }
    CheckOptions check_options() const { return {.delta = opts_.prelude, .max_steps = opts_.max_steps}; }

    /// Reads and loads a `.lmd` file. Declarations extend the signature
    /// (validated once, after the last declaration); defs and main are
    /// checked in order. Returns the checked defs, main last.
    std::vector<Definition> load_file(const std::string& path);
    std::vector<Definition> load_source(std::string text, const std::string& path = {});

    Term parse(std::string_view text) const;
    Type parse_type_text(std::string_view text) const;

    /// Checks a closed term at ε (against `ascription` when given) after
    /// inlining the current definitions, and records it under `name`.
    const Definition& define(const Name& name, const Term& term, const std::optional<Type>& ascription = {});
    /// Same check without recording anything.
    Definition check(const Term& term, const std::optional<Type>& ascription = {});

    const std::map<Name, Definition>& definitions() const { return defs_; }
    const Definition* main() const { return main_ ? &*main_ : nullptr; }
    const Definition& require_main() const;

    EvalResult eval(const Term& checked) const;
    NormalizeResult normalize(const Term& checked, Strategy strategy) const;
    /// The STLC image of a checked definition and its STLC type.
    std::pair<StlcTerm, StlcType> natural(const Definition& d) const;

private:
    Term inline_defs(const Term& t) const;
    Type inline_defs(const Type& t) const;
    void add_signature_text(std::string_view text);

    SessionOptions opts_;
    Signature sig_;
    std::map<Name, Definition> defs_;
    std::vector<Name> order_;
    std::optional<Definition> main_;
};

/// The prelude text: $LMD_PRELUDE_PATH when set, else the bundled one.
std::string prelude_text();

std::string read_file(const std::string& path);

}  // namespace lmd
