#include "json.hpp"

#include "lmd/typesystem.hpp"

namespace lmd {

namespace {

Judgment base(Judgment::Form f, TypeEnv env, Stage a) {
    Judgment j{};
    j.form = f;
    j.env = std::move(env);
    j.stage = std::move(a);
    return j;
}

template <class P>
std::string show(const P& p) {
    return p ? pretty(p) : std::string("?");
}

std::string env_prefix(const TypeEnv& env) { return (env.empty() ? std::string("∅") : pretty(env)) + " ⊢ "; }

nlohmann::json to_json(const Derivation& d) {
    nlohmann::json j;
    j["rule"] = d.rule;
    j["conclusion"] = d.conclusion.str();
    j["premises"] = nlohmann::json::array();
    for (const auto& p : d.premises) j["premises"].push_back(to_json(p));
    return j;
}

}  // namespace

Judgment Judgment::sig_ok(std::vector<Name> decls) {
    Judgment j = base(Form::SigOk, {}, {});
    j.decls = std::move(decls);
    return j;
}

Judgment Judgment::env_ok(TypeEnv env) { return base(Form::EnvOk, std::move(env), {}); }

Judgment Judgment::kind_ok(TypeEnv env, Kind k, Stage a) {
    Judgment j = base(Form::KindOk, std::move(env), std::move(a));
    j.kind = std::move(k);
    return j;
}

Judgment Judgment::kinding(TypeEnv env, Type t, Kind k, Stage a) {
    Judgment j = base(Form::Kinding, std::move(env), std::move(a));
    j.type = std::move(t);
    j.kind = std::move(k);
    return j;
}

Judgment Judgment::typing(TypeEnv env, Term m, Type t, Stage a) {
    Judgment j = base(Form::Typing, std::move(env), std::move(a));
    j.term = std::move(m);
    j.type = std::move(t);
    return j;
}

Judgment Judgment::kind_eq(TypeEnv env, Kind k, Kind l, Stage a) {
    Judgment j = base(Form::KindEq, std::move(env), std::move(a));
    j.kind = std::move(k);
    j.kind2 = std::move(l);
    return j;
}

Judgment Judgment::type_eq(TypeEnv env, Type t, Type s, Kind k, Stage a) {
    Judgment j = base(Form::TypeEq, std::move(env), std::move(a));
    j.type = std::move(t);
    j.type2 = std::move(s);
    j.kind = std::move(k);
    return j;
}

Judgment Judgment::term_eq(TypeEnv env, Term m, Term n, Type t, Stage a) {
    Judgment j = base(Form::TermEq, std::move(env), std::move(a));
    j.term = std::move(m);
    j.term2 = std::move(n);
    j.type = std::move(t);
    return j;
}

std::string Judgment::str() const {
    const std::string at = " @ " + pretty(stage);
    switch (form) {
        case Form::SigOk: {
            std::string out = "⊢ ";
            if (decls.empty()) return out + "∅";
            for (std::size_t i = 0; i < decls.size(); ++i) out += (i ? ", " : "") + decls[i];
            return out;
        }
        case Form::EnvOk: return "⊢ " + (env.empty() ? std::string("∅") : pretty(env));
        case Form::KindOk: return env_prefix(env) + pretty(kind) + " kind" + at;
        case Form::Kinding: return env_prefix(env) + show(type) + " :: " + show(kind) + at;
        case Form::Typing: return env_prefix(env) + show(term) + " : " + show(type) + at;
        case Form::KindEq: return env_prefix(env) + pretty(kind) + " ≡ " + pretty(kind2) + at;
        case Form::TypeEq:
            return env_prefix(env) + pretty(type) + " ≡ " + pretty(type2) + " :: " + show(kind) + at;
        case Form::TermEq:
            return env_prefix(env) + pretty(term) + " ≡ " + pretty(term2) + " : " + show(type) + at;
    }
    return {};
}

const char* form_name(Judgment::Form f) {
    switch (f) {
        case Judgment::Form::SigOk: return "signature";
        case Judgment::Form::EnvOk: return "environment";
        case Judgment::Form::KindOk: return "kind";
        case Judgment::Form::Kinding: return "kinding";
        case Judgment::Form::Typing: return "typing";
        case Judgment::Form::KindEq: return "kind-equivalence";
        case Judgment::Form::TypeEq: return "type-equivalence";
        case Judgment::Form::TermEq: return "term-equivalence";
    }
    return "?";
}

std::size_t Derivation::size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
}

TypeError::TypeError(std::string rule, std::string message, std::string expected, std::string actual)
    : std::runtime_error(compose(rule, message, expected, actual)),
      rule_(std::move(rule)),
      message_(std::move(message)),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

std::string TypeError::compose(const std::string& rule, const std::string& message, const std::string& expected,
                               const std::string& actual) {
    std::string out = rule + ": " + message;
    if (!expected.empty() || !actual.empty()) out += " (expected " + expected + ", found " + actual + ")";
    return out;
}

Diagnostic TypeError::diagnostic() const {
    Diagnostic d;
    d.severity = Diagnostic::Severity::Error;
    if (span_) d.span = *span_;
    d.message = what();
    d.trace = stack_;
    return d;
}

std::string derivation_json(const Derivation& d, int indent) { return to_json(d).dump(indent); }

}  // namespace lmd
