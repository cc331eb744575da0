#include "lmd/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace lmd {

Stage Stage::push(const StageVar& v) const {
    auto vars = vars_;
    vars.push_back(v);
    return Stage(std::move(vars));
}

Stage Stage::concat(const Stage& other) const {
    auto vars = vars_;
    vars.insert(vars.end(), other.vars_.begin(), other.vars_.end());
    return Stage(std::move(vars));
}

Stage Stage::pop() const {
    if (vars_.empty()) throw std::logic_error("Stage::pop on ε");
    return Stage(std::vector<StageVar>(vars_.begin(), vars_.end() - 1));
}

Stage Stage::prefix(std::size_t n) const {
    n = std::min(n, vars_.size());
    return Stage(std::vector<StageVar>(vars_.begin(), vars_.begin() + static_cast<std::ptrdiff_t>(n)));
}

bool Stage::contains(const StageVar& v) const {
    return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
}

namespace {

Term make(TermNode node) { return std::make_shared<const TermNode>(std::move(node)); }

}  // namespace

Term mk_const(Name name) { return make({TermTag::Const, std::move(name), nullptr, nullptr, nullptr, nullptr, {}}); }

Term mk_int(std::int64_t value) { return mk_const(std::to_string(value)); }

Term mk_var(Name name) { return make({TermTag::Var, std::move(name), nullptr, nullptr, nullptr, nullptr, {}}); }

Term mk_lam(Name var, Type annot, Term body) {
    return make({TermTag::Lam, std::move(var), std::move(annot), nullptr, nullptr, std::move(body), {}});
}

Term mk_app(Term fun, Term arg) {
    return make({TermTag::App, {}, nullptr, std::move(fun), std::move(arg), nullptr, {}});
}

Term mk_apps(Term fun, std::initializer_list<Term> args) {
    for (const auto& a : args) fun = mk_app(fun, a);
    return fun;
}

Term mk_bracket(StageVar a, Term body) {
    return make({TermTag::Bracket, std::move(a), nullptr, nullptr, nullptr, std::move(body), {}});
}

Term mk_escape(StageVar a, Term body) {
    return make({TermTag::Escape, std::move(a), nullptr, nullptr, nullptr, std::move(body), {}});
}

Term mk_stage_lam(StageVar a, Term body) {
    return make({TermTag::StageLam, std::move(a), nullptr, nullptr, nullptr, std::move(body), {}});
}

Term mk_stage_app(Term fun, Stage stage) {
    return make({TermTag::StageApp, {}, nullptr, std::move(fun), nullptr, nullptr, std::move(stage)});
}

Term mk_csp(StageVar a, Term body) {
    return make({TermTag::Csp, std::move(a), nullptr, nullptr, nullptr, std::move(body), {}});
}

Type mk_tconst(Name name) {
    return std::make_shared<const TypeNode>(TypeNode{TypeTag::Const, std::move(name), nullptr, nullptr, nullptr});
}

Type mk_pi(Name var, Type domain, Type codomain) {
    return std::make_shared<const TypeNode>(
        TypeNode{TypeTag::Pi, std::move(var), std::move(domain), std::move(codomain), nullptr});
}

Type mk_arrow(Type domain, Type codomain) { return mk_pi("_", std::move(domain), std::move(codomain)); }

Type mk_tapp(Type head, Term index) {
    return std::make_shared<const TypeNode>(TypeNode{TypeTag::App, {}, nullptr, std::move(head), std::move(index)});
}

Type mk_code(StageVar a, Type body) {
    return std::make_shared<const TypeNode>(TypeNode{TypeTag::Code, std::move(a), nullptr, std::move(body), nullptr});
}

Type mk_forall(StageVar a, Type body) {
    return std::make_shared<const TypeNode>(TypeNode{TypeTag::Forall, std::move(a), nullptr, std::move(body), nullptr});
}

Kind mk_star() {
    static const Kind star = std::make_shared<const KindNode>(KindNode{KindTag::Star, {}, nullptr, nullptr});
    return star;
}

Kind mk_kpi(Name var, Type domain, Kind body) {
    return std::make_shared<const KindNode>(KindNode{KindTag::Pi, std::move(var), std::move(domain), std::move(body)});
}

Term mk_brackets(const Stage& stage, Term body) {
    for (auto it = stage.vars().rbegin(); it != stage.vars().rend(); ++it) body = mk_bracket(*it, body);
    return body;
}

Term mk_escapes(const Stage& stage, Term body) {
    for (const auto& v : stage.vars()) body = mk_escape(v, body);
    return body;
}

Term mk_csps(const Stage& stage, Term body) {
    for (const auto& v : stage.vars()) body = mk_csp(v, body);
    return body;
}

Type mk_codes(const Stage& stage, Type body) {
    for (auto it = stage.vars().rbegin(); it != stage.vars().rend(); ++it) body = mk_code(*it, body);
    return body;
}

bool is_int_literal(const Name& name) {
    if (name.empty()) return false;
    std::size_t i = name[0] == '-' ? 1 : 0;
    if (i == name.size()) return false;
    for (; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
    return true;
}

std::optional<std::int64_t> int_value(const Term& t) {
    if (t->tag != TermTag::Const || !is_int_literal(t->name)) return std::nullopt;
    try {
        return std::stoll(t->name);
    } catch (const std::out_of_range&) {
        return std::nullopt;
    }
}

const char* tag_name(TermTag tag) {
    switch (tag) {
        case TermTag::Const: return "Const";
        case TermTag::Var: return "Var";
        case TermTag::Lam: return "Lam";
        case TermTag::App: return "App";
        case TermTag::Bracket: return "Bracket";
        case TermTag::Escape: return "Escape";
        case TermTag::StageLam: return "StageLam";
        case TermTag::StageApp: return "StageApp";
        case TermTag::Csp: return "Csp";
    }
    return "?";
}

void Signature::add_type_const(Name name, Kind kind) {
    decls_.push_back({Declaration::Sort::TypeConst, std::move(name), std::move(kind), nullptr});
}

void Signature::add_const(Name name, Type type) {
    decls_.push_back({Declaration::Sort::Const, std::move(name), nullptr, std::move(type)});
}

const Kind* Signature::find_type_const(const Name& name) const {
    for (const auto& d : decls_)
        if (d.sort == Declaration::Sort::TypeConst && d.name == name) return &d.kind;
    return nullptr;
}

const Type* Signature::find_const(const Name& name) const {
    for (const auto& d : decls_)
        if (d.sort == Declaration::Sort::Const && d.name == name) return &d.type;
    return nullptr;
}

bool Signature::declares(const Name& name) const {
    return std::any_of(decls_.begin(), decls_.end(), [&](const Declaration& d) { return d.name == name; });
}

Signature Signature::prefix(std::size_t n) const {
    Signature s;
    s.decls_.assign(decls_.begin(), decls_.begin() + static_cast<std::ptrdiff_t>(std::min(n, decls_.size())));
    return s;
}

TypeEnv TypeEnv::extend(Name var, Type type, Stage stage) const {
    TypeEnv env = *this;
    env.entries_.push_back({std::move(var), std::move(type), std::move(stage)});
    return env;
}

const EnvEntry* TypeEnv::find(const Name& var) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->var == var) return &*it;
    return nullptr;
}

TypeEnv TypeEnv::prefix(std::size_t n) const {
    TypeEnv env;
    env.entries_.assign(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(std::min(n, entries_.size())));
    return env;
}

bool TypeEnv::has_epsilon_entry() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const EnvEntry& e) { return e.stage.empty(); });
}

}  // namespace lmd
