#include <algorithm>
#include <map>
#include <vector>

#include "lmd/kernel.hpp"

namespace lmd {

// --- free variables -------------------------------------------------------

namespace {

void fv(const Term& t, NameSet& out);
void fv(const Type& t, NameSet& out);

void fv_under(const Name& binder, const Term& body, NameSet& out) {
    NameSet inner;
    fv(body, inner);
    inner.erase(binder);
    out.insert(inner.begin(), inner.end());
}

void fv_under(const Name& binder, const Type& body, NameSet& out) {
    NameSet inner;
    fv(body, inner);
    inner.erase(binder);
    out.insert(inner.begin(), inner.end());
}

void fv(const Term& t, NameSet& out) {
    switch (t->tag) {
        case TermTag::Const: return;
        case TermTag::Var: out.insert(t->name); return;
        case TermTag::Lam:
            fv(t->annot, out);
            fv_under(t->name, t->body, out);
            return;
        case TermTag::App:
            fv(t->fun, out);
            fv(t->arg, out);
            return;
        case TermTag::StageApp: fv(t->fun, out); return;
        case TermTag::Bracket:
        case TermTag::Escape:
        case TermTag::StageLam:
        case TermTag::Csp: fv(t->body, out); return;
    }
}

void fv(const Type& t, NameSet& out) {
    switch (t->tag) {
        case TypeTag::Const: return;
        case TypeTag::Pi:
            fv(t->domain, out);
            fv_under(t->name, t->body, out);
            return;
        case TypeTag::App:
            fv(t->body, out);
            fv(t->index, out);
            return;
        case TypeTag::Code:
        case TypeTag::Forall: fv(t->body, out); return;
    }
}

void ftv(const Term& t, NameSet& out);
void ftv(const Type& t, NameSet& out);

template <class Node>
void ftv_under(const StageVar& binder, const Node& body, NameSet& out) {
    NameSet inner;
    ftv(body, inner);
    inner.erase(binder);
    out.insert(inner.begin(), inner.end());
}

void ftv(const Term& t, NameSet& out) {
    switch (t->tag) {
        case TermTag::Const:
        case TermTag::Var: return;
        case TermTag::Lam:
            ftv(t->annot, out);
            ftv(t->body, out);
            return;
        case TermTag::App:
            ftv(t->fun, out);
            ftv(t->arg, out);
            return;
        case TermTag::StageApp:
            ftv(t->fun, out);
            out.insert(t->stage.vars().begin(), t->stage.vars().end());
            return;
        case TermTag::Bracket:
        case TermTag::Escape:
        case TermTag::Csp:
            out.insert(t->name);
            ftv(t->body, out);
            return;
        case TermTag::StageLam: ftv_under(t->name, t->body, out); return;
    }
}

void ftv(const Type& t, NameSet& out) {
    switch (t->tag) {
        case TypeTag::Const: return;
        case TypeTag::Pi:
            ftv(t->domain, out);
            ftv(t->body, out);
            return;
        case TypeTag::App:
            ftv(t->body, out);
            ftv(t->index, out);
            return;
        case TypeTag::Code:
            out.insert(t->name);
            ftv(t->body, out);
            return;
        case TypeTag::Forall: ftv_under(t->name, t->body, out); return;
    }
}

}  // namespace

NameSet free_vars(const Term& t) {
    NameSet s;
    fv(t, s);
    return s;
}

NameSet free_vars(const Type& t) {
    NameSet s;
    fv(t, s);
    return s;
}

NameSet free_vars(const Kind& k) {
    NameSet s;
    if (k->tag == KindTag::Pi) {
        fv(k->domain, s);
        auto inner = free_vars(k->body);
        inner.erase(k->name);
        s.insert(inner.begin(), inner.end());
    }
    return s;
}

NameSet free_stage_vars(const Term& t) {
    NameSet s;
    ftv(t, s);
    return s;
}

NameSet free_stage_vars(const Type& t) {
    NameSet s;
    ftv(t, s);
    return s;
}

NameSet free_stage_vars(const Kind& k) {
    NameSet s;
    if (k->tag == KindTag::Pi) {
        ftv(k->domain, s);
        auto inner = free_stage_vars(k->body);
        s.insert(inner.begin(), inner.end());
    }
    return s;
}

NameSet free_stage_vars(const Stage& st) { return NameSet(st.vars().begin(), st.vars().end()); }

NameSet free_stage_vars(const TypeEnv& env) {
    NameSet s;
    for (const auto& e : env.entries()) {
        ftv(e.type, s);
        s.insert(e.stage.vars().begin(), e.stage.vars().end());
    }
    return s;
}

void collect_names(const Term& t, NameSet& out) {
    if (!t->name.empty()) out.insert(t->name);
    for (const auto& v : t->stage.vars()) out.insert(v);
    if (t->annot) collect_names(t->annot, out);
    if (t->fun) collect_names(t->fun, out);
    if (t->arg) collect_names(t->arg, out);
    if (t->body) collect_names(t->body, out);
}

void collect_names(const Type& t, NameSet& out) {
    if (!t->name.empty()) out.insert(t->name);
    if (t->domain) collect_names(t->domain, out);
    if (t->body) collect_names(t->body, out);
    if (t->index) collect_names(t->index, out);
}

Name fresh_name(const Name& base, const NameSet& avoid) {
    if (!avoid.contains(base)) return base;
    // Strip an existing _N suffix so repeated freshening stays short.
    Name stem = base;
    auto us = stem.rfind('_');
    if (us != Name::npos && us + 1 < stem.size() &&
        std::all_of(stem.begin() + static_cast<std::ptrdiff_t>(us) + 1, stem.end(),
                    [](char c) { return c >= '0' && c <= '9'; }))
        stem.resize(us);
    if (stem.empty()) stem = "v";
    for (std::size_t k = 1;; ++k) {
        Name candidate = stem + "_" + std::to_string(k);
        if (!avoid.contains(candidate)) return candidate;
    }
}

// --- term substitution ----------------------------------------------------

namespace {

struct TermSubst {
    const Name& x;
    const Term& n;
    NameSet fv_n;
    NameSet ftv_n;

    Term go(const Term& t) const {
        switch (t->tag) {
            case TermTag::Const: return t;
            case TermTag::Var: return t->name == x ? n : t;
            case TermTag::Lam: {
                auto annot = go(t->annot);
                if (t->name == x) return mk_lam(t->name, annot, t->body);
                auto [binder, body] = under_var_binder(t->name, t->body);
                return mk_lam(binder, annot, go(body));
            }
            case TermTag::App: return mk_app(go(t->fun), go(t->arg));
            case TermTag::StageApp: return mk_stage_app(go(t->fun), t->stage);
            case TermTag::Bracket: return mk_bracket(t->name, go(t->body));
            case TermTag::Escape: return mk_escape(t->name, go(t->body));
            case TermTag::Csp: return mk_csp(t->name, go(t->body));
            case TermTag::StageLam: {
                auto [binder, body] = under_stage_binder(t->name, t->body);
                return mk_stage_lam(binder, go(body));
            }
        }
        return t;
    }

    Type go(const Type& t) const {
        switch (t->tag) {
            case TypeTag::Const: return t;
            case TypeTag::Pi: {
                auto dom = go(t->domain);
                if (t->name == x) return mk_pi(t->name, dom, t->body);
                auto [binder, body] = under_var_binder(t->name, t->body);
                return mk_pi(binder, dom, go(body));
            }
            case TypeTag::App: return mk_tapp(go(t->body), go(t->index));
            case TypeTag::Code: return mk_code(t->name, go(t->body));
            case TypeTag::Forall: {
                auto [binder, body] = under_stage_binder(t->name, t->body);
                return mk_forall(binder, go(body));
            }
        }
        return t;
    }

    Kind go(const Kind& k) const {
        if (k->tag == KindTag::Star) return k;
        auto dom = go(k->domain);
        if (k->name == x) return mk_kpi(k->name, dom, k->body);
        if (fv_n.contains(k->name) && free_vars(k->body).contains(x)) {
            NameSet avoid = fv_n;
            auto inner = free_vars(k->body);
            avoid.insert(inner.begin(), inner.end());
            avoid.insert(x);
            auto fresh = fresh_name(k->name, avoid);
            return mk_kpi(fresh, dom, go(rename_var(k->body, k->name, fresh)));
        }
        return mk_kpi(k->name, dom, go(k->body));
    }

    template <class Node>
    std::pair<Name, Node> under_var_binder(const Name& y, const Node& body) const {
        if (!fv_n.contains(y)) return {y, body};
        auto inner = free_vars(body);
        if (!inner.contains(x)) return {y, body};
        NameSet avoid = fv_n;
        avoid.insert(inner.begin(), inner.end());
        avoid.insert(x);
        auto fresh = fresh_name(y, avoid);
        return {fresh, rename_var(body, y, fresh)};
    }

    template <class Node>
    std::pair<StageVar, Node> under_stage_binder(const StageVar& a, const Node& body) const {
        if (!ftv_n.contains(a)) return {a, body};
        if (!free_vars(body).contains(x)) return {a, body};
        NameSet avoid = ftv_n;
        auto inner = free_stage_vars(body);
        avoid.insert(inner.begin(), inner.end());
        auto fresh = fresh_name(a, avoid);
        return {fresh, subst_stage(body, a, Stage{fresh})};
    }
};

}  // namespace

Term subst(const Term& t, const Name& x, const Term& n) {
    TermSubst s{x, n, free_vars(n), free_stage_vars(n)};
    return s.go(t);
}

Type subst(const Type& t, const Name& x, const Term& n) {
    TermSubst s{x, n, free_vars(n), free_stage_vars(n)};
    return s.go(t);
}

Kind subst(const Kind& k, const Name& x, const Term& n) {
    TermSubst s{x, n, free_vars(n), free_stage_vars(n)};
    return s.go(k);
}

TypeEnv subst(const TypeEnv& env, const Name& x, const Term& n) {
    TypeEnv out;
    for (const auto& e : env.entries()) {
        if (e.var == x) continue;
        out = out.extend(e.var, subst(e.type, x, n), e.stage);
    }
    return out;
}

Term rename_var(const Term& body, const Name& from, const Name& to) { return subst(body, from, mk_var(to)); }
Type rename_var(const Type& body, const Name& from, const Name& to) { return subst(body, from, mk_var(to)); }
Kind rename_var(const Kind& body, const Name& from, const Name& to) { return subst(body, from, mk_var(to)); }

// --- stage substitution ---------------------------------------------------

namespace {

struct StageSubst {
    const StageVar& a;
    const Stage& s;
    NameSet vars_s;

    Term go(const Term& t) const {
        switch (t->tag) {
            case TermTag::Const:
            case TermTag::Var: return t;
            case TermTag::Lam: return mk_lam(t->name, go(t->annot), go(t->body));
            case TermTag::App: return mk_app(go(t->fun), go(t->arg));
            case TermTag::StageApp: return mk_stage_app(go(t->fun), subst_stage(t->stage, a, s));
            case TermTag::Bracket: {
                auto body = go(t->body);
                return t->name == a ? mk_brackets(s, body) : mk_bracket(t->name, body);
            }
            case TermTag::Escape: {
                auto body = go(t->body);
                return t->name == a ? mk_escapes(s, body) : mk_escape(t->name, body);
            }
            case TermTag::Csp: {
                auto body = go(t->body);
                return t->name == a ? mk_csps(s, body) : mk_csp(t->name, body);
            }
            case TermTag::StageLam: {
                if (t->name == a) return t;
                auto [binder, body] = under_binder(t->name, t->body);
                return mk_stage_lam(binder, go(body));
            }
        }
        return t;
    }

    Type go(const Type& t) const {
        switch (t->tag) {
            case TypeTag::Const: return t;
            case TypeTag::Pi: return mk_pi(t->name, go(t->domain), go(t->body));
            case TypeTag::App: return mk_tapp(go(t->body), go(t->index));
            case TypeTag::Code: {
                auto body = go(t->body);
                return t->name == a ? mk_codes(s, body) : mk_code(t->name, body);
            }
            case TypeTag::Forall: {
                if (t->name == a) return t;
                auto [binder, body] = under_binder(t->name, t->body);
                return mk_forall(binder, go(body));
            }
        }
        return t;
    }

    Kind go(const Kind& k) const {
        if (k->tag == KindTag::Star) return k;
        return mk_kpi(k->name, go(k->domain), go(k->body));
    }

    template <class Node>
    std::pair<StageVar, Node> under_binder(const StageVar& b, const Node& body) const {
        if (!vars_s.contains(b)) return {b, body};
        auto inner = free_stage_vars(body);
        if (!inner.contains(a)) return {b, body};
        NameSet avoid = vars_s;
        avoid.insert(inner.begin(), inner.end());
        avoid.insert(a);
        auto fresh = fresh_name(b, avoid);
        return {fresh, subst_stage(body, b, Stage{fresh})};
    }
};

}  // namespace

Term subst_stage(const Term& t, const StageVar& a, const Stage& s) {
    StageSubst sub{a, s, free_stage_vars(s)};
    return sub.go(t);
}

Type subst_stage(const Type& t, const StageVar& a, const Stage& s) {
    StageSubst sub{a, s, free_stage_vars(s)};
    return sub.go(t);
}

Kind subst_stage(const Kind& k, const StageVar& a, const Stage& s) {
    StageSubst sub{a, s, free_stage_vars(s)};
    return sub.go(k);
}

Stage subst_stage(const Stage& b, const StageVar& a, const Stage& s) {
    std::vector<StageVar> out;
    for (const auto& v : b.vars()) {
        if (v == a)
            out.insert(out.end(), s.vars().begin(), s.vars().end());
        else
            out.push_back(v);
    }
    return Stage(std::move(out));
}

TypeEnv subst_stage(const TypeEnv& env, const StageVar& a, const Stage& s) {
    TypeEnv out;
    for (const auto& e : env.entries()) out = out.extend(e.var, subst_stage(e.type, a, s), subst_stage(e.stage, a, s));
    return out;
}

// --- α-equivalence --------------------------------------------------------

namespace {

struct AlphaCtx {
    std::vector<std::pair<Name, Name>> vars;
    std::vector<std::pair<StageVar, StageVar>> stages;

    static bool same(const std::vector<std::pair<Name, Name>>& scope, const Name& l, const Name& r) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
            bool hit_l = it->first == l;
            bool hit_r = it->second == r;
            if (hit_l || hit_r) return hit_l && hit_r;
        }
        return l == r;
    }

    bool same_stage(const Stage& l, const Stage& r) const {
        if (l.size() != r.size()) return false;
        for (std::size_t i = 0; i < l.size(); ++i)
            if (!same(stages, l[i], r[i])) return false;
        return true;
    }

    bool eq(const Term& a, const Term& b) {
        if (a == b && vars.empty() && stages.empty()) return true;
        if (a->tag != b->tag) return false;
        switch (a->tag) {
            case TermTag::Const: return a->name == b->name;
            case TermTag::Var: return same(vars, a->name, b->name);
            case TermTag::Lam: {
                if (!eq(a->annot, b->annot)) return false;
                vars.emplace_back(a->name, b->name);
                bool r = eq(a->body, b->body);
                vars.pop_back();
                return r;
            }
            case TermTag::App: return eq(a->fun, b->fun) && eq(a->arg, b->arg);
            case TermTag::StageApp: return same_stage(a->stage, b->stage) && eq(a->fun, b->fun);
            case TermTag::Bracket:
            case TermTag::Escape:
            case TermTag::Csp: return same(stages, a->name, b->name) && eq(a->body, b->body);
            case TermTag::StageLam: {
                stages.emplace_back(a->name, b->name);
                bool r = eq(a->body, b->body);
                stages.pop_back();
                return r;
            }
        }
        return false;
    }

    bool eq(const Type& a, const Type& b) {
        if (a == b && vars.empty() && stages.empty()) return true;
        if (a->tag != b->tag) return false;
        switch (a->tag) {
            case TypeTag::Const: return a->name == b->name;
            case TypeTag::Pi: {
                if (!eq(a->domain, b->domain)) return false;
                vars.emplace_back(a->name, b->name);
                bool r = eq(a->body, b->body);
                vars.pop_back();
                return r;
            }
            case TypeTag::App: return eq(a->body, b->body) && eq(a->index, b->index);
            case TypeTag::Code: return same(stages, a->name, b->name) && eq(a->body, b->body);
            case TypeTag::Forall: {
                stages.emplace_back(a->name, b->name);
                bool r = eq(a->body, b->body);
                stages.pop_back();
                return r;
            }
        }
        return false;
    }

    bool eq(const Kind& a, const Kind& b) {
        if (a->tag != b->tag) return false;
        if (a->tag == KindTag::Star) return true;
        if (!eq(a->domain, b->domain)) return false;
        vars.emplace_back(a->name, b->name);
        bool r = eq(a->body, b->body);
        vars.pop_back();
        return r;
    }
};

}  // namespace

bool alpha_eq(const Term& a, const Term& b) { return AlphaCtx{}.eq(a, b); }
bool alpha_eq(const Type& a, const Type& b) { return AlphaCtx{}.eq(a, b); }
bool alpha_eq(const Kind& a, const Kind& b) { return AlphaCtx{}.eq(a, b); }

// --- measures -------------------------------------------------------------

std::size_t term_size(const Term& t) {
    std::size_t n = 1;
    if (t->fun) n += term_size(t->fun);
    if (t->arg) n += term_size(t->arg);
    if (t->body) n += term_size(t->body);
    return n;
}

std::size_t stage_lam_count(const Term& t) {
    std::size_t n = t->tag == TermTag::StageLam ? 1 : 0;
    if (t->fun) n += stage_lam_count(t->fun);
    if (t->arg) n += stage_lam_count(t->arg);
    if (t->body) n += stage_lam_count(t->body);
    return n;
}

// --- renaming apart -------------------------------------------------------

namespace {

struct Renamer {
    NameSet used_vars;
    NameSet used_stages;
    std::vector<std::pair<Name, Name>> var_scope;
    std::vector<std::pair<StageVar, StageVar>> stage_scope;

    static const Name& lookup(const std::vector<std::pair<Name, Name>>& scope, const Name& n) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == n) return it->second;
        return n;
    }

    Stage map_stage(const Stage& s) const {
        std::vector<StageVar> out;
        for (const auto& v : s.vars()) out.push_back(lookup(stage_scope, v));
        return Stage(std::move(out));
    }

    Name bind_var(const Name& n) {
        auto fresh = fresh_name(n, used_vars);
        used_vars.insert(fresh);
        var_scope.emplace_back(n, fresh);
        return fresh;
    }

    StageVar bind_stage(const StageVar& a) {
        auto fresh = fresh_name(a, used_stages);
        used_stages.insert(fresh);
        stage_scope.emplace_back(a, fresh);
        return fresh;
    }

    Term go(const Term& t) {
        switch (t->tag) {
            case TermTag::Const: return t;
            case TermTag::Var: return mk_var(lookup(var_scope, t->name));
            case TermTag::Lam: {
                auto annot = go(t->annot);
                auto b = bind_var(t->name);
                auto body = go(t->body);
                var_scope.pop_back();
                return mk_lam(b, annot, body);
            }
            case TermTag::App: return mk_app(go(t->fun), go(t->arg));
            case TermTag::StageApp: return mk_stage_app(go(t->fun), map_stage(t->stage));
            case TermTag::Bracket: return mk_bracket(lookup(stage_scope, t->name), go(t->body));
            case TermTag::Escape: return mk_escape(lookup(stage_scope, t->name), go(t->body));
            case TermTag::Csp: return mk_csp(lookup(stage_scope, t->name), go(t->body));
            case TermTag::StageLam: {
                auto b = bind_stage(t->name);
                auto body = go(t->body);
                stage_scope.pop_back();
                return mk_stage_lam(b, body);
            }
        }
        return t;
    }

    Type go(const Type& t) {
        switch (t->tag) {
            case TypeTag::Const: return t;
            case TypeTag::Pi: {
                auto dom = go(t->domain);
                auto b = bind_var(t->name);
                auto body = go(t->body);
                var_scope.pop_back();
                return mk_pi(b, dom, body);
            }
            case TypeTag::App: return mk_tapp(go(t->body), go(t->index));
            case TypeTag::Code: return mk_code(lookup(stage_scope, t->name), go(t->body));
            case TypeTag::Forall: {
                auto b = bind_stage(t->name);
                auto body = go(t->body);
                stage_scope.pop_back();
                return mk_forall(b, body);
            }
        }
        return t;
    }
};

}  // namespace

Term rename_apart(const Term& t) {
    Renamer r;
    r.used_vars = free_vars(t);
    r.used_stages = free_stage_vars(t);
    return r.go(t);
}

}  // namespace lmd
