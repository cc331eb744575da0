#include "lmd/typesystem.hpp"
#include "frame.hpp"

namespace lmd {

namespace {

constexpr std::size_t kStackFrames = 5;

NameSet env_names(const TypeEnv& env) {
    NameSet out;
    for (const auto& e : env.entries()) out.insert(e.var);
    return out;
}

NameSet sig_names(const Signature& sig) {
    NameSet out;
    for (const auto& d : sig.decls()) out.insert(d.name);
    return out;
}

bool is_star(const Kind& k) { return k->tag == KindTag::Star; }

}  // namespace

Checker::Checker(Signature sig, CheckOptions opts) : sig_(std::move(sig)), opts_(opts) {}

void Checker::fail(TypeError e) const {
    std::vector<std::string> stack;
    for (std::size_t i = frames_.size(); i-- > 0 && stack.size() < kStackFrames;) stack.push_back(frames_[i].str());
    e.set_stack(std::move(stack));
    throw e;
}

bool Checker::is_literal_const(const Term& m) const {
    return m->tag == TermTag::Const && is_int_literal(m->name) && !sig_.find_const(m->name);
}

// --- well-formedness -------------------------------------------------------

Derivation Checker::wf_signature() {
    Derivation d{"S-Empty", Judgment::sig_ok({}), {}};
    std::vector<Name> names;
    for (std::size_t i = 0; i < sig_.decls().size(); ++i) {
        const auto& decl = sig_.decls()[i];
        for (const auto& n : names)
            if (n == decl.name) fail(TypeError("S-Decl", "duplicate declaration of '" + decl.name + "'"));
        Checker prefix(sig_.prefix(i), opts_);
        Derivation premise;
        std::string rule;
        if (decl.sort == Declaration::Sort::TypeConst) {
            rule = "S-TConst";
            premise = prefix.wf_kind({}, decl.kind, {});
        } else {
            rule = "S-Const";
            auto [k, kd] = prefix.infer_kind({}, decl.type, {});
            if (!is_star(k))
                fail(TypeError("S-Const", "the type of constant '" + decl.name + "' is not a proper type", "*",
                               pretty(k)));
            premise = std::move(kd);
        }
        names.push_back(decl.name);
        d = Derivation{rule, Judgment::sig_ok(names), {std::move(d), std::move(premise)}};
    }
    return d;
}

Derivation Checker::wf_env(const TypeEnv& env) {
    Derivation d{"E-Empty", Judgment::env_ok({}), {}};
    for (std::size_t i = 0; i < env.size(); ++i) {
        const auto& e = env.entries()[i];
        TypeEnv prefix = env.prefix(i);
        if (prefix.contains(e.var)) fail(TypeError("E-Var", "duplicate variable '" + e.var + "' in environment"));
        if (sig_.declares(e.var))
            fail(TypeError("E-Var", "variable '" + e.var + "' clashes with a declared constant"));
        Frame f(*this, Judgment::kinding(prefix, e.type, mk_star(), e.stage));
        auto [k, kd] = infer_kind(prefix, e.type, e.stage);
        if (!is_star(k))
            fail(TypeError("E-Var", "the type of '" + e.var + "' is not a proper type", "*", pretty(k)));
        d = Derivation{"E-Var", Judgment::env_ok(env.prefix(i + 1)), {std::move(d), std::move(kd)}};
    }
    return d;
}

Derivation Checker::wf_kind(const TypeEnv& env, const Kind& k, const Stage& a) {
    Frame f(*this, Judgment::kind_ok(env, k, a));
    if (k->tag == KindTag::Star) return {"W-Star", Judgment::kind_ok(env, k, a), {}};
    auto [dk, dd] = infer_kind(env, k->domain, a);
    if (!is_star(dk)) fail(TypeError("W-Abs", "kind domain is not a proper type", "*", pretty(dk)));
    Name x = k->name;
    Kind body = k->body;
    if (env.contains(x)) {
        NameSet avoid = env_names(env);
        for (const auto& n : free_vars(body)) avoid.insert(n);
        Name y = fresh_name(x, avoid);
        body = rename_var(body, x, y);
        x = y;
    }
    auto bd = wf_kind(env.extend(x, k->domain, a), body, a);
    return {"W-Abs", Judgment::kind_ok(env, k, a), {std::move(dd), std::move(bd)}};
}

// --- kinding ---------------------------------------------------------------

std::pair<Kind, Derivation> Checker::infer_kind(const TypeEnv& env, const Type& t, const Stage& a) {
    try {
        return kind_direct(env, t, a);
    } catch (const TypeError&) {
        // Implicit type-level CSP: a closed proper type lifts to any later stage.
        if (a.empty() || !free_vars(t).empty()) throw;
        for (std::size_t n = a.size(); n-- > 0;) {
            Stage lower = a.prefix(n);
            std::pair<Kind, Derivation> r;
            try {
                r = kind_direct(env, t, lower);
            } catch (const TypeError&) {
                continue;
            }
            if (!is_star(r.first)) continue;
            Derivation d = std::move(r.second);
            for (std::size_t m = n + 1; m <= a.size(); ++m)
                d = Derivation{"K-Csp", Judgment::kinding(env, t, mk_star(), a.prefix(m)), {std::move(d)}};
            return {mk_star(), std::move(d)};
        }
        throw;
    }
}

std::pair<Kind, Derivation> Checker::kind_direct(const TypeEnv& env, const Type& t, const Stage& a) {
    Frame f(*this, Judgment::kinding(env, t, nullptr, a));
    switch (t->tag) {
        case TypeTag::Const: {
            const Kind* k = sig_.find_type_const(t->name);
            if (!k) fail(TypeError("K-TConst", "unknown type constant '" + t->name + "'"));
            return {*k, {"K-TConst", Judgment::kinding(env, t, *k, a), {}}};
        }
        case TypeTag::Pi: {
            auto [dk, dd] = infer_kind(env, t->domain, a);
            if (!is_star(dk)) fail(TypeError("K-Abs", "domain of Π is not a proper type", "*", pretty(dk)));
            Name x = t->name;
            Type body = t->body;
            if (env.contains(x) || sig_.declares(x)) {
                NameSet avoid = env_names(env);
                for (const auto& n : free_vars(body)) avoid.insert(n);
                for (const auto& n : sig_names(sig_)) avoid.insert(n);
                Name y = fresh_name(x, avoid);
                body = rename_var(body, x, y);
                x = y;
            }
            auto [bk, bd] = infer_kind(env.extend(x, t->domain, a), body, a);
            if (!is_star(bk)) fail(TypeError("K-Abs", "codomain of Π is not a proper type", "*", pretty(bk)));
            Kind star = mk_star();
            return {star, {"K-Abs", Judgment::kinding(env, t, star, a), {std::move(dd), std::move(bd)}}};
        }
        case TypeTag::App: {
            auto [hk, hd] = infer_kind(env, t->body, a);
            if (hk->tag != KindTag::Pi)
                fail(TypeError("K-App", "type " + pretty(t->body) + " of kind " + pretty(hk) +
                                            " cannot be applied to a term",
                               "a kind Pi x:T. K", pretty(hk)));
            auto id = check_type(env, t->index, hk->domain, a);
            Kind k = subst(hk->body, hk->name, t->index);
            return {k, {"K-App", Judgment::kinding(env, t, k, a), {std::move(hd), std::move(id)}}};
        }
        case TypeTag::Code: {
            auto [bk, bd] = infer_kind(env, t->body, a.push(t->name));
            if (!is_star(bk)) fail(TypeError("K-TW", "code type over a non-proper type", "*", pretty(bk)));
            Kind star = mk_star();
            return {star, {"K-TW", Judgment::kinding(env, t, star, a), {std::move(bd)}}};
        }
        case TypeTag::Forall: {
            StageVar alpha = t->name;
            Type body = t->body;
            NameSet taken = free_stage_vars(env);
            for (const auto& v : a.vars()) taken.insert(v);
            if (taken.contains(alpha)) {
                for (const auto& v : free_stage_vars(body)) taken.insert(v);
                StageVar beta = fresh_name(alpha, taken);
                body = subst_stage(body, alpha, Stage{beta});
                alpha = beta;
            }
            auto [bk, bd] = infer_kind(env, body, a);
            return {bk, {"K-Gen", Judgment::kinding(env, t, bk, a), {std::move(bd)}}};
        }
    }
    fail(TypeError("K", "malformed type"));
}

// --- typing ----------------------------------------------------------------

std::pair<Type, Derivation> Checker::infer_type(const TypeEnv& env, const Term& m, const Stage& a) {
    return type_of(env, m, a);
}

std::pair<Type, Derivation> Checker::type_of(const TypeEnv& env, const Term& m, const Stage& a) {
    Frame f(*this, Judgment::typing(env, m, nullptr, a));
    switch (m->tag) {
        case TermTag::Const: {
            Type t;
            if (const Type* declared = sig_.find_const(m->name)) {
                t = *declared;
            } else if (is_int_literal(m->name)) {
                if (!sig_.find_type_const("Int"))
                    fail(TypeError("T-Const", "integer literal " + m->name + " used but type Int is not declared"));
                t = mk_tconst("Int");
            } else {
                fail(TypeError("T-Const", "unknown constant '" + m->name + "'"));
            }
            return {t, {"T-Const", Judgment::typing(env, m, t, a), {}}};
        }
        case TermTag::Var: {
            const EnvEntry* e = env.find(m->name);
            if (!e) fail(TypeError("T-Var", "unbound variable '" + m->name + "'"));
            if (e->stage != a)
                fail(TypeError("T-Var",
                               "variable '" + m->name + "' is declared at stage " + pretty(e->stage) +
                                   " but used at stage " + pretty(a),
                               "stage " + pretty(e->stage), "stage " + pretty(a)));
            return {e->type, {"T-Var", Judgment::typing(env, m, e->type, a), {}}};
        }
        case TermTag::Lam: {
            auto [sk, sd] = infer_kind(env, m->annot, a);
            if (!is_star(sk))
                fail(TypeError("T-Abs", "annotation of '" + m->name + "' is not a proper type", "*", pretty(sk)));
            Name x = m->name;
            Term body = m->body;
            if (env.contains(x)) {
                NameSet avoid = env_names(env);
                for (const auto& n : free_vars(body)) avoid.insert(n);
                for (const auto& n : sig_names(sig_)) avoid.insert(n);
                Name y = fresh_name(x, avoid);
                body = rename_var(body, x, y);
                x = y;
            }
            auto [bt, bd] = type_of(env.extend(x, m->annot, a), body, a);
            Type t = mk_pi(x, m->annot, bt);
            return {t, {"T-Abs", Judgment::typing(env, m, t, a), {std::move(sd), std::move(bd)}}};
        }
        case TermTag::App: {
            auto [ft, fd] = type_of(env, m->fun, a);
            if (ft->tag != TypeTag::Pi)
                fail(TypeError("T-App", "applying a term that is not a function", "a Π type", pretty(ft)));
            auto ad = check_type(env, m->arg, ft->domain, a);
            Type t = subst(ft->body, ft->name, m->arg);
            return {t, {"T-App", Judgment::typing(env, m, t, a), {std::move(fd), std::move(ad)}}};
        }
        case TermTag::Bracket: {
            auto [bt, bd] = type_of(env, m->body, a.push(m->name));
            Type t = mk_code(m->name, bt);
            return {t, {"T-TB", Judgment::typing(env, m, t, a), {std::move(bd)}}};
        }
        case TermTag::Escape: {
            if (!a.ends_with(m->name))
                fail(TypeError("T-TBL", "escape <|" + m->name + " used at stage " + pretty(a),
                               "a stage ending in " + m->name, "stage " + pretty(a)));
            auto [bt, bd] = type_of(env, m->body, a.pop());
            if (bt->tag != TypeTag::Code || bt->name != m->name)
                fail(TypeError("T-TBL", "escaped term is not code at stage variable " + m->name,
                               "|>" + m->name + " T", pretty(bt)));
            return {bt->body, {"T-TBL", Judgment::typing(env, m, bt->body, a), {std::move(bd)}}};
        }
        case TermTag::StageLam: {
            StageVar alpha = m->name;
            Term body = m->body;
            NameSet taken = free_stage_vars(env);
            for (const auto& v : a.vars()) taken.insert(v);
            if (taken.contains(alpha)) {
                for (const auto& v : free_stage_vars(body)) taken.insert(v);
                StageVar beta = fresh_name(alpha, taken);
                body = subst_stage(body, alpha, Stage{beta});
                alpha = beta;
            }
            auto [bt, bd] = type_of(env, body, a);
            Type t = mk_forall(alpha, bt);
            return {t, {"T-Gen", Judgment::typing(env, m, t, a), {std::move(bd)}}};
        }
        case TermTag::StageApp: {
            auto [ft, fd] = type_of(env, m->fun, a);
            if (ft->tag != TypeTag::Forall)
                fail(TypeError("T-Ins", "stage application of a term that is not stage-polymorphic",
                               "forall a. T", pretty(ft)));
            Type t = subst_stage(ft->body, ft->name, m->stage);
            return {t, {"T-Ins", Judgment::typing(env, m, t, a), {std::move(fd)}}};
        }
        case TermTag::Csp: {
            if (!a.ends_with(m->name))
                fail(TypeError("T-Csp", "%" + m->name + " used at stage " + pretty(a),
                               "a stage ending in " + m->name, "stage " + pretty(a)));
            auto [bt, bd] = type_of(env, m->body, a.pop());
            Type t;
            try {
                t = lift_type(bt, m->name);
            } catch (TypeError& e) {
                fail(std::move(e));
            }
            return {t, {"T-Csp", Judgment::typing(env, m, t, a), {std::move(bd)}}};
        }
    }
    fail(TypeError("T", "malformed term"));
}

Derivation Checker::check_type(const TypeEnv& env, const Term& m, const Type& t, const Stage& a) {
    auto [actual, d] = type_of(env, m, a);
    if (alpha_eq(actual, t)) return std::move(d);
    Frame f(*this, Judgment::typing(env, m, t, a));
    Derivation eq;
    try {
        eq = equiv_type(env, actual, t, mk_star(), a);
    } catch (const TypeError& e) {
        fail(TypeError("T-Conv", "type mismatch for " + pretty(m) + ": " + e.message(), pretty(t), pretty(actual)));
    }
    return {"T-Conv", Judgment::typing(env, m, t, a), {std::move(d), std::move(eq)}};
}

}  // namespace lmd
