#include "lmd/natural.hpp"

#include <functional>
#include <map>

#include "lmd/kernel.hpp"

namespace lmd {

namespace {

using TTag = StlcTermNode::Tag;
using YTag = StlcTypeNode::Tag;

void free_vars(const StlcTerm& t, NameSet& bound, NameSet& out) {
    switch (t->tag) {
        case TTag::Var:
            if (!bound.contains(t->name)) out.insert(t->name);
            return;
        case TTag::Lam: {
            bool had = bound.contains(t->name);
            bound.insert(t->name);
            free_vars(t->body, bound, out);
            if (!had) bound.erase(t->name);
            return;
        }
        case TTag::App:
            free_vars(t->fun, bound, out);
            free_vars(t->arg, bound, out);
            return;
    }
}

NameSet free_vars(const StlcTerm& t) {
    NameSet bound, out;
    free_vars(t, bound, out);
    return out;
}

void all_names(const StlcTerm& t, NameSet& out) {
    out.insert(t->name);
    if (t->fun) all_names(t->fun, out);
    if (t->arg) all_names(t->arg, out);
    if (t->body) all_names(t->body, out);
}

const StlcType* lookup(const StlcEnv& env, const Name& x) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == x) return &it->second;
    return nullptr;
}

bool alpha(const StlcTerm& a, const StlcTerm& b, std::map<Name, Name>& l, std::map<Name, Name>& r) {
    if (a->tag != b->tag) return false;
    switch (a->tag) {
        case TTag::Var: {
            auto la = l.find(a->name);
            auto rb = r.find(b->name);
            if (la == l.end() && rb == r.end()) return a->name == b->name;
            return la != l.end() && rb != r.end() && la->second == b->name && rb->second == a->name;
        }
        case TTag::App: return alpha(a->fun, b->fun, l, r) && alpha(a->arg, b->arg, l, r);
        case TTag::Lam: {
            if (!stlc_eq(a->annot, b->annot)) return false;
            auto sl = l, sr = r;
            l[a->name] = b->name;
            r[b->name] = a->name;
            bool ok = alpha(a->body, b->body, l, r);
            l = std::move(sl);
            r = std::move(sr);
            return ok;
        }
    }
    return false;
}

void contractions(const StlcTerm& t, const std::function<StlcTerm(StlcTerm)>& wrap, std::vector<StlcTerm>& out) {
    switch (t->tag) {
        case TTag::Var: return;
        case TTag::Lam:
            contractions(t->body, [&](StlcTerm b) { return wrap(stlc_lam(t->name, t->annot, std::move(b))); }, out);
            return;
        case TTag::App:
            if (t->fun->tag == TTag::Lam) out.push_back(wrap(stlc_subst(t->fun->body, t->fun->name, t->arg)));
            contractions(t->fun, [&](StlcTerm f) { return wrap(stlc_app(std::move(f), t->arg)); }, out);
            contractions(t->arg, [&](StlcTerm a) { return wrap(stlc_app(t->fun, std::move(a))); }, out);
            return;
    }
}

}  // namespace

StlcType stlc_base(Name name) { return std::make_shared<StlcTypeNode>(StlcTypeNode{YTag::Base, std::move(name), {}, {}}); }

StlcType stlc_arrow(StlcType from, StlcType to) {
    return std::make_shared<StlcTypeNode>(StlcTypeNode{YTag::Arrow, {}, std::move(from), std::move(to)});
}

StlcTerm stlc_var(Name name) {
    return std::make_shared<StlcTermNode>(StlcTermNode{TTag::Var, std::move(name), {}, {}, {}, {}});
}

StlcTerm stlc_lam(Name var, StlcType annot, StlcTerm body) {
    return std::make_shared<StlcTermNode>(
        StlcTermNode{TTag::Lam, std::move(var), std::move(annot), {}, {}, std::move(body)});
}

StlcTerm stlc_app(StlcTerm fun, StlcTerm arg) {
    return std::make_shared<StlcTermNode>(StlcTermNode{TTag::App, {}, {}, std::move(fun), std::move(arg), {}});
}

// --- translation ----------------------------------------------------------

StlcTerm nat_term(const Term& m) {
    switch (m->tag) {
        case TermTag::Const:
        case TermTag::Var: return stlc_var(m->name);
        case TermTag::Lam: return stlc_lam(m->name, nat_type(m->annot), nat_term(m->body));
        case TermTag::App: return stlc_app(nat_term(m->fun), nat_term(m->arg));
        case TermTag::Bracket:
        case TermTag::Escape:
        case TermTag::StageLam:
        case TermTag::Csp: return nat_term(m->body);
        case TermTag::StageApp: return nat_term(m->fun);
    }
    throw std::logic_error("nat_term: bad tag");
}

StlcType nat_type(const Type& t) {
    switch (t->tag) {
        case TypeTag::Const: return stlc_base(t->name);
        case TypeTag::Pi: return stlc_arrow(nat_type(t->domain), nat_type(t->body));
        case TypeTag::App:
        case TypeTag::Code:
        case TypeTag::Forall: return nat_type(t->body);
    }
    throw std::logic_error("nat_type: bad tag");
}

StlcType nat_kind(const Kind&) { return stlc_base("*"); }

StlcEnv nat_env(const TypeEnv& env) {
    StlcEnv out;
    for (const auto& e : env.entries()) out.emplace_back(e.var, nat_type(e.type));
    return out;
}

StlcEnv nat_signature(const Signature& sig) {
    StlcEnv out;
    for (const auto& d : sig.decls())
        if (d.sort == Declaration::Sort::Const) out.emplace_back(d.name, nat_type(d.type));
    return out;
}

// --- STLC -----------------------------------------------------------------

StlcType stlc_check(const StlcEnv& env, const StlcTerm& t) {
    switch (t->tag) {
        case TTag::Var: {
            if (const StlcType* ty = lookup(env, t->name)) return *ty;
            if (is_int_literal(t->name)) return stlc_base("Int");
            throw StlcError("unbound variable " + t->name);
        }
        case TTag::Lam: {
            StlcEnv inner = env;
            inner.emplace_back(t->name, t->annot);
            return stlc_arrow(t->annot, stlc_check(inner, t->body));
        }
        case TTag::App: {
            StlcType f = stlc_check(env, t->fun);
            if (f->tag != YTag::Arrow) throw StlcError("applying " + pretty(t->fun) + " of type " + pretty(f));
            StlcType a = stlc_check(env, t->arg);
            if (!stlc_eq(f->from, a))
                throw StlcError("argument " + pretty(t->arg) + " has type " + pretty(a) + ", expected " +
                                pretty(f->from));
            return f->to;
        }
    }
    throw std::logic_error("stlc_check: bad tag");
}

StlcTerm stlc_subst(const StlcTerm& t, const Name& x, const StlcTerm& n) {
    switch (t->tag) {
        case TTag::Var: return t->name == x ? n : t;
        case TTag::App: return stlc_app(stlc_subst(t->fun, x, n), stlc_subst(t->arg, x, n));
        case TTag::Lam: {
            if (t->name == x) return t;
            NameSet fv = free_vars(n);
            if (!fv.contains(t->name)) return stlc_lam(t->name, t->annot, stlc_subst(t->body, x, n));
            NameSet avoid = fv;
            all_names(t->body, avoid);
            avoid.insert(x);
            Name y = fresh_name(t->name, avoid);
            StlcTerm body = stlc_subst(t->body, t->name, stlc_var(y));
            return stlc_lam(y, t->annot, stlc_subst(body, x, n));
        }
    }
    throw std::logic_error("stlc_subst: bad tag");
}

std::optional<StlcTerm> stlc_step(const StlcTerm& t) {
    switch (t->tag) {
        case TTag::Var: return std::nullopt;
        case TTag::Lam:
            if (auto b = stlc_step(t->body)) return stlc_lam(t->name, t->annot, *b);
            return std::nullopt;
        case TTag::App:
            if (t->fun->tag == TTag::Lam) return stlc_subst(t->fun->body, t->fun->name, t->arg);
            if (auto f = stlc_step(t->fun)) return stlc_app(*f, t->arg);
            if (auto a = stlc_step(t->arg)) return stlc_app(t->fun, *a);
            return std::nullopt;
    }
    return std::nullopt;
}

std::vector<StlcTerm> stlc_contractions(const StlcTerm& t) {
    std::vector<StlcTerm> out;
    contractions(t, [](StlcTerm s) { return s; }, out);
    return out;
}

bool stlc_eq(const StlcType& a, const StlcType& b) {
    if (a->tag != b->tag) return false;
    if (a->tag == YTag::Base) return a->name == b->name;
    return stlc_eq(a->from, b->from) && stlc_eq(a->to, b->to);
}

bool stlc_alpha_eq(const StlcTerm& a, const StlcTerm& b) {
    std::map<Name, Name> l, r;
    return alpha(a, b, l, r);
}

std::string pretty(const StlcType& t) {
    if (t->tag == YTag::Base) return t->name;
    std::string from = pretty(t->from);
    if (t->from->tag == YTag::Arrow) from = "(" + from + ")";
    return from + " -> " + pretty(t->to);
}

std::string pretty(const StlcTerm& t) {
    switch (t->tag) {
        case TTag::Var: return t->name;
        case TTag::Lam: return "\\" + t->name + ":" + pretty(t->annot) + ". " + pretty(t->body);
        case TTag::App: {
            std::string f = pretty(t->fun);
            if (t->fun->tag == TTag::Lam) f = "(" + f + ")";
            std::string a = pretty(t->arg);
            if (t->arg->tag != TTag::Var) a = "(" + a + ")";
            return f + " " + a;
        }
    }
    return {};
}

}  // namespace lmd
