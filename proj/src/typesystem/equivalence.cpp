#include "lmd/typesystem.hpp"
#include "frame.hpp"

namespace lmd {

namespace {

// --- stage-local closed CSP erasure ----------------------------------------

bool local_term(const Term& m, std::vector<StageVar>& pushed);

bool local_type(const Type& t, std::vector<StageVar>& pushed) {
    switch (t->tag) {
        case TypeTag::Const: return true;
        case TypeTag::Pi: return local_type(t->domain, pushed) && local_type(t->body, pushed);
        case TypeTag::App: return local_type(t->body, pushed) && local_term(t->index, pushed);
        case TypeTag::Code: {
            pushed.push_back(t->name);
            bool ok = local_type(t->body, pushed);
            pushed.pop_back();
            return ok;
        }
        case TypeTag::Forall: return local_type(t->body, pushed);
    }
    return false;
}

bool local_term(const Term& m, std::vector<StageVar>& pushed) {
    switch (m->tag) {
        case TermTag::Const:
        case TermTag::Var: return true;
        case TermTag::Lam: return local_type(m->annot, pushed) && local_term(m->body, pushed);
        case TermTag::App: return local_term(m->fun, pushed) && local_term(m->arg, pushed);
        case TermTag::StageLam: return local_term(m->body, pushed);
        case TermTag::StageApp: return local_term(m->fun, pushed);
        case TermTag::Bracket: {
            pushed.push_back(m->name);
            bool ok = local_term(m->body, pushed);
            pushed.pop_back();
            return ok;
        }
        case TermTag::Escape:
        case TermTag::Csp: {
            if (pushed.empty() || pushed.back() != m->name) return false;
            StageVar top = pushed.back();
            pushed.pop_back();
            bool ok = local_term(m->body, pushed);
            pushed.push_back(top);
            return ok;
        }
    }
    return false;
}

bool erasable(const Term& m) { return m->tag == TermTag::Csp && free_vars(m->body).empty() && stage_local(m->body); }

bool erase_type_step(const Type& t, Type& out);

std::optional<Term> erase_step(const Term& m) {
    auto rebuild = [&](auto&& mutate) {
        auto node = std::make_shared<TermNode>(*m);
        mutate(*node);
        return Term(std::move(node));
    };
    switch (m->tag) {
        case TermTag::Const:
        case TermTag::Var: return std::nullopt;
        case TermTag::Lam: {
            Type annot;
            if (erase_type_step(m->annot, annot)) return rebuild([&](TermNode& n) { n.annot = annot; });
            if (auto b = erase_step(m->body)) return rebuild([&](TermNode& n) { n.body = *b; });
            return std::nullopt;
        }
        case TermTag::App:
            if (auto f = erase_step(m->fun)) return rebuild([&](TermNode& n) { n.fun = *f; });
            if (auto a = erase_step(m->arg)) return rebuild([&](TermNode& n) { n.arg = *a; });
            return std::nullopt;
        case TermTag::StageApp:
            if (auto f = erase_step(m->fun)) return rebuild([&](TermNode& n) { n.fun = *f; });
            return std::nullopt;
        case TermTag::Bracket:
        case TermTag::Escape:
        case TermTag::StageLam:
        case TermTag::Csp:
            if (auto b = erase_step(m->body)) return rebuild([&](TermNode& n) { n.body = *b; });
            if (erasable(m)) return m->body;
            return std::nullopt;
    }
    return std::nullopt;
}

// True when `t` changed; the new type is stored in `out`.
bool erase_type_step(const Type& t, Type& out) {
    auto node = std::make_shared<TypeNode>(*t);
    switch (t->tag) {
        case TypeTag::Const: return false;
        case TypeTag::Pi: {
            Type sub;
            if (erase_type_step(t->domain, sub)) {
                node->domain = sub;
            } else if (erase_type_step(t->body, sub)) {
                node->body = sub;
            } else {
                return false;
            }
            break;
        }
        case TypeTag::App: {
            Type sub;
            if (erase_type_step(t->body, sub)) {
                node->body = sub;
            } else if (auto i = erase_step(t->index)) {
                node->index = *i;
            } else {
                return false;
            }
            break;
        }
        case TypeTag::Code:
        case TypeTag::Forall: {
            Type sub;
            if (!erase_type_step(t->body, sub)) return false;
            node->body = sub;
            break;
        }
    }
    out = std::move(node);
    return true;
}

// --- lifting a type one stage up -------------------------------------------

struct Lifter {
    StageVar alpha;

    Term lift_var(const Term& x, const std::vector<StageVar>& path) const {
        Stage delta(path);
        return mk_escapes(delta, mk_csp(alpha, mk_brackets(delta, x)));
    }

    Term wrap_root(const Term& m, const NameSet& bound) const {
        for (const auto& v : free_vars(m))
            if (bound.contains(v))
                throw TypeError("T-Csp", "cannot lift " + pretty(m) + " across " + "%" + alpha +
                                             ": it escapes below the lifted stage around bound variable '" + v +
                                             "'");
        return mk_csp(alpha, m);
    }

    Term term(const Term& m, std::vector<StageVar>& path, NameSet& bound) const {
        switch (m->tag) {
            case TermTag::Const: return m;
            case TermTag::Var: return bound.contains(m->name) ? m : lift_var(m, path);
            case TermTag::Lam: {
                Type annot = type(m->annot, path, bound);
                bool had = bound.contains(m->name);
                bound.insert(m->name);
                Term body = term(m->body, path, bound);
                if (!had) bound.erase(m->name);
                return mk_lam(m->name, annot, body);
            }
            case TermTag::App: return mk_app(term(m->fun, path, bound), term(m->arg, path, bound));
            case TermTag::Bracket: {
                path.push_back(m->name);
                Term body = term(m->body, path, bound);
                path.pop_back();
                return mk_bracket(m->name, body);
            }
            case TermTag::Escape:
            case TermTag::Csp: {
                if (path.empty()) return wrap_root(m, bound);
                StageVar top = path.back();
                path.pop_back();
                Term body = term(m->body, path, bound);
                path.push_back(top);
                return m->tag == TermTag::Escape ? mk_escape(m->name, body) : mk_csp(m->name, body);
            }
            case TermTag::StageLam: {
                StageVar b = m->name;
                Term body = m->body;
                if (b == alpha) {
                    NameSet avoid = free_stage_vars(body);
                    avoid.insert(alpha);
                    StageVar c = fresh_name(b, avoid);
                    body = subst_stage(body, b, Stage{c});
                    b = c;
                }
                return mk_stage_lam(b, term(body, path, bound));
            }
            case TermTag::StageApp: return mk_stage_app(term(m->fun, path, bound), m->stage);
        }
        return m;
    }

    Type type(const Type& t, std::vector<StageVar>& path, NameSet& bound) const {
        switch (t->tag) {
            case TypeTag::Const: return t;
            case TypeTag::Pi: {
                Type dom = type(t->domain, path, bound);
                bool had = bound.contains(t->name);
                bound.insert(t->name);
                Type body = type(t->body, path, bound);
                if (!had) bound.erase(t->name);
                return mk_pi(t->name, dom, body);
            }
            case TypeTag::App: return mk_tapp(type(t->body, path, bound), term(t->index, path, bound));
            case TypeTag::Code: {
                path.push_back(t->name);
                Type body = type(t->body, path, bound);
                path.pop_back();
                return mk_code(t->name, body);
            }
            case TypeTag::Forall: {
                StageVar b = t->name;
                Type body = t->body;
                if (b == alpha) {
                    NameSet avoid = free_stage_vars(body);
                    avoid.insert(alpha);
                    StageVar c = fresh_name(b, avoid);
                    body = subst_stage(body, b, Stage{c});
                    b = c;
                }
                return mk_forall(b, type(body, path, bound));
            }
        }
        return t;
    }
};

const char* equiv_rule(RuleTag r) {
    switch (r) {
        case RuleTag::Beta: return "Q-Beta";
        case RuleTag::Diamond: return "Q-TBLTB";
        case RuleTag::StageBeta: return "Q-Lambda";
        case RuleTag::Delta: return "Q-Delta";
    }
    return "Q-?";
}

Term canonical_annotations(const Checker& c, const Term& m) {
    switch (m->tag) {
        case TermTag::Const:
        case TermTag::Var: return m;
        case TermTag::Lam: return mk_lam(m->name, c.canonical(m->annot), canonical_annotations(c, m->body));
        case TermTag::App: return mk_app(canonical_annotations(c, m->fun), canonical_annotations(c, m->arg));
        case TermTag::Bracket: return mk_bracket(m->name, canonical_annotations(c, m->body));
        case TermTag::Escape: return mk_escape(m->name, canonical_annotations(c, m->body));
        case TermTag::StageLam: return mk_stage_lam(m->name, canonical_annotations(c, m->body));
        case TermTag::StageApp: return mk_stage_app(canonical_annotations(c, m->fun), m->stage);
        case TermTag::Csp: return mk_csp(m->name, canonical_annotations(c, m->body));
    }
    return m;
}

NameSet names_in(const TypeEnv& env, const Signature& sig) {
    NameSet out;
    for (const auto& e : env.entries()) out.insert(e.var);
    for (const auto& d : sig.decls()) out.insert(d.name);
    return out;
}

}  // namespace

bool stage_local(const Term& m) {
    std::vector<StageVar> pushed;
    return local_term(m, pushed);
}

std::optional<Term> percent_erase_step(const Term& m) { return erase_step(m); }

Term percent_erase(const Term& m) {
    Term cur = m;
    while (auto next = erase_step(cur)) cur = *next;
    return cur;
}

Type lift_type(const Type& t, const StageVar& alpha) {
    Lifter l{alpha};
    std::vector<StageVar> path;
    NameSet bound;
    return l.type(t, path, bound);
}

// --- canonical forms -------------------------------------------------------

std::vector<std::pair<std::string, Term>> Checker::canonical_steps(const Term& m) const {
    std::vector<std::pair<std::string, Term>> out;
    ReductionOptions ro;
    ro.delta = opts_.delta;
    Term cur = m;
    for (;;) {
        auto r = normalize(cur, Strategy::leftmost_outermost(), opts_.max_steps, ro);
        for (const auto& s : r.steps) out.emplace_back(equiv_rule(s.rule), s.after);
        cur = r.term;
        auto erased = percent_erase_step(cur);
        if (!erased) break;
        out.emplace_back("Q-Percent", *erased);
        cur = *erased;
    }
    Term ann = canonical_annotations(*this, cur);
    if (!alpha_eq(ann, cur)) out.emplace_back("Q-Abs", ann);
    return out;
}

Term Checker::canonical(const Term& m) const {
    auto steps = canonical_steps(m);
    return steps.empty() ? m : steps.back().second;
}

Type Checker::canonical(const Type& t) const {
    switch (t->tag) {
        case TypeTag::Const: return t;
        case TypeTag::Pi: return mk_pi(t->name, canonical(t->domain), canonical(t->body));
        case TypeTag::App: return mk_tapp(canonical(t->body), canonical(t->index));
        case TypeTag::Code: return mk_code(t->name, canonical(t->body));
        case TypeTag::Forall: return mk_forall(t->name, canonical(t->body));
    }
    return t;
}

Kind Checker::canonical(const Kind& k) const {
    if (k->tag == KindTag::Star) return k;
    return mk_kpi(k->name, canonical(k->domain), canonical(k->body));
}

// --- equivalence -----------------------------------------------------------

Derivation Checker::equiv_kind(const TypeEnv& env, const Kind& k, const Kind& j, const Stage& a) {
    Frame f(*this, Judgment::kind_eq(env, k, j, a));
    Judgment concl = Judgment::kind_eq(env, k, j, a);
    if (k->tag == KindTag::Star && j->tag == KindTag::Star) return {"QK-Refl", concl, {}};
    if (k->tag != KindTag::Pi || j->tag != KindTag::Pi)
        fail(TypeError("QK", "kinds are not equivalent", pretty(j), pretty(k)));
    auto dd = equiv_type(env, k->domain, j->domain, mk_star(), a);
    NameSet avoid = names_in(env, sig_);
    for (const auto& n : free_vars(k->body)) avoid.insert(n);
    for (const auto& n : free_vars(j->body)) avoid.insert(n);
    Name x = fresh_name(k->name, avoid);
    auto bd = equiv_kind(env.extend(x, k->domain, a), rename_var(k->body, k->name, x),
                         rename_var(j->body, j->name, x), a);
    return {"QK-Abs", concl, {std::move(dd), std::move(bd)}};
}

Derivation Checker::equiv_type(const TypeEnv& env, const Type& t, const Type& s, const Kind& k, const Stage& a) {
    Frame f(*this, Judgment::type_eq(env, t, s, k, a));
    return type_eq_rec(env, t, s, k, a);
}

Derivation Checker::type_eq_rec(const TypeEnv& env, const Type& t, const Type& s, const Kind& k, const Stage& a) {
    auto mismatch = [&]() {
        fail(TypeError("QT", "types are not equivalent: " + pretty(t) + " and " + pretty(s) + " differ", pretty(s),
                       pretty(t)));
    };
    if (t->tag != s->tag) mismatch();
    Kind star = mk_star();
    switch (t->tag) {
        case TypeTag::Const: {
            if (t->name != s->name) mismatch();
            const Kind* tk = sig_.find_type_const(t->name);
            if (!tk) fail(TypeError("QT-Refl", "unknown type constant '" + t->name + "'"));
            return {"QT-Refl", Judgment::type_eq(env, t, s, *tk, a), {}};
        }
        case TypeTag::Pi: {
            auto dd = type_eq_rec(env, t->domain, s->domain, star, a);
            NameSet avoid = names_in(env, sig_);
            for (const auto& n : free_vars(t->body)) avoid.insert(n);
            for (const auto& n : free_vars(s->body)) avoid.insert(n);
            Name x = fresh_name(t->name, avoid);
            auto bd = type_eq_rec(env.extend(x, t->domain, a), rename_var(t->body, t->name, x),
                                  rename_var(s->body, s->name, x), star, a);
            return {"QT-Abs", Judgment::type_eq(env, t, s, star, a), {std::move(dd), std::move(bd)}};
        }
        case TypeTag::App: {
            auto [hk, hkd] = infer_kind(env, t->body, a);
            if (hk->tag != KindTag::Pi)
                fail(TypeError("QT-App", "type " + pretty(t->body) + " is not a type family", "a kind Pi x:T. K",
                               pretty(hk)));
            auto hd = type_eq_rec(env, t->body, s->body, hk, a);
            auto id = term_chain(env, t->index, s->index, hk->domain, a);
            Kind rk = subst(hk->body, hk->name, t->index);
            return {"QT-App", Judgment::type_eq(env, t, s, rk, a), {std::move(hd), std::move(id)}};
        }
        case TypeTag::Code: {
            if (t->name != s->name) mismatch();
            auto bd = type_eq_rec(env, t->body, s->body, star, a.push(t->name));
            return {"QT-TW", Judgment::type_eq(env, t, s, star, a), {std::move(bd)}};
        }
        case TypeTag::Forall: {
            NameSet avoid = free_stage_vars(env);
            for (const auto& v : a.vars()) avoid.insert(v);
            for (const auto& v : free_stage_vars(t)) avoid.insert(v);
            for (const auto& v : free_stage_vars(s)) avoid.insert(v);
            StageVar g = fresh_name(t->name, avoid);
            Type tb = subst_stage(t->body, t->name, Stage{g});
            Type sb = subst_stage(s->body, s->name, Stage{g});
            auto bd = type_eq_rec(env, tb, sb, k, a);
            Kind bk = bd.conclusion.kind;
            return {"QT-Gen", Judgment::type_eq(env, t, s, bk, a), {std::move(bd)}};
        }
    }
    mismatch();
    std::abort();
}

Derivation Checker::equiv_term(const TypeEnv& env, const Term& m, const Term& n, const Type& t, const Stage& a) {
    Frame f(*this, Judgment::term_eq(env, m, n, t, a));
    return term_chain(env, m, n, t, a);
}

Derivation Checker::term_chain(const TypeEnv& env, const Term& m, const Term& n, const Type& t, const Stage& a) {
    Judgment concl = Judgment::term_eq(env, m, n, t, a);
    if (alpha_eq(m, n)) return {"Q-Refl", concl, {}};
    std::vector<std::pair<std::string, Term>> left, right;
    try {
        left = canonical_steps(m);
        right = canonical_steps(n);
    } catch (const StepBudgetExceeded& e) {
        fail(TypeError("Q-Trans", "normalizing an index term exceeded the budget of " +
                                      std::to_string(e.budget()) + " steps"));
    }
    Term lc = left.empty() ? m : left.back().second;
    Term rc = right.empty() ? n : right.back().second;
    if (!alpha_eq(lc, rc))
        fail(TypeError("Q-Trans",
                       "terms " + pretty(m) + " and " + pretty(n) + " are not equivalent (normal forms " +
                           pretty(lc) + " and " + pretty(rc) + ")",
                       pretty(n), pretty(m)));
    std::vector<Derivation> chain;
    Term prev = m;
    for (const auto& [rule, next] : left) {
        chain.push_back({rule, Judgment::term_eq(env, prev, next, t, a), {}});
        prev = next;
    }
    for (std::size_t i = right.size(); i-- > 0;) {
        Term from = i == 0 ? n : right[i - 1].second;
        const auto& [rule, to] = right[i];
        Derivation step{rule, Judgment::term_eq(env, from, to, t, a), {}};
        chain.push_back({"Q-Sym", Judgment::term_eq(env, to, from, t, a), {std::move(step)}});
    }
    return {"Q-Trans", concl, std::move(chain)};
}

}  // namespace lmd
