#include "lmd/typesystem.hpp"

namespace lmd {

namespace {

using Form = Judgment::Form;

bool env_eq(const TypeEnv& a, const TypeEnv& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.entries()[i];
        const auto& y = b.entries()[i];
        if (x.var != y.var || x.stage != y.stage || !alpha_eq(x.type, y.type)) return false;
    }
    return true;
}

// The variable `p` adds to `env` with the given type and stage, if `p` is
// exactly that one-entry extension.
std::optional<Name> extension_var(const TypeEnv& env, const TypeEnv& p, const Type& t, const Stage& a) {
    if (p.size() != env.size() + 1 || !env_eq(env, p.prefix(env.size()))) return std::nullopt;
    const auto& last = p.entries().back();
    if (last.stage != a || !alpha_eq(last.type, t) || env.contains(last.var)) return std::nullopt;
    return last.var;
}

bool star(const Kind& k) { return k && k->tag == KindTag::Star; }

class Validator {
public:
    Validator(const Signature& sig, const CheckOptions& opts) : sig_(sig), opts_(opts), checker_(sig, opts) {}

    std::string run(const Derivation& d) {
        std::string err = node(d);
        if (!err.empty()) return d.rule + " at " + d.conclusion.str() + ": " + err;
        for (const auto& p : d.premises) {
            err = run(p);
            if (!err.empty()) return err;
        }
        return {};
    }

private:
    const Signature& sig_;
    const CheckOptions& opts_;
    Checker checker_;

    // Candidate names for a binder renamed between a conclusion and its premise.
    template <class T>
    static std::vector<StageVar> stage_candidates(const StageVar& orig, const T& premise, const T& concl) {
        std::vector<StageVar> out{orig};
        NameSet in_concl = free_stage_vars(concl);
        for (const auto& v : free_stage_vars(premise))
            if (!in_concl.contains(v)) out.push_back(v);
        return out;
    }

    NameSet taken_stage_vars(const TypeEnv& env, const Stage& a) const {
        NameSet s = free_stage_vars(env);
        for (const auto& v : a.vars()) s.insert(v);
        return s;
    }

    bool typing(const Derivation& p, const TypeEnv& env, const Term& m, const Stage& a) const {
        return p.conclusion.form == Form::Typing && env_eq(p.conclusion.env, env) && p.conclusion.stage == a &&
               alpha_eq(p.conclusion.term, m);
    }

    bool kinding(const Derivation& p, const TypeEnv& env, const Type& t, const Stage& a) const {
        return p.conclusion.form == Form::Kinding && env_eq(p.conclusion.env, env) && p.conclusion.stage == a &&
               alpha_eq(p.conclusion.type, t);
    }

    bool type_eq(const Derivation& p, const TypeEnv& env, const Type& t, const Type& s, const Stage& a) const {
        return p.conclusion.form == Form::TypeEq && env_eq(p.conclusion.env, env) && p.conclusion.stage == a &&
               alpha_eq(p.conclusion.type, t) && alpha_eq(p.conclusion.type2, s);
    }

    bool term_eq(const Derivation& p, const TypeEnv& env, const Term& m, const Term& n, const Type& t,
                 const Stage& a) const {
        const Judgment& c = p.conclusion;
        return c.form == Form::TermEq && env_eq(c.env, env) && c.stage == a && alpha_eq(c.term, m) &&
               alpha_eq(c.term2, n) && alpha_eq(c.type, t);
    }

    std::string node(const Derivation& d) {
        const Judgment& j = d.conclusion;
        const auto& P = d.premises;
        auto arity = [&](std::size_t n) { return P.size() == n; };
        const std::string ok;
        const std::string bad_premises = "premises do not match the rule";
        const std::string& r = d.rule;

        // --- signatures and environments
        if (r == "S-Empty") return j.form == Form::SigOk && j.decls.empty() && arity(0) ? ok : bad_premises;
        if (r == "S-TConst" || r == "S-Const") {
            if (j.form != Form::SigOk || j.decls.empty() || !arity(2)) return bad_premises;
            std::size_t i = j.decls.size() - 1;
            if (i >= sig_.decls().size() || sig_.decls()[i].name != j.decls.back()) return "declaration mismatch";
            const auto& decl = sig_.decls()[i];
            std::vector<Name> prev(j.decls.begin(), j.decls.end() - 1);
            if (P[0].conclusion.form != Form::SigOk || P[0].conclusion.decls != prev) return bad_premises;
            for (const auto& n : prev)
                if (n == decl.name) return "duplicate declaration";
            const Judgment& q = P[1].conclusion;
            if (r == "S-TConst")
                return decl.sort == Declaration::Sort::TypeConst && q.form == Form::KindOk && q.env.empty() &&
                               q.stage.empty() && alpha_eq(q.kind, decl.kind)
                           ? ok
                           : bad_premises;
            return decl.sort == Declaration::Sort::Const && kinding(P[1], {}, decl.type, {}) && star(q.kind)
                       ? ok
                       : bad_premises;
        }
        if (r == "E-Empty") return j.form == Form::EnvOk && j.env.empty() && arity(0) ? ok : bad_premises;
        if (r == "E-Var") {
            if (j.form != Form::EnvOk || j.env.empty() || !arity(2)) return bad_premises;
            TypeEnv prev = j.env.prefix(j.env.size() - 1);
            const auto& e = j.env.entries().back();
            if (prev.contains(e.var)) return "duplicate variable";
            if (sig_.declares(e.var)) return "variable clashes with a constant";
            return P[0].conclusion.form == Form::EnvOk && env_eq(P[0].conclusion.env, prev) &&
                           kinding(P[1], prev, e.type, e.stage) && star(P[1].conclusion.kind)
                       ? ok
                       : bad_premises;
        }

        // --- kinds
        if (r == "W-Star") return j.form == Form::KindOk && star(j.kind) && arity(0) ? ok : bad_premises;
        if (r == "W-Abs") {
            if (j.form != Form::KindOk || j.kind->tag != KindTag::Pi || !arity(2)) return bad_premises;
            if (!kinding(P[0], j.env, j.kind->domain, j.stage) || !star(P[0].conclusion.kind)) return bad_premises;
            const Judgment& q = P[1].conclusion;
            auto y = extension_var(j.env, q.env, j.kind->domain, j.stage);
            if (q.form != Form::KindOk || !y || q.stage != j.stage) return bad_premises;
            return alpha_eq(q.kind, rename_var(j.kind->body, j.kind->name, *y)) ? ok : "body mismatch";
        }

        // --- kinding
        if (j.form == Form::Kinding) {
            const Type& t = j.type;
            if (r == "K-TConst") {
                const Kind* k = t->tag == TypeTag::Const ? sig_.find_type_const(t->name) : nullptr;
                return k && arity(0) && alpha_eq(*k, j.kind) ? ok : "unknown type constant or wrong kind";
            }
            if (r == "K-Abs") {
                if (t->tag != TypeTag::Pi || !arity(2) || !star(j.kind)) return bad_premises;
                if (!kinding(P[0], j.env, t->domain, j.stage) || !star(P[0].conclusion.kind)) return bad_premises;
                auto y = extension_var(j.env, P[1].conclusion.env, t->domain, j.stage);
                if (!y || P[1].conclusion.form != Form::Kinding || P[1].conclusion.stage != j.stage ||
                    !star(P[1].conclusion.kind))
                    return bad_premises;
                return alpha_eq(P[1].conclusion.type, rename_var(t->body, t->name, *y)) ? ok : "body mismatch";
            }
            if (r == "K-App") {
                if (t->tag != TypeTag::App || !arity(2)) return bad_premises;
                if (!kinding(P[0], j.env, t->body, j.stage)) return bad_premises;
                const Kind& hk = P[0].conclusion.kind;
                if (hk->tag != KindTag::Pi) return "head kind is not a Π kind";
                if (!typing(P[1], j.env, t->index, j.stage) || !alpha_eq(P[1].conclusion.type, hk->domain))
                    return bad_premises;
                return alpha_eq(j.kind, subst(hk->body, hk->name, t->index)) ? ok : "result kind mismatch";
            }
            if (r == "K-TW") {
                if (t->tag != TypeTag::Code || !arity(1) || !star(j.kind)) return bad_premises;
                return kinding(P[0], j.env, t->body, j.stage.push(t->name)) && star(P[0].conclusion.kind)
                           ? ok
                           : bad_premises;
            }
            if (r == "K-Gen") {
                if (t->tag != TypeTag::Forall || !arity(1) || P[0].conclusion.form != Form::Kinding) return bad_premises;
                const Judgment& q = P[0].conclusion;
                if (!env_eq(q.env, j.env) || q.stage != j.stage || !alpha_eq(q.kind, j.kind)) return bad_premises;
                NameSet taken = taken_stage_vars(j.env, j.stage);
                for (const auto& g : stage_candidates(t->name, q.type, t))
                    if (!taken.contains(g) && alpha_eq(q.type, subst_stage(t->body, t->name, Stage{g}))) return ok;
                return "bound stage variable is not fresh";
            }
            if (r == "K-Csp") {
                if (j.stage.empty() || !arity(1) || !star(j.kind)) return bad_premises;
                if (!free_vars(t).empty()) return "type has free term variables";
                return kinding(P[0], j.env, t, j.stage.pop()) && star(P[0].conclusion.kind) ? ok : bad_premises;
            }
        }

        // --- typing
        if (j.form == Form::Typing) {
            const Term& m = j.term;
            const Stage& a = j.stage;
            if (r == "T-Const") {
                if (m->tag != TermTag::Const || !arity(0)) return bad_premises;
                if (const Type* t = sig_.find_const(m->name)) return alpha_eq(*t, j.type) ? ok : "wrong type";
                if (is_int_literal(m->name) && sig_.find_type_const("Int"))
                    return alpha_eq(j.type, mk_tconst("Int")) ? ok : "wrong type";
                return "unknown constant";
            }
            if (r == "T-Var") {
                const EnvEntry* e = m->tag == TermTag::Var ? j.env.find(m->name) : nullptr;
                if (!e || !arity(0)) return "unbound variable";
                if (e->stage != a) return "stage mismatch";
                return alpha_eq(e->type, j.type) ? ok : "wrong type";
            }
            if (r == "T-Abs") {
                if (m->tag != TermTag::Lam || !arity(2)) return bad_premises;
                if (!kinding(P[0], j.env, m->annot, a) || !star(P[0].conclusion.kind)) return bad_premises;
                auto y = extension_var(j.env, P[1].conclusion.env, m->annot, a);
                if (!y || !typing(P[1], P[1].conclusion.env, rename_var(m->body, m->name, *y), a)) return bad_premises;
                return alpha_eq(j.type, mk_pi(*y, m->annot, P[1].conclusion.type)) ? ok : "wrong type";
            }
            if (r == "T-App") {
                if (m->tag != TermTag::App || !arity(2)) return bad_premises;
                if (!typing(P[0], j.env, m->fun, a)) return bad_premises;
                const Type& ft = P[0].conclusion.type;
                if (ft->tag != TypeTag::Pi) return "function type is not a Π type";
                if (!typing(P[1], j.env, m->arg, a) || !alpha_eq(P[1].conclusion.type, ft->domain))
                    return bad_premises;
                return alpha_eq(j.type, subst(ft->body, ft->name, m->arg)) ? ok : "wrong type";
            }
            if (r == "T-Conv") {
                if (!arity(2) || !typing(P[0], j.env, m, a)) return bad_premises;
                return type_eq(P[1], j.env, P[0].conclusion.type, j.type, a) ? ok : bad_premises;
            }
            if (r == "T-TB") {
                if (m->tag != TermTag::Bracket || !arity(1)) return bad_premises;
                if (!typing(P[0], j.env, m->body, a.push(m->name))) return bad_premises;
                return alpha_eq(j.type, mk_code(m->name, P[0].conclusion.type)) ? ok : "wrong type";
            }
            if (r == "T-TBL") {
                if (m->tag != TermTag::Escape || !arity(1) || !a.ends_with(m->name)) return bad_premises;
                if (!typing(P[0], j.env, m->body, a.pop())) return bad_premises;
                return alpha_eq(P[0].conclusion.type, mk_code(m->name, j.type)) ? ok : "wrong type";
            }
            if (r == "T-Gen") {
                if (m->tag != TermTag::StageLam || !arity(1) || P[0].conclusion.form != Form::Typing)
                    return bad_premises;
                const Judgment& q = P[0].conclusion;
                if (!env_eq(q.env, j.env) || q.stage != a) return bad_premises;
                NameSet taken = taken_stage_vars(j.env, a);
                for (const auto& g : stage_candidates(m->name, q.term, m))
                    if (!taken.contains(g) && alpha_eq(q.term, subst_stage(m->body, m->name, Stage{g})))
                        return alpha_eq(j.type, mk_forall(g, q.type)) ? ok : "wrong type";
                return "bound stage variable is not fresh";
            }
            if (r == "T-Ins") {
                if (m->tag != TermTag::StageApp || !arity(1) || !typing(P[0], j.env, m->fun, a)) return bad_premises;
                const Type& ft = P[0].conclusion.type;
                if (ft->tag != TypeTag::Forall) return "not a stage-polymorphic type";
                return alpha_eq(j.type, subst_stage(ft->body, ft->name, m->stage)) ? ok : "wrong type";
            }
            if (r == "T-Csp") {
                if (m->tag != TermTag::Csp || !arity(1) || !a.ends_with(m->name)) return bad_premises;
                if (!typing(P[0], j.env, m->body, a.pop())) return bad_premises;
                try {
                    return alpha_eq(j.type, lift_type(P[0].conclusion.type, m->name)) ? ok : "wrong type";
                } catch (const TypeError& e) {
                    return e.what();
                }
            }
        }

        // --- kind equivalence
        if (j.form == Form::KindEq) {
            if (r == "QK-Refl") return star(j.kind) && star(j.kind2) && arity(0) ? ok : bad_premises;
            if (r == "QK-Abs") {
                const Kind& k = j.kind;
                const Kind& l = j.kind2;
                if (k->tag != KindTag::Pi || l->tag != KindTag::Pi || !arity(2)) return bad_premises;
                if (!type_eq(P[0], j.env, k->domain, l->domain, j.stage)) return bad_premises;
                const Judgment& q = P[1].conclusion;
                auto y = extension_var(j.env, q.env, k->domain, j.stage);
                if (!y || q.form != Form::KindEq || q.stage != j.stage) return bad_premises;
                return alpha_eq(q.kind, rename_var(k->body, k->name, *y)) &&
                               alpha_eq(q.kind2, rename_var(l->body, l->name, *y))
                           ? ok
                           : "body mismatch";
            }
        }

        // --- type equivalence
        if (j.form == Form::TypeEq) {
            const Type& t = j.type;
            const Type& s = j.type2;
            if (t->tag != s->tag) return "type formers differ";
            if (r == "QT-Refl") {
                const Kind* k = t->tag == TypeTag::Const ? sig_.find_type_const(t->name) : nullptr;
                return k && t->name == s->name && arity(0) && alpha_eq(*k, j.kind) ? ok : bad_premises;
            }
            if (r == "QT-Abs") {
                if (t->tag != TypeTag::Pi || !arity(2) || !star(j.kind)) return bad_premises;
                if (!type_eq(P[0], j.env, t->domain, s->domain, j.stage)) return bad_premises;
                const Judgment& q = P[1].conclusion;
                auto y = extension_var(j.env, q.env, t->domain, j.stage);
                if (!y || q.form != Form::TypeEq || q.stage != j.stage) return bad_premises;
                return alpha_eq(q.type, rename_var(t->body, t->name, *y)) &&
                               alpha_eq(q.type2, rename_var(s->body, s->name, *y))
                           ? ok
                           : "body mismatch";
            }
            if (r == "QT-App") {
                if (t->tag != TypeTag::App || !arity(2)) return bad_premises;
                if (!type_eq(P[0], j.env, t->body, s->body, j.stage)) return bad_premises;
                const Kind& hk = P[0].conclusion.kind;
                if (!hk || hk->tag != KindTag::Pi) return "head kind is not a Π kind";
                if (!term_eq(P[1], j.env, t->index, s->index, hk->domain, j.stage)) return bad_premises;
                return alpha_eq(j.kind, subst(hk->body, hk->name, t->index)) ? ok : "result kind mismatch";
            }
            if (r == "QT-TW") {
                if (t->tag != TypeTag::Code || t->name != s->name || !arity(1) || !star(j.kind)) return bad_premises;
                return type_eq(P[0], j.env, t->body, s->body, j.stage.push(t->name)) ? ok : bad_premises;
            }
            if (r == "QT-Gen") {
                if (t->tag != TypeTag::Forall || !arity(1) || P[0].conclusion.form != Form::TypeEq) return bad_premises;
                const Judgment& q = P[0].conclusion;
                if (!env_eq(q.env, j.env) || q.stage != j.stage || !alpha_eq(q.kind, j.kind)) return bad_premises;
                NameSet taken = taken_stage_vars(j.env, j.stage);
                for (const auto& g : stage_candidates(t->name, q.type, t))
                    if (!taken.contains(g) && alpha_eq(q.type, subst_stage(t->body, t->name, Stage{g})) &&
                        alpha_eq(q.type2, subst_stage(s->body, s->name, Stage{g})))
                        return ok;
                return "bound stage variable is not fresh";
            }
        }

        // --- term equivalence
        if (j.form == Form::TermEq) {
            if (r == "Q-Refl") return arity(0) && alpha_eq(j.term, j.term2) ? ok : "terms are not α-equivalent";
            if (r == "Q-Sym")
                return arity(1) && term_eq(P[0], j.env, j.term2, j.term, j.type, j.stage) ? ok : bad_premises;
            if (r == "Q-Trans") {
                if (P.empty()) return bad_premises;
                Term cur = j.term;
                for (const auto& p : P) {
                    const Judgment& q = p.conclusion;
                    if (q.form != Form::TermEq || !env_eq(q.env, j.env) || q.stage != j.stage ||
                        !alpha_eq(q.type, j.type) || !alpha_eq(q.term, cur))
                        return "chain is broken";
                    cur = q.term2;
                }
                return alpha_eq(cur, j.term2) ? ok : "chain does not end at the right-hand side";
            }
            if (r == "Q-Beta" || r == "Q-TBLTB" || r == "Q-Lambda" || r == "Q-Delta") {
                if (!arity(0)) return bad_premises;
                RuleTag want = r == "Q-Beta"     ? RuleTag::Beta
                               : r == "Q-TBLTB"  ? RuleTag::Diamond
                               : r == "Q-Lambda" ? RuleTag::StageBeta
                                                 : RuleTag::Delta;
                if (want == RuleTag::Delta && !opts_.delta) return "δ-rules are disabled";
                ReductionOptions ro;
                ro.delta = opts_.delta;
                for (const auto& step : enumerate_redexes(j.term, ro))
                    if (step.rule == want && alpha_eq(step.after, j.term2)) return ok;
                return "no such one-step reduction";
            }
            if (r == "Q-Percent") {
                auto next = percent_erase_step(j.term);
                return arity(0) && next && alpha_eq(*next, j.term2) ? ok : "no such erasure";
            }
            if (r == "Q-Abs") {
                // Only annotations may change, each to its canonical form.
                return arity(0) && alpha_eq(checker_.canonical(j.term), j.term2) ? ok : "annotations differ";
            }
        }
        return "rule " + r + " does not apply to a " + form_name(j.form) + " judgment";
    }
};

}  // namespace

std::string validate(const Derivation& d, const Signature& sig, const CheckOptions& opts) {
    return Validator(sig, opts).run(d);
}

}  // namespace lmd
