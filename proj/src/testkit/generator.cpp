#include <random>
#include <stdexcept>

#include "lmd/kernel.hpp"
#include "lmd/prelude.hpp"
#include "lmd/testkit.hpp"
#include "lmd/typesystem.hpp"

namespace lmd {

namespace {

const Type kInt = mk_tconst("Int");
const Type kBool = mk_tconst("Bool");

bool closed_indices(const Type& t);

bool closed_indices(const Term& m) {
    switch (m->tag) {
        case TermTag::Escape:
        case TermTag::Csp: return false;
        case TermTag::Lam: return closed_indices(m->annot) && closed_indices(m->body);
        case TermTag::App: return closed_indices(m->fun) && closed_indices(m->arg);
        case TermTag::Bracket:
        case TermTag::StageLam: return closed_indices(m->body);
        case TermTag::StageApp: return closed_indices(m->fun);
        default: return true;
    }
}

// No escape or CSP inside any index, so the type means the same at every stage.
bool closed_indices(const Type& t) {
    switch (t->tag) {
        case TypeTag::Const: return true;
        case TypeTag::Pi: return closed_indices(t->domain) && closed_indices(t->body);
        case TypeTag::App: return closed_indices(t->body) && closed_indices(t->index);
        case TypeTag::Code:
        case TypeTag::Forall: return closed_indices(t->body);
    }
    return false;
}

class Gen {
public:
    explicit Gen(const GenConfig& cfg)
        : cfg_(cfg),
          sig_(cfg.signature.decls().empty() ? prelude_signature() : cfg.signature),
          checker_(sig_),
          rng_(cfg.seed) {}

    GeneratedCase run() {
        GeneratedCase c;
        c.stage = chance(0.2) && !cfg_.stage_pool.empty() ? Stage{cfg_.stage_pool[0]} : Stage{};
        int nvars = uniform(0, 2);
        for (int i = 0; i < nvars; ++i) {
            Stage s;
            if (cfg_.epsilon_free_env || chance(0.5)) s = Stage{pool(uniform(0, 1))};
            c.env = c.env.extend("x" + std::to_string(i), gen_type(1), s);
        }
        c.type = gen_type(2);
        // Depth 1 is a single leaf.
        c.term = term(c.env, c.type, c.stage, cfg_.max_depth - 1);
        c.trace = std::move(trace_);
        return c;
    }

    const Signature& signature() const { return sig_; }

private:
    using Option = std::pair<double, std::function<Term()>>;

    const GenConfig& cfg_;
    Signature sig_;
    Checker checker_;
    std::mt19937_64 rng_;
    std::vector<std::string> trace_;
    int fresh_ = 0;

    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    StageVar pool(int i) const { return cfg_.stage_pool[static_cast<std::size_t>(i) % cfg_.stage_pool.size()]; }

    double weight(const char* key) const {
        auto it = cfg_.weights.find(key);
        return it == cfg_.weights.end() ? 1.0 : it->second;
    }

    // --- types ---------------------------------------------------------------

    Term gen_index(int depth) {
        int r = depth <= 0 ? 0 : uniform(0, 5);
        if (r <= 1) return mk_int(0);
        if (r <= 4) return mk_apps(mk_const("add"), {gen_index(depth - 1), mk_int(1)});
        return mk_app(mk_lam("i", kInt, mk_var("i")), gen_index(depth - 1));
    }

    Type gen_type(int depth) {
        int r = uniform(0, depth <= 0 ? 2 : 7);
        switch (r) {
            case 0:
            case 1: return kInt;
            case 2: return chance(0.5) ? kBool : mk_tapp(mk_tconst("Vector"), gen_index(2));
            case 3:
            case 4: return mk_arrow(gen_type(depth - 1), gen_type(depth - 1));
            case 5:
            case 6: return mk_code(pool(uniform(0, 1)), gen_type(depth - 1));
            default: {
                StageVar b = pool(uniform(0, 1));
                return mk_forall(b, mk_code(b, gen_type(depth - 1)));
            }
        }
    }

    // A type equivalent to t whose indices are written differently, so that
    // checking an argument against t needs conversion.
    Type vary(const Type& t, const Stage& a) {
        switch (t->tag) {
            case TypeTag::Const: return t;
            case TypeTag::Pi: return mk_pi(t->name, vary(t->domain, a), vary(t->body, a));
            case TypeTag::App: {
                int r = uniform(0, 4);
                if (r == 0) return mk_tapp(t->body, mk_app(mk_lam("j", kInt, mk_var("j")), t->index));
                if (r == 1 && !a.empty()) return mk_tapp(t->body, mk_csp(a.back(), t->index));
                return t;
            }
            case TypeTag::Code: return mk_code(t->name, vary(t->body, a.push(t->name)));
            case TypeTag::Forall: return mk_forall(t->name, vary(t->body, a));
        }
        return t;
    }

    // --- terms ---------------------------------------------------------------

    std::vector<const EnvEntry*> vars_of(const TypeEnv& env, const Type& t, const Stage& a) const {
        std::vector<const EnvEntry*> out;
        for (const auto& e : env.entries()) {
            if (e.stage != a || !alpha_eq(e.type, t)) continue;
            if (env.find(e.var) != &e) continue;  // shadowed
            out.push_back(&e);
        }
        return out;
    }

    Name fresh_var() { return "v" + std::to_string(fresh_++); }

    // A binder for `∀β.σ` that satisfies T-Gen's side condition.
    std::pair<StageVar, Type> bindable(const TypeEnv& env, const Stage& a, const StageVar& beta, const Type& body) {
        NameSet taken = free_stage_vars(env);
        for (const auto& v : a.vars()) taken.insert(v);
        if (!taken.contains(beta)) return {beta, body};
        NameSet avoid = taken;
        for (const auto& v : free_stage_vars(body)) avoid.insert(v);
        for (const auto& p : cfg_.stage_pool)
            if (!avoid.contains(p)) return {p, subst_stage(body, beta, Stage{p})};
        StageVar g = fresh_name(beta, avoid);
        return {g, subst_stage(body, beta, Stage{g})};
    }

    Term literal_leaf(const Type& t) {
        if (t->tag == TypeTag::Const && t->name == "Int") return mk_int(uniform(0, 5));
        if (t->tag == TypeTag::Const && t->name == "Bool") return mk_const(chance(0.5) ? "true" : "false");
        return nullptr;
    }

    Term vector_leaf(const TypeEnv& env, const Type& t, const Stage& a) {
        Term canon = checker_.canonical(t->index);
        if (!alpha_eq(canon, t->index)) {
            trace_.push_back("T-Conv");
            Type ct = mk_tapp(t->body, canon);
            return mk_app(identity(t), leaf(env, ct, a));
        }
        if (auto n = int_value(canon); n && *n == 0) {
            trace_.push_back("T-Const");
            return mk_const("nil");
        }
        Term pred = canon->fun->arg;  // canon = add pred 1
        trace_.push_back("T-App");
        return mk_apps(mk_const("cons"),
                       {pred, mk_int(uniform(0, 5)), leaf(env, mk_tapp(t->body, pred), a)});
    }

    Term identity(const Type& t) {
        Name v = fresh_var();
        return mk_lam(v, t, mk_var(v));
    }

    Term leaf(const TypeEnv& env, const Type& t, const Stage& a) {
        auto vs = vars_of(env, t, a);
        if (!vs.empty() && chance(0.5)) {
            trace_.push_back("T-Var");
            return mk_var(vs[static_cast<std::size_t>(uniform(0, static_cast<int>(vs.size()) - 1))]->var);
        }
        if (Term lit = literal_leaf(t)) {
            trace_.push_back("T-Const");
            return lit;
        }
        switch (t->tag) {
            case TypeTag::App: return vector_leaf(env, t, a);
            case TypeTag::Pi: {
                trace_.push_back("T-Abs");
                Name x = fresh_var();
                return mk_lam(x, t->domain, leaf(env.extend(x, t->domain, a), t->body, a));
            }
            case TypeTag::Code:
                trace_.push_back("T-TB");
                return mk_bracket(t->name, leaf(env, t->body, a.push(t->name)));
            case TypeTag::Forall: {
                trace_.push_back("T-Gen");
                auto [b, body] = bindable(env, a, t->name, t->body);
                return mk_stage_lam(b, leaf(env, body, a));
            }
            default: break;
        }
        throw std::logic_error("generator: no leaf for type " + pretty(t));
    }

    Term term(const TypeEnv& env, const Type& t, const Stage& a, int depth) {
        if (depth <= 0) return leaf(env, t, a);
        std::vector<Option> opts;
        auto add = [&](const char* key, double w, std::function<Term()> f) {
            double weighted = w * weight(key);
            if (weighted > 0) opts.emplace_back(weighted, std::move(f));
        };
        const int d = depth - 1;

        auto vs = vars_of(env, t, a);
        if (!vs.empty())
            add("var", 2, [&, vs] {
                trace_.push_back("T-Var");
                return mk_var(vs[static_cast<std::size_t>(uniform(0, static_cast<int>(vs.size()) - 1))]->var);
            });

        if (t->tag == TypeTag::Const && t->name == "Int") {
            add("const", 1, [&] {
                trace_.push_back("T-App");
                static const char* ops[] = {"add", "sub", "mul"};
                return mk_apps(mk_const(ops[uniform(0, 2)]), {term(env, kInt, a, d), term(env, kInt, a, d)});
            });
            add("const", 0.5, [&] {
                trace_.push_back("T-App");
                Term n = gen_index(1);
                Type v = mk_tapp(mk_tconst("Vector"), mk_apps(mk_const("add"), {n, mk_int(1)}));
                return mk_apps(mk_const("head"), {n, term(env, v, a, d)});
            });
        }
        if (t->tag == TypeTag::Const && t->name == "Bool")
            add("const", 1, [&] {
                trace_.push_back("T-App");
                return mk_apps(mk_const("eq"), {term(env, kInt, a, d), term(env, kInt, a, d)});
            });
        if (t->tag == TypeTag::App && t->body->tag == TypeTag::Const && t->body->name == "Vector") {
            const Term& idx = t->index;
            if (idx->tag == TermTag::App && idx->fun->tag == TermTag::App && idx->fun->fun->tag == TermTag::Const &&
                idx->fun->fun->name == "add" && int_value(idx->arg) == 1)
                add("const", 1.5, [&] {
                    trace_.push_back("T-App");
                    Term n = idx->fun->arg;
                    return mk_apps(mk_const("cons"),
                                   {n, term(env, kInt, a, d), term(env, mk_tapp(t->body, n), a, d)});
                });
            if (closed_indices(t))
                add("const", 0.5, [&] {
                    trace_.push_back("T-App");
                    Type longer = mk_tapp(t->body, mk_apps(mk_const("add"), {idx, mk_int(1)}));
                    return mk_apps(mk_const("tail"), {idx, term(env, longer, a, d)});
                });
        }

        if (t->tag == TypeTag::Pi)
            add("lam", 3, [&] {
                trace_.push_back("T-Abs");
                Name x = fresh_var();
                return mk_lam(x, t->domain, term(env.extend(x, t->domain, a), t->body, a, d));
            });

        add("app", 2, [&] {
            trace_.push_back("T-App");
            Type s;
            std::vector<const EnvEntry*> here;
            for (const auto& e : env.entries())
                if (e.stage == a) here.push_back(&e);
            if (!here.empty() && chance(0.4))
                s = here[static_cast<std::size_t>(uniform(0, static_cast<int>(here.size()) - 1))]->type;
            else
                s = gen_type(1);
            Term f = term(env, mk_arrow(s, t), a, d);
            Type s2 = s;
            if (chance(0.5 * weight("conv"))) {
                s2 = vary(s, a);
                if (!alpha_eq(s2, s)) trace_.push_back("T-Conv");
            }
            return mk_app(f, term(env, s2, a, d));
        });

        if (t->tag == TypeTag::Code)
            add("bracket", 3, [&] {
                trace_.push_back("T-TB");
                return mk_bracket(t->name, term(env, t->body, a.push(t->name), d));
            });

        if (!a.empty())
            add("escape", 1.5, [&] {
                trace_.push_back("T-TBL");
                return mk_escape(a.back(), term(env, mk_code(a.back(), t), a.pop(), d));
            });

        if (t->tag == TypeTag::Forall)
            add("stage-lam", 3, [&] {
                trace_.push_back("T-Gen");
                auto [b, body] = bindable(env, a, t->name, t->body);
                return mk_stage_lam(b, term(env, body, a, d));
            });

        // Stage application: run (@[]) or instantiate at a pool variable.
        {
            NameSet taken = free_stage_vars(env);
            for (const auto& v : a.vars()) taken.insert(v);
            NameSet in_t = free_stage_vars(t);
            std::vector<StageVar> usable;
            for (const auto& p : cfg_.stage_pool)
                if (!taken.contains(p) && !in_t.contains(p)) usable.push_back(p);
            if (!usable.empty()) {
                StageVar b = usable[static_cast<std::size_t>(uniform(0, static_cast<int>(usable.size()) - 1))];
                if (closed_indices(t))
                    add("stage-app", 1.5, [&, b] {
                        trace_.push_back("T-Ins");
                        return mk_stage_app(term(env, mk_forall(b, mk_code(b, t)), a, d), {});
                    });
                for (const auto& g : in_t) {
                    if (g == b) continue;
                    // Abstracting g must leave a type that still kinds here;
                    // `Vector (%g n)` at a stage not ending in b does not.
                    Type gen = mk_forall(b, subst_stage(t, g, Stage{b}));
                    try {
                        checker_.infer_kind(env, gen, a);
                    } catch (const TypeError&) {
                        break;
                    }
                    add("stage-app", 1, [&, gen, g] {
                        trace_.push_back("T-Ins");
                        return mk_stage_app(term(env, gen, a, d), Stage{g});
                    });
                    break;
                }
            }
        }

        if (!a.empty() && closed_indices(t) && free_vars(t).empty()) {
            bool lifts = false;
            try {
                lifts = alpha_eq(lift_type(t, a.back()), t);
            } catch (const TypeError&) {
            }
            if (lifts)
                add("csp", 1.5, [&] {
                    trace_.push_back("T-Csp");
                    return mk_csp(a.back(), term(env, t, a.pop(), d));
                });
        }

        if (opts.empty()) return leaf(env, t, a);
        double total = 0;
        for (const auto& o : opts) total += o.first;
        double pick = std::uniform_real_distribution<double>(0, total)(rng_);
        for (const auto& o : opts) {
            if (pick < o.first) return o.second();
            pick -= o.first;
        }
        return opts.back().second();
    }
};

}  // namespace

GeneratedCase gen_typed(const GenConfig& config) {
    if (config.max_depth < 1) throw std::invalid_argument("gen_typed: max_depth must be at least 1");
    if (config.stage_pool.empty()) throw std::invalid_argument("gen_typed: empty stage pool");
    for (const auto& [k, w] : config.weights)
        if (w < 0) throw std::invalid_argument("gen_typed: negative weight for " + k);
    Gen g(config);
    return g.run();
}

}  // namespace lmd
