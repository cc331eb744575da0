// Brute-force decomposition, written directly from the grammars of values,
// redexes and evaluation contexts. Deliberately independent of
// reduction/staged.cpp: it tries every position instead of steering.

#include "lmd/kernel.hpp"
#include "lmd/testkit.hpp"

namespace lmd {

namespace {

bool is_literal(const Term& t) { return t->tag == TermTag::Const && is_int_literal(t->name); }

// δ-redex shape: the spine head is a prelude operator with literal or cons
// arguments. Only consulted when δ is on.
bool delta_shape(const Term& t) {
    std::vector<Term> args;
    Term head = t;
    while (head->tag == TermTag::App) {
        args.insert(args.begin(), head->arg);
        head = head->fun;
    }
    if (head->tag != TermTag::Const || args.size() != 2) return false;
    const Name& op = head->name;
    if (op == "add" || op == "sub" || op == "mul" || op == "eq") {
        if (!is_literal(args[0]) || !is_literal(args[1])) return false;
        if (op == "eq") return true;
        // Overflowing arithmetic does not contract.
        long long r = 0;
        long long x = *int_value(args[0]);
        long long y = *int_value(args[1]);
        if (op == "add") return !__builtin_add_overflow(x, y, &r);
        if (op == "sub") return !__builtin_sub_overflow(x, y, &r);
        return !__builtin_mul_overflow(x, y, &r);
    }
    if (op == "head" || op == "tail") {
        std::size_t n = 0;
        Term v = args[1];
        while (v->tag == TermTag::App) {
            v = v->fun;
            ++n;
        }
        return v->tag == TermTag::Const && v->name == "cons" && n == 3;
    }
    return false;
}

bool value(const Term& m, const Stage& a, const ReductionOptions& opts);

// c v1 ... vn (term or stage arguments), with no δ-redex along the spine.
bool constant_spine(const Term& m, const Stage& a, const ReductionOptions& opts) {
    Term cur = m;
    while (cur->tag == TermTag::App || cur->tag == TermTag::StageApp) {
        if (cur->tag == TermTag::App) {
            if (opts.delta && delta_shape(cur)) return false;
            if (!value(cur->arg, a, opts)) return false;
        }
        cur = cur->fun;
    }
    return cur->tag == TermTag::Const;
}

bool value(const Term& m, const Stage& a, const ReductionOptions& opts) {
    if (a.empty()) {
        switch (m->tag) {
            case TermTag::Lam: return true;
            case TermTag::Bracket: return value(m->body, Stage{m->name}, opts);
            case TermTag::StageLam: return value(m->body, a, opts);
            case TermTag::Const:
            case TermTag::App:
            case TermTag::StageApp: return constant_spine(m, a, opts);
            default: return false;
        }
    }
    switch (m->tag) {
        case TermTag::Var:
        case TermTag::Const: return true;
        case TermTag::Lam:
        case TermTag::StageLam: return value(m->body, a, opts);
        case TermTag::App: return value(m->fun, a, opts) && value(m->arg, a, opts);
        case TermTag::StageApp: return value(m->fun, a, opts);
        case TermTag::Bracket: return value(m->body, a.push(m->name), opts);
        case TermTag::Escape: return a.size() >= 2 && a.back() == m->name && value(m->body, a.pop(), opts);
        case TermTag::Csp: return a.back() == m->name && value(m->body, a.pop(), opts);
    }
    return false;
}

std::optional<RuleTag> redex_at(const Term& r, const Stage& b, const ReductionOptions& opts) {
    const Stage eps;
    if (b.empty()) {
        if (r->tag == TermTag::App && r->fun->tag == TermTag::Lam && value(r->arg, eps, opts)) return RuleTag::Beta;
        if (r->tag == TermTag::StageApp && r->fun->tag == TermTag::StageLam && value(r->fun->body, eps, opts))
            return RuleTag::StageBeta;
        if (opts.delta && r->tag == TermTag::App && delta_shape(r) && value(r->fun, eps, opts) &&
            value(r->arg, eps, opts))
            return RuleTag::Delta;
        return std::nullopt;
    }
    if (b.size() == 1 && r->tag == TermTag::Escape && r->name == b[0] && r->body->tag == TermTag::Bracket &&
        r->body->name == b[0] && value(r->body->body, b, opts))
        return RuleTag::Diamond;
    return std::nullopt;
}

struct Search {
    const Term& root;
    const Stage& root_stage;
    const ReductionOptions& opts;
    std::vector<Decomposition> out;
    Path path;

    // `m` sits in a valid context of the root at stage `a`; consider the hole
    // here and every way of extending the context one level deeper.
    void visit(const Term& m, const Stage& a) {
        if (a.size() <= 1)
            if (auto rule = redex_at(m, a, opts)) out.push_back({root_stage, a, root, path, m, *rule});
        if (a.empty()) {
            switch (m->tag) {
                case TermTag::App:
                    go(m->fun, 0, a);
                    if (value(m->fun, a, opts)) go(m->arg, 1, a);
                    return;
                case TermTag::Bracket: go(m->body, 0, Stage{m->name}); return;
                case TermTag::StageLam: go(m->body, 0, a); return;
                case TermTag::StageApp: go(m->fun, 0, a); return;
                default: return;
            }
        }
        switch (m->tag) {
            case TermTag::Lam:
            case TermTag::StageLam: go(m->body, 0, a); return;
            case TermTag::App:
                go(m->fun, 0, a);
                if (value(m->fun, a, opts)) go(m->arg, 1, a);
                return;
            case TermTag::StageApp: go(m->fun, 0, a); return;
            case TermTag::Bracket: go(m->body, 0, a.push(m->name)); return;
            case TermTag::Escape:
            case TermTag::Csp:
                if (a.back() == m->name) go(m->body, 0, a.pop());
                return;
            default: return;
        }
    }

    void go(const Term& m, std::uint8_t i, const Stage& a) {
        path.push_back(i);
        visit(m, a);
        path.pop_back();
    }
};

}  // namespace

bool oracle_is_value(const Term& m, const Stage& a, const ReductionOptions& opts) { return value(m, a, opts); }

std::vector<Decomposition> oracle_decompose_all(const Term& m, const Stage& a, const ReductionOptions& opts) {
    Search s{m, a, opts, {}, {}};
    s.visit(m, a);
    return std::move(s.out);
}

}  // namespace lmd
