#include <sstream>

#include "lmd/surface.hpp"

namespace lmd {

namespace {

// Term precedence: 0 binder, 1 '=', 2 '+ -', 3 '*', 4 application, 5 atom.
// Type precedence: 0 binder or arrow, 1 type application, 2 atom.

const char* infix_symbol(const Name& c) {
    if (c == "add") return "+";
    if (c == "sub") return "-";
    if (c == "mul") return "*";
    if (c == "eq") return "=";
    return nullptr;
}

int infix_level(const Name& c) {
    if (c == "eq") return 1;
    if (c == "mul") return 3;
    return 2;
}

class Printer {
public:
    std::string term(const Term& t, int ctx) {
        std::ostringstream os;
        emit(os, t, ctx);
        return os.str();
    }

    void emit(std::ostream& os, const Term& t, int ctx) {
        int level = term_level(t);
        bool paren = level < ctx;
        if (paren) os << '(';
        switch (t->tag) {
            case TermTag::Const:
                if (!t->name.empty() && t->name[0] == '-' && !paren)
                    os << '(' << t->name << ')';
                else
                    os << t->name;
                break;
            case TermTag::Var: os << t->name; break;
            case TermTag::Lam:
                os << '\\' << t->name << ':';
                emit(os, t->annot, 0);
                os << ". ";
                emit(os, t->body, 0);
                break;
            case TermTag::StageLam:
                os << "/\\" << t->name << ". ";
                emit(os, t->body, 0);
                break;
            case TermTag::App: {
                if (const char* sym = infix(t)) {
                    int lv = infix_level(t->fun->fun->name);
                    emit(os, t->fun->arg, lv);
                    os << ' ' << sym << ' ';
                    emit(os, t->arg, lv + 1);
                } else {
                    emit(os, t->fun, 4);
                    os << ' ';
                    emit(os, t->arg, 5);
                }
                break;
            }
            case TermTag::StageApp:
                emit(os, t->fun, 4);
                os << " @[";
                for (std::size_t i = 0; i < t->stage.size(); ++i) os << (i ? " " : "") << t->stage[i];
                os << ']';
                break;
            case TermTag::Bracket:
                os << "|>" << t->name << ' ';
                emit(os, t->body, 5);
                break;
            case TermTag::Escape:
                os << "<|" << t->name << ' ';
                emit(os, t->body, 5);
                break;
            case TermTag::Csp:
                os << '%' << t->name << ' ';
                emit(os, t->body, 5);
                break;
        }
        if (paren) os << ')';
    }

    void emit(std::ostream& os, const Type& t, int ctx) {
        int level = type_level(t);
        bool paren = level < ctx;
        if (paren) os << '(';
        switch (t->tag) {
            case TypeTag::Const: os << t->name; break;
            case TypeTag::Pi:
                if (!free_vars(t->body).contains(t->name)) {
                    emit(os, t->domain, 1);
                    os << " -> ";
                    emit(os, t->body, 0);
                } else {
                    os << "Pi " << t->name << ':';
                    emit(os, t->domain, 0);
                    os << ". ";
                    emit(os, t->body, 0);
                }
                break;
            case TypeTag::Forall:
                os << "forall " << t->name << ". ";
                emit(os, t->body, 0);
                break;
            case TypeTag::App:
                emit(os, t->body, 1);
                os << ' ';
                emit(os, t->index, 5);
                break;
            case TypeTag::Code:
                os << "|>" << t->name << ' ';
                emit(os, t->body, 2);
                break;
        }
        if (paren) os << ')';
    }

    void emit(std::ostream& os, const Kind& k) {
        if (k->tag == KindTag::Star) {
            os << '*';
            return;
        }
        if (!free_vars(k->body).contains(k->name)) {
            emit(os, k->domain, 1);
            os << " -> ";
        } else {
            os << "Pi " << k->name << ':';
            emit(os, k->domain, 0);
            os << ". ";
        }
        emit(os, k->body);
    }

private:
    static const char* infix(const Term& t) {
        if (t->tag != TermTag::App || t->fun->tag != TermTag::App) return nullptr;
        const auto& head = t->fun->fun;
        if (head->tag != TermTag::Const) return nullptr;
        return infix_symbol(head->name);
    }

    static int term_level(const Term& t) {
        switch (t->tag) {
            case TermTag::Lam:
            case TermTag::StageLam: return 0;
            case TermTag::App:
                if (infix(t)) return infix_level(t->fun->fun->name);
                return 4;
            case TermTag::StageApp: return 4;
            default: return 5;
        }
    }

    static int type_level(const Type& t) {
        switch (t->tag) {
            case TypeTag::Pi:
            case TypeTag::Forall: return 0;
            case TypeTag::App: return 1;
            default: return 2;
        }
    }
};

}  // namespace

std::string pretty(const Term& t) {
    std::ostringstream os;
    Printer{}.emit(os, t, 0);
    return os.str();
}

std::string pretty(const Type& t) {
    std::ostringstream os;
    Printer{}.emit(os, t, 0);
    return os.str();
}

std::string pretty(const Kind& k) {
    std::ostringstream os;
    Printer{}.emit(os, k);
    return os.str();
}

std::string pretty(const Stage& s) {
    if (s.empty()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + s[i];
    return out;
}

std::string pretty(const Signature& sig) {
    std::ostringstream os;
    for (const auto& d : sig.decls()) {
        if (d.sort == Declaration::Sort::TypeConst)
            os << "type " << d.name << " :: " << pretty(d.kind) << ";\n";
        else
            os << "const " << d.name << " : " << pretty(d.type) << ";\n";
    }
    return os.str();
}

std::string pretty(const TypeEnv& env) {
    if (env.empty()) return "∅";
    std::string out;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const auto& e = env.entries()[i];
        out += (i ? ", " : "") + e.var + ":" + pretty(e.type) + "@" + pretty(e.stage);
    }
    return out;
}

}  // namespace lmd
