#include <cctype>
#include <sstream>

#include "lmd/surface.hpp"

namespace lmd {

std::string Diagnostic::render(std::string_view path) const {
    std::ostringstream os;
    if (!path.empty()) os << path << ':';
    os << span.line << ':' << span.column << ": ";
    switch (severity) {
        case Severity::Error: os << "error: "; break;
        case Severity::Warning: os << "warning: "; break;
        case Severity::Note: os << "note: "; break;
    }
    os << message;
    for (const auto& frame : trace) os << "\n    in " << frame;
    return os.str();
}

ParseError::ParseError(Diagnostic d) : std::runtime_error(d.render()), diag_(std::move(d)) {}

namespace {

enum class Tok {
    Ident,
    Int,
    LParen,
    RParen,
    Lambda,     // '\'
    BigLambda,  // '/\'
    Dot,
    Colon,
    DColon,
    Semi,
    Arrow,
    Bracket,  // |>
    Escape,   // <|
    Percent,
    At,
    LBrack,
    RBrack,
    Plus,
    Minus,
    Star,
    Equals,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
    std::size_t offset = 0;
};

[[noreturn]] void fail(SourceSpan span, std::string message) {
    throw ParseError(Diagnostic{Diagnostic::Severity::Error, span, std::move(message), {}});
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto emit = [&](Tok kind, std::size_t len) {
        out.push_back({kind, std::string(src.substr(i, len)), {line, col, static_cast<int>(len)}, i});
        advance(len);
    };
    while (i < src.size()) {
        char c = src[i];
        char next = i + 1 < src.size() ? src[i + 1] : '\0';
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            advance(1);
            continue;
        }
        if (c == '-' && next == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (ident_start(c)) {
            std::size_t len = 1;
            while (i + len < src.size() && ident_char(src[i + len])) ++len;
            emit(Tok::Ident, len);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t len = 1;
            while (i + len < src.size() && std::isdigit(static_cast<unsigned char>(src[i + len]))) ++len;
            if (len > 18) fail({line, col, static_cast<int>(len)}, "integer literal out of range");
            emit(Tok::Int, len);
            continue;
        }
        switch (c) {
            case '(': emit(Tok::LParen, 1); continue;
            case ')': emit(Tok::RParen, 1); continue;
            case '\\': emit(Tok::Lambda, 1); continue;
            case '.': emit(Tok::Dot, 1); continue;
            case ';': emit(Tok::Semi, 1); continue;
            case '%': emit(Tok::Percent, 1); continue;
            case '@': emit(Tok::At, 1); continue;
            case '[': emit(Tok::LBrack, 1); continue;
            case ']': emit(Tok::RBrack, 1); continue;
            case '+': emit(Tok::Plus, 1); continue;
            case '*': emit(Tok::Star, 1); continue;
            case '=': emit(Tok::Equals, 1); continue;
            case ':': emit(next == ':' ? Tok::DColon : Tok::Colon, next == ':' ? 2 : 1); continue;
            case '-': emit(next == '>' ? Tok::Arrow : Tok::Minus, next == '>' ? 2 : 1); continue;
            case '/':
                if (next == '\\') {
                    emit(Tok::BigLambda, 2);
                    continue;
                }
                break;
            case '|':
                if (next == '>') {
                    emit(Tok::Bracket, 2);
                    continue;
                }
                break;
            case '<':
                if (next == '|') {
                    emit(Tok::Escape, 2);
                    continue;
                }
                break;
            default: break;
        }
        fail({line, col, 1}, "unknown token");
    }
    out.push_back({Tok::End, "", {line, col, 0}, src.size()});
    return out;
}

bool is_keyword(const std::string& s) { return s == "Pi" || s == "forall"; }

constexpr int kMaxDepth = 400;

class Parser {
public:
    Parser(std::string_view src, NameSet constants) : toks_(lex(src)), constants_(std::move(constants)) {}

    bool at_end() const { return peek().kind == Tok::End; }
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }

    void expect_end() {
        if (!at_end()) fail(peek().span, unexpected("end of input"));
    }

    NameSet& constants() { return constants_; }

    // --- terms ---

    Term term() {
        DepthGuard g(*this);
        if (accept(Tok::Lambda)) {
            auto var = binder_name();
            expect(Tok::Colon, "':' after λ binder");
            auto annot = type();
            expect(Tok::Dot, "'.' after λ annotation");
            bound_.push_back(var);
            auto body = term();
            bound_.pop_back();
            return mk_lam(var, annot, body);
        }
        if (accept(Tok::BigLambda)) {
            auto a = stage_var();
            expect(Tok::Dot, "'.' after stage binder");
            return mk_stage_lam(a, term());
        }
        return infix_eq();
    }

    // --- types ---

    Type type() {
        DepthGuard g(*this);
        if (peek_keyword("Pi")) {
            ++pos_;
            auto var = binder_name();
            expect(Tok::Colon, "':' after Pi binder");
            auto dom = type();
            expect(Tok::Dot, "'.' after Pi domain");
            bound_.push_back(var);
            auto cod = type();
            bound_.pop_back();
            return mk_pi(var, dom, cod);
        }
        if (peek_keyword("forall")) {
            ++pos_;
            auto a = stage_var();
            expect(Tok::Dot, "'.' after forall binder");
            return mk_forall(a, type());
        }
        auto left = type_app();
        if (accept(Tok::Arrow)) return mk_arrow(left, type());
        return left;
    }

    Kind kind() {
        DepthGuard g(*this);
        if (accept(Tok::Star)) return mk_star();
        if (peek_keyword("Pi")) {
            ++pos_;
            auto var = binder_name();
            expect(Tok::Colon, "':' after Pi binder");
            auto dom = type();
            expect(Tok::Dot, "'.' after Pi domain");
            bound_.push_back(var);
            auto body = kind();
            bound_.pop_back();
            return mk_kpi(var, dom, body);
        }
        auto dom = type_app();
        expect(Tok::Arrow, "'->' or '*' in kind");
        return mk_kpi("_", dom, kind());
    }

    std::string ident(const char* what) {
        const auto& t = peek();
        if (t.kind != Tok::Ident || is_keyword(t.text)) fail(t.span, unexpected(what));
        ++pos_;
        return t.text;
    }

    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }

    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) fail(peek().span, unexpected(what));
        return toks_[pos_++];
    }

    bool peek_keyword(const char* kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

    std::string unexpected(const std::string& what) const {
        const auto& t = peek();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        if (t.kind == Tok::RParen || t.kind == Tok::RBrack) return "unbalanced delimiter " + got + ", expected " + what;
        return "unexpected " + got + ", expected " + what;
    }

private:
    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) fail(p.peek().span, "expression nested too deeply");
        }
        ~DepthGuard() { --p.depth_; }
        DepthGuard(const DepthGuard&) = delete;
        DepthGuard& operator=(const DepthGuard&) = delete;
    };

    std::string binder_name() {
        auto n = ident("variable name");
        if (n == "_") fail(toks_[pos_ - 1].span, "'_' cannot be bound");
        return n;
    }

    StageVar stage_var() { return ident("stage variable"); }

    Term infix_eq() {
        auto left = infix_sum();
        while (accept(Tok::Equals)) left = mk_apps(mk_const("eq"), {left, infix_sum()});
        return left;
    }

    Term infix_sum() {
        auto left = infix_prod();
        for (;;) {
            if (accept(Tok::Plus))
                left = mk_apps(mk_const("add"), {left, infix_prod()});
            else if (accept(Tok::Minus))
                left = mk_apps(mk_const("sub"), {left, infix_prod()});
            else
                return left;
        }
    }

    Term infix_prod() {
        auto left = application();
        while (accept(Tok::Star)) left = mk_apps(mk_const("mul"), {left, application()});
        return left;
    }

    bool atom_start() const {
        switch (peek().kind) {
            case Tok::Ident: return !is_keyword(peek().text);
            case Tok::Int:
            case Tok::LParen:
            case Tok::Bracket:
            case Tok::Escape:
            case Tok::Percent: return true;
            default: return false;
        }
    }

    Term application() {
        Term head;
        const auto& t = peek();
        if (t.kind == Tok::Minus && peek(1).kind == Tok::Int && peek(1).offset == t.offset + 1) {
            pos_ += 2;
            head = mk_const("-" + toks_[pos_ - 1].text);
        } else {
            head = atom();
        }
        for (;;) {
            if (atom_start()) {
                head = mk_app(head, atom());
            } else if (peek().kind == Tok::At) {
                ++pos_;
                expect(Tok::LBrack, "'[' after '@'");
                std::vector<StageVar> vars;
                while (peek().kind == Tok::Ident) vars.push_back(stage_var());
                expect(Tok::RBrack, "']' closing stage");
                head = mk_stage_app(head, Stage(std::move(vars)));
            } else {
                return head;
            }
        }
    }

    Term atom() {
        DepthGuard g(*this);
        const auto& t = peek();
        switch (t.kind) {
            case Tok::Ident: {
                if (is_keyword(t.text)) break;
                ++pos_;
                if (t.text == "_") fail(t.span, "'_' is not a term");
                return resolve(t.text);
            }
            case Tok::Int: ++pos_; return mk_const(t.text);
            case Tok::LParen: {
                auto open = t.span;
                ++pos_;
                auto inner = term();
                if (!accept(Tok::RParen)) {
                    if (at_end()) fail(open, "unbalanced delimiter '(' is never closed");
                    fail(peek().span, unexpected("')'"));
                }
                return inner;
            }
            case Tok::Bracket: {
                ++pos_;
                auto a = stage_var();
                return mk_bracket(a, atom());
            }
            case Tok::Escape: {
                ++pos_;
                auto a = stage_var();
                return mk_escape(a, atom());
            }
            case Tok::Percent: {
                ++pos_;
                auto a = stage_var();
                return mk_csp(a, atom());
            }
            default: break;
        }
        fail(t.span, unexpected("a term"));
    }

    Term resolve(const std::string& name) const {
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
            if (*it == name) return mk_var(name);
        if (constants_.contains(name)) return mk_const(name);
        return mk_var(name);
    }

    Type type_app() {
        auto head = type_atom();
        while (atom_start()) head = mk_tapp(head, atom());
        return head;
    }

    Type type_atom() {
        DepthGuard g(*this);
        const auto& t = peek();
        if (t.kind == Tok::Ident && !is_keyword(t.text)) {
            ++pos_;
            return mk_tconst(t.text);
        }
        if (t.kind == Tok::LParen) {
            auto open = t.span;
            ++pos_;
            auto inner = type();
            if (!accept(Tok::RParen)) {
                if (at_end()) fail(open, "unbalanced delimiter '(' is never closed");
                fail(peek().span, unexpected("')'"));
            }
            return inner;
        }
        if (t.kind == Tok::Bracket) {
            ++pos_;
            auto a = stage_var();
            return mk_code(a, type_atom());
        }
        fail(t.span, unexpected("a type"));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    NameSet constants_;
    std::vector<Name> bound_;
    int depth_ = 0;
};

}  // namespace

Term parse_term(std::string_view text, const NameSet& constants) {
    Parser p(text, constants);
    auto t = p.term();
    p.expect_end();
    return t;
}

Type parse_type(std::string_view text, const NameSet& constants) {
    Parser p(text, constants);
    auto t = p.type();
    p.expect_end();
    return t;
}

Kind parse_kind(std::string_view text, const NameSet& constants) {
    Parser p(text, constants);
    auto k = p.kind();
    p.expect_end();
    return k;
}

const Directive* SourceFile::main() const {
    for (const auto& d : directives)
        if (d.sort == Directive::Sort::Main) return &d;
    return nullptr;
}

SourceFile parse_file(std::string text, std::string path, const NameSet& constants) {
    SourceFile file;
    file.path = std::move(path);
    file.text = std::move(text);
    Parser p(file.text, constants);
    while (!p.at_end()) {
        auto start = p.peek().span;
        auto head = p.ident("a directive (type, const, def or main)");
        Directive d{};
        d.span = start;
        if (head == "type") {
            d.sort = Directive::Sort::TypeDecl;
            d.name = p.ident("type constant name");
            p.expect(Tok::DColon, "'::' in type declaration");
            d.kind = p.kind();
        } else if (head == "const") {
            d.sort = Directive::Sort::ConstDecl;
            d.name = p.ident("constant name");
            p.expect(Tok::Colon, "':' in constant declaration");
            d.type = p.type();
            p.constants().insert(d.name);
        } else if (head == "def" || head == "main") {
            d.sort = head == "def" ? Directive::Sort::Def : Directive::Sort::Main;
            if (head == "def") d.name = p.ident("definition name");
            if (p.accept(Tok::Colon)) d.type = p.type();
            p.expect(Tok::Equals, "'=' in definition");
            d.term = p.term();
        } else {
            fail(start, "unknown directive '" + head + "', expected type, const, def or main");
        }
        p.expect(Tok::Semi, "';' ending the directive");
        d.span.length = static_cast<int>(head.size());
        file.directives.push_back(std::move(d));
    }
    return file;
}

Signature parse_signature(std::string_view text, const NameSet& constants) {
    auto file = parse_file(std::string(text), {}, constants);
    Signature sig;
    for (const auto& d : file.directives) {
        switch (d.sort) {
            case Directive::Sort::TypeDecl: sig.add_type_const(d.name, d.kind); break;
            case Directive::Sort::ConstDecl: sig.add_const(d.name, d.type); break;
            default: fail(d.span, "only type and const declarations are allowed in a signature");
        }
    }
    return sig;
}

NameSet constant_names(const Signature& sig) {
    NameSet out;
    for (const auto& d : sig.decls())
        if (d.sort == Declaration::Sort::Const) out.insert(d.name);
    return out;
}

}  // namespace lmd
