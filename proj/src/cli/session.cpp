#include "lmd/session.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lmd/kernel.hpp"
#include "lmd/prelude.hpp"

namespace lmd {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SessionError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string prelude_text() {
    if (const char* p = std::getenv("LMD_PRELUDE_PATH"); p && *p) return read_file(p);
    return std::string(prelude_source());
}

Session::Session(SessionOptions opts) : opts_(std::move(opts)) {
    if (opts_.prelude) add_signature_text(prelude_text());
    for (const auto& f : opts_.signature_files) add_signature_text(read_file(f));
    if (!sig_.decls().empty()) Checker(sig_).wf_signature();
}

void Session::add_signature_text(std::string_view text) {
    Signature more = parse_signature(text, constant_names(sig_));
    for (const auto& d : more.decls()) {
        if (d.sort == Declaration::Sort::TypeConst)
            sig_.add_type_const(d.name, d.kind);
        else
            sig_.add_const(d.name, d.type);
    }
}

Term Session::parse(std::string_view text) const { return parse_term(text, constant_names(sig_)); }

Type Session::parse_type_text(std::string_view text) const { return parse_type(text, constant_names(sig_)); }

Term Session::inline_defs(const Term& t) const {
    Term out = t;
    // Later definitions may mention earlier ones only after inlining, so a
    // single pass from newest to oldest reaches everything.
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) out = subst(out, *it, defs_.at(*it).term);
    return out;
}

Type Session::inline_defs(const Type& t) const {
    Type out = t;
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) out = subst(out, *it, defs_.at(*it).term);
    return out;
}

Definition Session::check(const Term& term, const std::optional<Type>& ascription) {
    Checker checker(sig_, check_options());
    Term m = inline_defs(term);
    Definition d;
    d.term = m;
    if (ascription) {
        Type want = inline_defs(*ascription);
        checker.infer_kind({}, want, {});
        d.derivation = checker.check_type({}, m, want, {});
        d.type = want;
    } else {
        auto [t, der] = checker.infer_type({}, m, {});
        d.type = t;
        d.derivation = std::move(der);
    }
    return d;
}

const Definition& Session::define(const Name& name, const Term& term, const std::optional<Type>& ascription) {
    if (sig_.declares(name)) throw SessionError("'" + name + "' is already declared in the signature");
    Definition d = check(term, ascription);
    d.name = name;
    if (!defs_.contains(name)) order_.push_back(name);
    return defs_[name] = std::move(d);
}

std::vector<Definition> Session::load_source(std::string text, const std::string& path) {
    SourceFile file = parse_file(std::move(text), path, constant_names(sig_));
    bool declared = false;
    for (const auto& dir : file.directives) {
        if (dir.sort == Directive::Sort::TypeDecl) {
            sig_.add_type_const(dir.name, dir.kind);
            declared = true;
        } else if (dir.sort == Directive::Sort::ConstDecl) {
            sig_.add_const(dir.name, dir.type);
            declared = true;
        }
    }
    if (declared) Checker(sig_).wf_signature();

    std::vector<Definition> out;
    for (const auto& dir : file.directives) {
        if (dir.sort != Directive::Sort::Def && dir.sort != Directive::Sort::Main) continue;
        std::optional<Type> asc;
        if (dir.type) asc = dir.type;
        try {
            if (dir.sort == Directive::Sort::Def) {
                out.push_back(define(dir.name, dir.term, asc));
            } else {
                Definition d = check(dir.term, asc);
                d.name = "main";
                main_ = d;
                out.push_back(std::move(d));
            }
        } catch (TypeError& e) {
            if (!e.span()) e.set_span(dir.span);
            throw;
        }
    }
    return out;
}

std::vector<Definition> Session::load_file(const std::string& path) { return load_source(read_file(path), path); }

const Definition& Session::require_main() const {
    if (!main_) throw SessionError("no `main` in the loaded program");
    return *main_;
}

EvalResult Session::eval(const Term& checked) const {
    return eval_staged(checked, opts_.max_steps, reduction_options());
}

NormalizeResult Session::normalize(const Term& checked, Strategy strategy) const {
    return lmd::normalize(checked, strategy, opts_.max_steps, reduction_options());
}

std::pair<StlcTerm, StlcType> Session::natural(const Definition& d) const {
    StlcTerm t = nat_term(d.term);
    StlcType ty = stlc_check(nat_signature(sig_), t);
    StlcType want = nat_type(d.type);
    if (!stlc_eq(ty, want))
        throw StlcError("translation has type " + pretty(ty) + " but the term's type translates to " + pretty(want));
    return {t, ty};
}

}  // namespace lmd
