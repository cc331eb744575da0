#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <json.hpp>

#include "lmd/cli.hpp"
#include "lmd/session.hpp"
#include "lmd/testkit.hpp"

namespace lmd {

namespace {

using nlohmann::json;

struct Flags {
    bool prelude = false;
    std::size_t max_steps = 100000;
    std::vector<std::string> signatures;
    bool trace = false;
    bool json = false;
    bool dump_derivation = false;
    std::string strategy = "lo";
    std::string file;
    // test
    std::string suite = "all";
    std::size_t n = 100;
    std::uint64_t seed = 1;
    std::string out_dir = "counterexamples";
};

Strategy parse_strategy(const std::string& s) {
    if (s == "lo") return Strategy::leftmost_outermost();
    if (s == "staged") return Strategy::staged();
    if (s.rfind("random:", 0) == 0) {
        try {
            return Strategy::random(std::stoull(s.substr(7)));
        } catch (const std::exception&) {
        }
    }
    throw SessionError("unknown strategy '" + s + "' (expected lo, staged or random:SEED)");
}

SessionOptions session_options(const Flags& f) {
    SessionOptions o;
    o.prelude = f.prelude;
    o.max_steps = f.max_steps;
    o.signature_files = f.signatures;
    return o;
}

void print_trace(const std::vector<ReductionStep>& steps, std::ostream& out) {
    for (const auto& s : steps) out << trace_json_line(s) << '\n';
}

void print_typed(const Definition& d, const Flags& f, std::ostream& out) {
    if (f.json)
        out << json{{"name", d.name}, {"type", pretty(d.type)}, {"stage", "ε"}}.dump() << '\n';
    else
        out << d.name << " : " << pretty(d.type) << " @ ε\n";
}

int cmd_check(const Flags& f, std::ostream& out) {
    Session s(session_options(f));
    auto defs = s.load_file(f.file);
    for (const auto& d : defs) print_typed(d, f, out);
    if (f.dump_derivation && !defs.empty()) {
        const Definition& d = defs.back();
        if (std::string bad = validate(d.derivation, s.signature(), s.check_options()); !bad.empty())
            throw std::logic_error("derivation does not validate: " + bad);
        out << derivation_json(d.derivation) << '\n';
    }
    return kExitOk;
}

int cmd_eval(const Flags& f, std::ostream& out) {
    Session s(session_options(f));
    s.load_file(f.file);
    EvalResult r = s.eval(s.require_main().term);
    if (f.trace) print_trace(r.steps, out);
    if (f.json)
        out << json{{"value", pretty(r.value)}, {"steps", r.steps.size()}}.dump() << '\n';
    else
        out << pretty(r.value) << '\n';
    return kExitOk;
}

int cmd_normalize(const Flags& f, std::ostream& out) {
    Session s(session_options(f));
    Strategy strategy = parse_strategy(f.strategy);
    s.load_file(f.file);
    NormalizeResult r = s.normalize(s.require_main().term, strategy);
    if (f.trace) print_trace(r.steps, out);
    if (f.json)
        out << json{{"normal_form", pretty(r.term)}, {"steps", r.steps.size()}}.dump() << '\n';
    else
        out << pretty(r.term) << '\n';
    return kExitOk;
}

int cmd_natural(const Flags& f, std::ostream& out) {
    Session s(session_options(f));
    s.load_file(f.file);
    auto [t, ty] = s.natural(s.require_main());
    if (f.json)
        out << json{{"term", pretty(t)}, {"type", pretty(ty)}}.dump() << '\n';
    else
        out << pretty(t) << " : " << pretty(ty) << '\n';
    return kExitOk;
}

int cmd_test(const Flags& f, std::ostream& out, std::ostream& err) {
    std::vector<std::string> names;
    if (f.suite == "all")
        names = suite_names();
    else
        names.push_back(f.suite);
    bool failed = false;
    for (const auto& name : names) {
        SuiteReport r = run_suite(name, f.n, f.seed);
        out << r.summary() << '\n';
        if (r.failed == 0) continue;
        failed = true;
        for (const auto& p : write_counterexamples(r, f.out_dir)) err << "counterexample: " << p << '\n';
    }
    return failed ? kExitUser : kExitOk;
}

void report(const std::exception& e, const std::string& path, const Flags& f, std::ostream& out, std::ostream& err) {
    Diagnostic d;
    bool located = true;
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
        d = pe->diagnostic();
    } else if (const auto* te = dynamic_cast<const TypeError*>(&e)) {
        d = te->diagnostic();
    } else {
        d.message = e.what();
        located = false;
    }
    if (f.json) {
        json j{{"message", d.message}, {"trace", d.trace}};
        if (located) {
            j["line"] = d.span.line;
            j["column"] = d.span.column;
        }
        out << json{{"error", j}}.dump() << '\n';
        return;
    }
    if (located)
        err << d.render(path) << '\n';
    else
        err << "error: " << d.message << '\n';
}

// Runs one command body, mapping failures onto exit codes.
template <typename F>
int guarded(const Flags& f, std::ostream& out, std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        report(e, f.file, f, out, err);
    } catch (const TypeError& e) {
        report(e, f.file, f, out, err);
    } catch (const SessionError& e) {
        report(e, {}, f, out, err);
    } catch (const StepBudgetExceeded& e) {
        report(e, {}, f, out, err);
    } catch (const std::invalid_argument& e) {
        report(e, {}, f, out, err);
    } catch (const Stuck& e) {
        err << "internal error: a checked term got stuck: " << e.what() << '\n';
        return kExitInternal;
    } catch (const StlcError& e) {
        err << "internal error: the ♮ translation does not check: " << e.what() << '\n';
        return kExitInternal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUser;
}

// --- REPL -----------------------------------------------------------------

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

void repl_line(Session& s, const std::string& line, const Flags& f, std::ostream& out) {
    auto command = [&](const char* name) -> std::optional<std::string> {
        std::string n = name;
        if (line == n) return std::string();
        if (line.rfind(n + " ", 0) == 0) return trim(line.substr(n.size()));
        return std::nullopt;
    };
    if (auto arg = command(":check")) {
        out << pretty(s.check(s.parse(*arg)).type) << '\n';
    } else if (auto arg = command(":eval")) {
        EvalResult r = s.eval(s.check(s.parse(*arg)).term);
        if (f.trace) print_trace(r.steps, out);
        out << pretty(r.value) << '\n';
    } else if (auto arg = command(":norm")) {
        NormalizeResult r = s.normalize(s.check(s.parse(*arg)).term, parse_strategy(f.strategy));
        if (f.trace) print_trace(r.steps, out);
        out << pretty(r.term) << '\n';
    } else if (auto arg = command(":natural")) {
        auto [t, ty] = s.natural(s.check(s.parse(*arg)));
        out << pretty(t) << " : " << pretty(ty) << '\n';
    } else if (auto arg = command(":load")) {
        for (const auto& d : s.load_file(*arg)) print_typed(d, f, out);
    } else if (line.rfind("def ", 0) == 0 || line.rfind("type ", 0) == 0 || line.rfind("const ", 0) == 0 ||
               line.rfind("main", 0) == 0) {
        std::string text = line.back() == ';' ? line : line + ";";
        for (const auto& d : s.load_source(text)) print_typed(d, f, out);
    } else if (line[0] == ':') {
        throw SessionError("unknown command " + line.substr(0, line.find(' ')) +
                           " (try :check, :eval, :norm, :natural, :load, :quit)");
    } else {
        Definition d = s.check(s.parse(line));
        EvalResult r = s.eval(d.term);
        out << pretty(r.value) << " : " << pretty(d.type) << '\n';
    }
}

int cmd_repl(const Flags& f, std::istream& in, std::ostream& out, std::ostream& err) {
    std::optional<Session> session;
    if (int rc = guarded(f, out, err, [&] {
            session.emplace(session_options(f));
            return kExitOk;
        });
        rc != kExitOk)
        return rc;
    const bool prompt = &in == &std::cin && isatty(STDIN_FILENO);
    int status = kExitOk;
    std::string line;
    while (true) {
        if (prompt) out << "lmd> " << std::flush;
        if (!std::getline(in, line)) break;
        line = trim(line);
        if (line.empty() || line.rfind("--", 0) == 0) continue;
        if (line == ":quit" || line == ":q") break;
        int rc = guarded(f, out, err, [&] {
            repl_line(*session, line, f, out);
            return kExitOk;
        });
        // Errors are reported and the loop goes on; internal ones stick.
        if (rc == kExitInternal) status = kExitInternal;
    }
    return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"lmd: check, evaluate and translate programs of a staged dependently typed calculus", "lmd"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--prelude", f.prelude, "Enable the Int/Bool/Vector signature and its δ-rules");
    app.add_option("--max-steps", f.max_steps, "Reduction step budget")->capture_default_str();
    app.add_option("--signature", f.signatures, "Extra signature file (repeatable)")->check(CLI::ExistingFile);
    app.add_flag("--trace", f.trace, "Print each reduction step as a JSON line");
    app.add_flag("--json", f.json, "Machine-readable output");

    auto file_cmd = [&](const char* name, const char* help) {
        CLI::App* c = app.add_subcommand(name, help);
        c->add_option("file", f.file, ".lmd file")->required();
        return c;
    };
    CLI::App* check = file_cmd("check", "Type-check the definitions and main of a file");
    check->add_flag("--dump-derivation", f.dump_derivation, "Print the last derivation as JSON");
    CLI::App* eval = file_cmd("eval", "Evaluate main with staged reduction");
    CLI::App* norm = file_cmd("normalize", "Normalize main with full reduction");
    norm->add_option("--strategy", f.strategy, "lo, staged or random:SEED")->capture_default_str();
    CLI::App* natural = file_cmd("natural", "Print the STLC image of main and its type");
    CLI::App* repl = app.add_subcommand("repl", "Interactive session");
    repl->add_option("--strategy", f.strategy, "Strategy for :norm")->capture_default_str();
    CLI::App* test = app.add_subcommand("test", "Run a property suite over generated terms");
    test->add_option("--suite", f.suite, "Suite name or 'all'")->capture_default_str();
    test->add_option("--n", f.n, "Number of cases")->capture_default_str()->check(CLI::PositiveNumber);
    test->add_option("--seed", f.seed, "Generator seed")->capture_default_str();
    test->add_option("--out", f.out_dir, "Directory for counterexample files")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUser;
    }

    if (*check) return guarded(f, out, err, [&] { return cmd_check(f, out); });
    if (*eval) return guarded(f, out, err, [&] { return cmd_eval(f, out); });
    if (*norm) return guarded(f, out, err, [&] { return cmd_normalize(f, out); });
    if (*natural) return guarded(f, out, err, [&] { return cmd_natural(f, out); });
    if (*repl) return cmd_repl(f, in, out, err);
    if (*test) return guarded(f, out, err, [&] { return cmd_test(f, out, err); });
    return kExitUser;
}

}  // namespace lmd
