// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
//
// iwe: command-line front end for the expectation engines.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "iwe/certificates.hpp"
#include "iwe/corpus.hpp"
#include "iwe/errors.hpp"
#include "iwe/json_io.hpp"
#include "iwe/oracle.hpp"
#include "iwe/parser.hpp"
#include "iwe/wp.hpp"
#include "iwe/wpt.hpp"

namespace {

using namespace iwe;

enum Exit { ok = 0, check_failed = 1, usage = 2, eval_failed = 3 };

struct RunConfig {
    std::string program;
    std::string post;
    std::string witness;
    std::string states;
    std::string at;
    std::string expr;
    std::string format = "text";
    long depth = 40;
    long n_max = 50;
    long n_sup = 200;
    long max_iter = 100000;
    double tol = 1e-9;
    double threshold = 1e9;
    bool trace = false;
    bool compare = false;
    int loop = -1;
    std::string inv;
    std::string bound;
    std::string family;
    std::string index = "n";
    bool upper = false;
    bool lower = false;
    bool nonneg_upper = false;
    bool nonneg_lower = false;
    bool no_sandwich = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_program_text(const std::string& spec) {
    if (spec.rfind("corpus:", 0) == 0) {
        try {
            return corpus_entry(spec.substr(7)).source;
        } catch (const std::out_of_range& e) {
            throw UsageError(e.what());
        }
    }
    std::ifstream in(spec);
    if (!in) {
        throw UsageError("cannot open program file '" + spec + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Expr required_expr(const std::string& text, const char* flag) {
    if (text.empty()) {
        throw UsageError(std::string("missing ") + flag);
    }
    return parse_expression(text);
}

std::vector<State> grid_of(const std::string& spec, const Program& prog) {
    std::vector<State> raw;
    try {
        raw = spec.empty() ? std::vector<State>{State{}} : parse_grid(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad state grid: ") + e.what());
    }
    const auto vars = free_variables(prog);
    for (auto& s : raw) {
        s = complete(s, vars);
    }
    return raw;
}

LoopOptions loop_options(const RunConfig& cfg) {
    if (!(cfg.tol > 0) || !(cfg.threshold > 0)) {
        throw UsageError("--tol and --threshold must be positive");
    }
    LoopOptions o;
    o.policy.tol = cfg.tol * 1e-3;
    o.policy.threshold = cfg.threshold;
    o.policy.max_iterations = cfg.max_iter;
    o.eval.series.tol = std::min(1e-12, cfg.tol * 1e-3);
    o.eval.series.threshold = cfg.threshold;
    o.trace = cfg.trace;
    return o;
}

/// Applies fn to every state on a small worker pool; results keep grid order.
template <class R, class F>
std::vector<R> parallel_map(const std::vector<State>& states, F fn) {
    std::vector<std::optional<R>> out(states.size());
    std::vector<std::exception_ptr> errors(states.size());
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("IWE_WP_THREADS")) {
        const long n = std::strtol(cap, nullptr, 10);
        if (n > 0) {
            workers = std::min<std::size_t>(workers, static_cast<std::size_t>(n));
        }
    }
    workers = std::min(workers, states.size());
    auto work = [&](std::size_t first) {
        for (std::size_t i = first; i < states.size(); i += workers) {
            try {
                out[i] = fn(states[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    std::vector<R> result;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        result.push_back(std::move(*out[i]));
    }
    return result;
}

std::string approx(const Rational& r) {
    std::ostringstream ss;
    ss.precision(12);
    ss << r.get_d();
    return ss.str();
}

std::string approx(const ExtNonNeg& v) { return v.is_inf() ? "inf" : approx(v.value()); }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// --- parse -------------------------------------------------------------------

int cmd_parse(const RunConfig& cfg) {
    if (!cfg.expr.empty()) {
        const Expr e = parse_expression(cfg.expr);
        const auto vars = free_variables(e);
        if (cfg.format == "json") {
            print_json({{"expression", to_string(e)}, {"variables", vars}});
        } else {
            std::cout << to_string(e) << "\nvariables:";
            for (const auto& v : vars) {
                std::cout << " " << v;
            }
            std::cout << "\n";
        }
        return ok;
    }
    const Program p = parse_program(read_program_text(cfg.program));
    const auto vars = free_variables(p);
    if (cfg.format == "json") {
        print_json({{"program", to_string(p)},
                    {"variables", vars},
                    {"loop_free", is_loop_free(p)},
                    {"statements", top_level_statements(p).size()}});
    } else {
        std::cout << to_string(p) << "\nvariables:";
        for (const auto& v : vars) {
            std::cout << " " << v;
        }
        std::cout << "\n";
    }
    return ok;
}

// --- wp / wpt -----------------------------------------------------------------

int cmd_wp(const RunConfig& cfg) {
    const Program p = parse_program(read_program_text(cfg.program));
    const Expr f = required_expr(cfg.post, "--post");
    const auto states = grid_of(cfg.states, p);
    const LoopOptions opts = loop_options(cfg);
    const auto results = parallel_map<WpResult>(states, [&](const State& s) { return wp_value(p, f, s, opts); });
    if (cfg.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& r = results[i];
            rows.push_back({{"state", to_json(states[i])},
                            {"value", r.value.to_string()},
                            {"iterations", r.stats.max_iterations},
                            {"diverged", r.value.is_inf()},
                            {"heuristic", r.stats.heuristic},
                            {"reason", r.stats.reason}});
        }
        print_json({{"command", "wp"}, {"post", to_string(f)}, {"results", rows}});
    } else {
        for (std::size_t i = 0; i < states.size(); ++i) {
            const auto& r = results[i];
            std::cout << "{" << states[i].to_string() << "}: " << r.value.to_string();
            if (!r.value.is_inf() && !is_integer(r.value.value())) {
                std::cout << "  ~" << approx(r.value);
            }
            if (r.stats.loops > 0) {
                std::cout << "  [" << (r.stats.heuristic ? "converged (heuristic)" : "exact") << ", "
                          << r.stats.max_iterations << " iterations]";
                if (r.value.is_inf()) {
                    std::cout << " divergent: " << r.stats.reason;
                }
            }
            std::cout << "\n";
        }
    }
    return ok;
}

IWPairExpr pair_from(const RunConfig& cfg) {
    const Expr f = required_expr(cfg.post, "--post");
    return cfg.witness.empty() ? default_pair(f) : IWPairExpr{f, parse_expression(cfg.witness)};
}

int cmd_wpt(const RunConfig& cfg) {
    const Program p = parse_program(read_program_text(cfg.program));
    const IWPairExpr pair = pair_from(cfg);
    const auto states = grid_of(cfg.states, p);
    const LoopOptions opts = loop_options(cfg);
    const auto results = parallel_map<IWReport>(states, [&](const State& s) { return wpt_value(p, pair, s, opts); });
    if (cfg.format == "json") {
        json rows = json::array();
        for (const auto& r : results) {
            rows.push_back(to_json(r, cfg.trace));
        }
        print_json({{"command", "wpt"},
                    {"post", {{"first", to_string(pair.first)}, {"witness", to_string(pair.witness)}}},
                    {"results", rows}});
    } else {
        for (const auto& r : results) {
            std::cout << "{" << r.state.to_string() << "}: " << r.value.to_string();
            if (!is_integer(r.value.first()) || (!r.value.witness().is_inf() && !is_integer(r.value.witness().value()))) {
                std::cout << "  ~(" << approx(r.value.first()) << ", " << approx(r.value.witness()) << ")";
            }
            if (r.diverged) {
                std::cout << "  divergent witness" << (r.heuristic ? " (heuristic: " + r.reason + ")" : "");
            } else if (r.iterations > 0) {
                std::cout << "  [" << (r.heuristic ? "converged (heuristic)" : "exact") << ", " << r.iterations
                          << " iterations]";
            }
            std::cout << "\n";
            if (cfg.trace) {
                for (const auto& rec : r.traces) {
                    for (std::size_t n = 0; n < rec.trace.size(); ++n) {
                        std::cout << "    n=" << n + 1 << " a=" << rec.trace[n][0] << " b=" << rec.trace[n][1]
                                  << " c=" << rec.trace[n][2] << "\n";
                    }
                }
            }
        }
    }
    return ok;
}

// --- oracle -------------------------------------------------------------------

int cmd_oracle(const RunConfig& cfg) {
    const Program p = parse_program(read_program_text(cfg.program));
    const auto states = grid_of(cfg.states, p);
    if (cfg.depth < 0) {
        throw UsageError("--depth must be non-negative");
    }
    std::optional<Expr> f;
    if (!cfg.post.empty()) {
        f = parse_expression(cfg.post);
    }
    const LoopOptions opts = loop_options(cfg);
    json rows = json::array();
    bool mismatch = false;
    for (const auto& s : states) {
        const SubDistribution d = enumerate(p, s, cfg.depth);
        json row = {{"state", to_json(s)}, {"distribution", to_json(d)}};
        std::optional<JordanReport> jr;
        std::optional<ComparisonReport> cmp;
        if (f) {
            jr = expected_value(d, *f, cfg.threshold);
            row["expectation"] = to_json(*jr);
            if (cfg.compare) {
                cmp = compare_with_wpt(p, pair_from(cfg), s, cfg.depth, cfg.tol, opts);
                row["comparison"] = to_json(*cmp);
                mismatch = mismatch || !cmp->match;
            }
        }
        if (cfg.format == "json") {
            rows.push_back(std::move(row));
            continue;
        }
        std::cout << "{" << s.to_string() << "} depth " << cfg.depth << ": " << d.terminal.size()
                  << " terminal states, residual " << to_string(d.residual) << " ~" << approx(d.residual) << "\n";
        if (d.terminal.size() <= 32) {
            for (const auto& [t, m] : d.terminal) {
                std::cout << "    {" << t.to_string() << "}: " << to_string(m) << "\n";
            }
        }
        if (jr) {
            std::cout << "  E[f+] = " << to_string(jr->e_plus) << ", E[f-] = " << to_string(jr->e_minus)
                      << ", E[f] ~ " << approx(jr->expectation()) << " (" << to_string(jr->verdict) << ")\n";
        }
        if (cmp) {
            std::cout << "  wpt " << cmp->wpt.value.to_string() << ": " << (cmp->match ? "match" : "MISMATCH") << " ("
                      << cmp->note << ")\n";
        }
    }
    if (cfg.format == "json") {
        print_json({{"command", "oracle"}, {"depth", cfg.depth}, {"results", rows}});
    }
    // A mismatch is a failed check, like a refuted certificate.
    return mismatch ? check_failed : ok;
}

// --- check --------------------------------------------------------------------

struct LoopSplit {
    Program prefix;
    Program loop;
    Program suffix;
};

LoopSplit split_at_loop(const Program& p, int which) {
    const auto parts = top_level_statements(p);
    int index = -1;
    if (which >= 0) {
        if (which >= static_cast<int>(parts.size()) || parts[static_cast<std::size_t>(which)]->kind != StmtKind::While) {
            throw UsageError("--loop " + std::to_string(which) + " does not name a top-level while statement");
        }
        index = which;
    } else {
        for (int i = static_cast<int>(parts.size()) - 1; i >= 0; --i) {
            if (parts[static_cast<std::size_t>(i)]->kind == StmtKind::While) {
                index = i;
                break;
            }
        }
        if (index < 0) {
            throw UsageError("the program has no top-level while statement");
        }
    }
    LoopSplit out;
    const auto at = static_cast<std::size_t>(index);
    const std::vector<Program> before(parts.begin(), parts.begin() + index);
    const std::vector<Program> after(parts.begin() + index + 1, parts.end());
    out.prefix = before.empty() ? nullptr : stmt::sequence(before);
    out.loop = parts[at];
    out.suffix = after.empty() ? nullptr : stmt::sequence(after);
    return out;
}

void print_failures(const std::vector<CheckRow>& rows, std::size_t limit = 5) {
    for (std::size_t i = 0; i < rows.size() && i < limit; ++i) {
        const auto& r = rows[i];
        std::cout << "      fails at {" << r.state.to_string() << "}: " << r.label << ": " << r.lhs.to_string()
                  << " > " << r.rhs.to_string() << "\n";
    }
    if (rows.size() > limit) {
        std::cout << "      ... " << rows.size() - limit << " more\n";
    }
}

int cmd_check(const RunConfig& cfg) {
    const int modes = int(cfg.upper) + int(cfg.lower) + int(cfg.nonneg_upper) + int(cfg.nonneg_lower);
    if (modes != 1) {
        throw UsageError("choose exactly one of --upper, --lower, --nonneg-upper, --nonneg-lower");
    }
    const Program p = parse_program(read_program_text(cfg.program));
    const LoopSplit split = split_at_loop(p, cfg.loop);
    const auto grid = grid_of(cfg.states, p);
    const auto entries = cfg.at.empty() ? grid : grid_of(cfg.at, p);
    const LoopOptions opts = loop_options(cfg);
    const Expr& guard = split.loop->expr;
    const Program& body = split.loop->first;

    if (cfg.nonneg_upper || cfg.nonneg_lower) {
        Expr f = required_expr(cfg.post, "--post");
        if (split.suffix) {
            f = wp_symbolic(split.suffix, f);
        }
        NonNegCertificateReport rep;
        if (cfg.nonneg_upper) {
            rep = check_nonneg_upper(split.prefix, guard, body, f, required_expr(cfg.inv, "--I"), grid, entries, cfg.tol);
        } else {
            rep = check_nonneg_lower(split.prefix, guard, body, f, required_expr(cfg.family, "--H"), cfg.index, grid,
                                     entries, cfg.n_max, cfg.n_sup, cfg.tol);
        }
        if (cfg.format == "json") {
            json j = to_json(rep);
            j["command"] = "check";
            j["rule"] = cfg.nonneg_upper ? "nonneg-upper" : "nonneg-lower";
            print_json(j);
        } else {
            std::cout << (cfg.nonneg_upper ? "upper invariant Phi(I) <= I" : "lower omega-invariant") << ": "
                      << (rep.ok ? "grid-certified" : "REFUTED") << " on " << grid.size() << " states ("
                      << rep.check.rows.size() << " inequalities)\n";
            print_failures(rep.check.failures());
            if (rep.ok) {
                const auto& rows = rep.entry.empty() ? rep.head : rep.entry;
                std::cout << (rep.entry.empty() ? "  bound at loop head:\n" : "  bound at program entry:\n");
                for (std::size_t i = 0; i < rows.size() && i < 50; ++i) {
                    std::cout << "    {" << rows[i].first.to_string() << "}: " << rows[i].second.to_string() << "\n";
                }
            }
        }
        return rep.ok ? ok : check_failed;
    }

    MixedCertificate cert;
    cert.prefix = split.prefix;
    cert.guard = guard;
    cert.body = body;
    cert.suffix = split.suffix;
    cert.post = pair_from(cfg);
    cert.inv = required_expr(cfg.inv, "--I");
    cert.bound = required_expr(cfg.bound, "--G");
    cert.family = required_expr(cfg.family, "--H");
    cert.index = cfg.index;
    cert.grid = grid;
    cert.entry_states = entries;
    cert.n_max = cfg.n_max;
    cert.n_sup = cfg.n_sup;
    cert.tol = cfg.tol;
    cert.sandwich = !cfg.no_sandwich;
    cert.loop = opts;
    const CertificateReport rep = cfg.upper ? check_mixed_upper(cert) : check_mixed_lower(cert);
    if (cfg.format == "json") {
        json j = to_json(rep);
        j["command"] = "check";
        print_json(j);
    } else {
        std::cout << (cfg.upper ? "upper" : "lower") << " certificate: " << (rep.ok ? "grid-certified" : "REFUTED")
                  << " on " << grid.size() << " states\n";
        for (const auto& c : rep.conditions) {
            std::cout << "  " << (c.ok ? "ok  " : "FAIL") << " " << c.name << " (" << c.checked << " checks)\n";
            print_failures(c.failures);
        }
        if (rep.ok) {
            const auto& rows = rep.entry.empty() ? rep.head : rep.entry;
            std::cout << (rep.entry.empty() ? "  bound at loop head" : "  bound at program entry") << " ("
                      << (cfg.upper ? "upper" : "lower, first component") << "):\n";
            for (std::size_t i = 0; i < rows.size() && i < 50; ++i) {
                const auto& b = rows[i];
                std::cout << "    {" << b.state.to_string() << "}: (" << approx(b.first) << ", " << approx(b.witness)
                          << ")";
                if (b.has_engine) {
                    std::cout << "  engine ~(" << approx(b.engine.first()) << ", " << approx(b.engine.witness())
                              << ")" << (b.sandwich_ok ? "" : "  SANDWICH VIOLATED");
                }
                std::cout << "\n";
            }
        }
    }
    return rep.ok ? ok : check_failed;
}

// --- corpus -------------------------------------------------------------------

int cmd_corpus(const RunConfig& cfg) {
    if (!cfg.program.empty()) {
        const std::string name = cfg.program.rfind("corpus:", 0) == 0 ? cfg.program.substr(7) : cfg.program;
        const CorpusEntry* e = nullptr;
        try {
            e = &corpus_entry(name);
        } catch (const std::out_of_range& err) {
            throw UsageError(err.what());
        }
        if (cfg.format == "json") {
            print_json({{"name", e->name}, {"title", e->title}, {"note", e->note}, {"source", e->source}});
        } else {
            std::cout << e->source;
        }
        return ok;
    }
    if (cfg.format == "json") {
        json rows = json::array();
        for (const auto& e : corpus()) {
            rows.push_back({{"name", e.name},
                            {"title", e.title},
                            {"note", e.note},
                            {"post", e.post},
                            {"states", e.states}});
        }
        print_json({{"command", "corpus"}, {"programs", rows}});
    } else {
        for (const auto& e : corpus()) {
            std::cout << e.name << "  " << e.title << ": " << e.note << "\n";
        }
    }
    return ok;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool program_required = true) {
    auto* prog = sub->add_option("program", cfg.program, "program file, or corpus:NAME");
    if (program_required) {
        prog->required();
    }
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));
}

void add_eval(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--post", cfg.post, "post-expectation f");
    sub->add_option("--states,--state", cfg.states, "state grid, e.g. x=-3..3,c=0");
    sub->add_option("--tol", cfg.tol, "tolerance (default 1e-9)");
    sub->add_option("--threshold", cfg.threshold, "divergence threshold (default 1e9)");
    sub->add_option("--max-iter", cfg.max_iter, "iteration budget per loop");
    sub->add_flag("--trace", cfg.trace, "include per-iteration traces");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"iwe: weakest pre-expectations for mixed-sign posts"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* parse = app.add_subcommand("parse", "parse and pretty-print a program or expression");
    add_common(parse, cfg, false);
    parse->add_option("--expr", cfg.expr, "parse an expression instead of a program");

    auto* wp = app.add_subcommand("wp", "non-negative weakest pre-expectation");
    add_common(wp, cfg);
    add_eval(wp, cfg);

    auto* wpt = app.add_subcommand("wpt", "mixed-sign transformer on an integrability-witnessing pair");
    add_common(wpt, cfg);
    add_eval(wpt, cfg);
    wpt->add_option("--witness", cfg.witness, "witness g (default abs(f))");

    auto* oracle = app.add_subcommand("oracle", "exact enumeration of the output distribution");
    add_common(oracle, cfg);
    add_eval(oracle, cfg);
    oracle->add_option("--depth", cfg.depth, "guard evaluations to explore (default 40)");
    oracle->add_option("--witness", cfg.witness, "witness g for --compare (default abs(f))");
    oracle->add_flag("--compare", cfg.compare, "compare the expectation with the transformer");

    auto* check = app.add_subcommand("check", "check loop invariant certificates on a grid");
    add_common(check, cfg);
    add_eval(check, cfg);
    check->add_option("--witness", cfg.witness, "witness g (default abs(f))");
    check->add_flag("--upper", cfg.upper, "mixed-sign upper bound certificate");
    check->add_flag("--lower", cfg.lower, "mixed-sign lower bound certificate");
    check->add_flag("--nonneg-upper", cfg.nonneg_upper, "classical upper invariant I");
    check->add_flag("--nonneg-lower", cfg.nonneg_lower, "classical lower omega-invariant H");
    check->add_option("--I", cfg.inv, "invariant I");
    check->add_option("--G", cfg.bound, "witness bound G");
    check->add_option("--H", cfg.family, "family H in the index variable");
    check->add_option("--index", cfg.index, "index variable of H (default n)");
    check->add_option("--n-max", cfg.n_max, "largest n checked for H (default 50)");
    check->add_option("--n-sup", cfg.n_sup, "evaluations allowed for sup H (default 200)");
    check->add_option("--at", cfg.at, "program-entry states for the bound (default: --states)");
    check->add_option("--loop", cfg.loop, "index of the top-level statement holding the loop");
    check->add_flag("--no-sandwich", cfg.no_sandwich, "skip the comparison with the engine");

    auto* corp = app.add_subcommand("corpus", "list or print bundled programs");
    corp->add_option("program", cfg.program, "name of one program");
    corp->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (parse->parsed()) {
            return cmd_parse(cfg);
        }
        if (wp->parsed()) {
            return cmd_wp(cfg);
        }
        if (wpt->parsed()) {
            return cmd_wpt(cfg);
        }
        if (oracle->parsed()) {
            return cmd_oracle(cfg);
        }
        if (check->parsed()) {
            return cmd_check(cfg);
        }
        return cmd_corpus(cfg);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const iwe::Error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return eval_failed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return eval_failed;
    }
}
