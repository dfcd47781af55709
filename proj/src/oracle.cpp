// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace iwe {

namespace {

// Statements still to run, innermost on top (back).
using Stack = std::vector<const ProgramNode*>;

struct Config {
    Stack stack;
    State state;

    friend bool operator==(const Config& a, const Config& b) { return a.stack == b.stack && a.state == b.state; }
};

struct ConfigHash {
    std::size_t operator()(const Config& c) const {
        std::size_t h = c.state.hash();
        for (const ProgramNode* p : c.stack) {
            h ^= std::hash<const void*>{}(p) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

using Frontier = std::unordered_map<Config, Rational, ConfigHash>;

// Runs guard-free steps until the top of the stack is a guard or the run ends.
void settle(Config cfg, const Rational& mass, Frontier& waiting, std::map<State, Rational>& terminal) {
    while (!cfg.stack.empty()) {
        const ProgramNode* top = cfg.stack.back();
        if (top->kind == StmtKind::If || top->kind == StmtKind::While) {
            waiting[std::move(cfg)] += mass;
            return;
        }
        cfg.stack.pop_back();
        if (top->kind == StmtKind::Assign) {
            cfg.state.set(top->var, eval_integer(top->expr, cfg.state));
        } else if (top->kind == StmtKind::Seq) {
            cfg.stack.push_back(top->second.get());
            cfg.stack.push_back(top->first.get());
        }
    }
    terminal[cfg.state] += mass;
}

void branch(const Config& cfg, const Rational& mass, Frontier& next, std::map<State, Rational>& terminal) {
    const ProgramNode* top = cfg.stack.back();
    const Rational p = eval_guard(top->expr, cfg.state);
    Stack rest(cfg.stack.begin(), cfg.stack.end() - 1);
    if (p != 0) {
        Config yes{rest, cfg.state};
        if (top->kind == StmtKind::While) {
            yes.stack.push_back(top);
        }
        yes.stack.push_back(top->first.get());
        settle(std::move(yes), mass * p, next, terminal);
    }
    if (p != 1) {
        Config no{rest, cfg.state};
        if (top->kind == StmtKind::If) {
            no.stack.push_back(top->second.get());
        }
        settle(std::move(no), mass * (1 - p), next, terminal);
    }
}

} // namespace

Rational SubDistribution::terminal_mass() const {
    Rational m;
    for (const auto& [s, w] : terminal) {
        m += w;
    }
    return m;
}

SubDistribution enumerate(const Program& c, const std::vector<std::pair<State, Rational>>& initial, long depth) {
    SubDistribution out;
    out.depth = depth;
    Frontier frontier;
    for (const auto& [s, m] : initial) {
        if (m != 0) {
            settle(Config{{c.get()}, s}, m, frontier, out.terminal);
        }
    }
    for (long d = 0; d < depth && !frontier.empty(); ++d) {
        Frontier next;
        for (const auto& [cfg, m] : frontier) {
            branch(cfg, m, next, out.terminal);
        }
        frontier = std::move(next);
    }
    for (const auto& [cfg, m] : frontier) {
        out.residual += m;
        out.pending[cfg.state] += m;
    }
    return out;
}

SubDistribution enumerate(const Program& c, const State& s, long depth) {
    return enumerate(c, {{s, Rational(1)}}, depth);
}

std::string to_string(JordanVerdict v) {
    switch (v) {
    case JordanVerdict::IntegrableSoFar: return "integrable-so-far";
    case JordanVerdict::Diverging: return "diverging";
    case JordanVerdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

// Residual mass small enough to call the partial sums settled.
constexpr double settled_residual = 1e-6;

JordanReport expected_value(const SubDistribution& d, const Expr& f, double threshold) {
    JordanReport rep;
    rep.residual = d.residual;
    for (const auto& [s, m] : d.terminal) {
        const Rational v = eval_expr(f, s).value();
        if (v > 0) {
            rep.e_plus += m * v;
        } else {
            rep.e_minus -= m * v;
        }
    }
    rep.e_abs = rep.e_plus + rep.e_minus;
    if (rep.e_abs.get_d() > threshold) {
        rep.verdict = JordanVerdict::Diverging;
    } else if (rep.residual.get_d() <= settled_residual) {
        rep.verdict = JordanVerdict::IntegrableSoFar;
    } else {
        rep.verdict = JordanVerdict::Undetermined;
    }
    return rep;
}

ComparisonReport compare_with_wpt(const Program& c, const IWPairExpr& p, const State& s, long depth, double tol,
                                  const LoopOptions& opts) {
    ComparisonReport rep;
    const bool loop_free = is_loop_free(c);
    if (loop_free) {
        depth = std::max<long>(depth, guard_depth(c));
    }
    rep.wpt = wpt_value(c, p, s, opts);
    const SubDistribution d = enumerate(c, s, depth);
    rep.oracle = expected_value(d, p.first, opts.policy.threshold);
    if (rep.wpt.value.witness().is_inf()) {
        rep.comparable = false;
        rep.match = true;
        rep.note = "witness is inf; the first component is the canonical 0";
        return rep;
    }
    for (const auto& [t, m] : d.terminal) {
        rep.witness_expectation += m * eval_expr(p.witness, t).value();
    }
    const Rational oracle_first = rep.oracle.expectation();
    const Rational& first = rep.wpt.value.first();
    const Rational& witness = rep.wpt.value.witness().value();
    rep.first_difference = Rational(first - oracle_first).get_d();
    rep.witness_difference = Rational(witness - rep.witness_expectation).get_d();
    const bool series = contains_series(p.first) || contains_series(p.witness);
    if (loop_free && !series) {
        rep.exact = true;
        rep.match = first == oracle_first && witness == rep.witness_expectation && d.residual == 0;
        rep.note = "exact rational comparison";
        return rep;
    }
    double max_f = 0;
    double max_g = 0;
    auto widen = [&](const State& t) {
        try {
            max_f = std::max(max_f, std::fabs(eval_expr(p.first, t).to_double()));
            max_g = std::max(max_g, eval_expr(p.witness, t).to_double());
        } catch (const EvalError&) {
            // The post need not be defined on intermediate states.
            max_f = max_g = std::numeric_limits<double>::infinity();
        }
    };
    for (const auto& [t, m] : d.terminal) {
        widen(t);
    }
    for (const auto& [t, m] : d.pending) {
        widen(t);
    }
    const double res = d.residual.get_d();
    rep.bound = tol + res * max_f;
    const double witness_bound = tol + res * max_g;
    rep.match = std::fabs(rep.first_difference) <= rep.bound && std::fabs(rep.witness_difference) <= witness_bound;
    rep.note = "tolerance comparison with residual bound";
    return rep;
}

} // namespace iwe
