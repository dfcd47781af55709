// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/engine.hpp"

namespace iwe {

namespace {

// Keep traces of at most this many loop evaluations.
constexpr std::size_t max_records = 16;

void add_scaled(Distribution& out, const Distribution& in, const Rational& w) {
    for (const auto& [t, m] : in) {
        out[t] += w * m;
    }
}

} // namespace

void RunStats::absorb(const LoopRecord& rec, bool keep) {
    ++loops;
    max_iterations = std::max(max_iterations, rec.iterations);
    last_increment = rec.last_increment;
    diverged = diverged || rec.diverged;
    heuristic = heuristic || !rec.exact;
    reason = rec.reason;
    if (keep && records.size() < max_records) {
        records.push_back(rec);
    }
}

Distribution body_distribution(const Program& c, const State& s) {
    switch (c->kind) {
    case StmtKind::Skip:
        return {{s, Rational(1)}};
    case StmtKind::Assign:
        return {{s.with(c->var, eval_integer(c->expr, s)), Rational(1)}};
    case StmtKind::Seq: {
        Distribution out;
        for (const auto& [t, p] : body_distribution(c->first, s)) {
            add_scaled(out, body_distribution(c->second, t), p);
        }
        return out;
    }
    case StmtKind::If: {
        const Rational p = eval_guard(c->expr, s);
        if (p == 1) {
            return body_distribution(c->first, s);
        }
        if (p == 0) {
            return body_distribution(c->second, s);
        }
        Distribution out;
        add_scaled(out, body_distribution(c->first, s), p);
        add_scaled(out, body_distribution(c->second, s), Rational(1 - p));
        return out;
    }
    case StmtKind::While:
        throw DomainError("expected a loop-free program, found a while loop");
    }
    return {};
}

} // namespace iwe
