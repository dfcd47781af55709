// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/wp.hpp"

#include <cmath>
#include <limits>

namespace iwe {

Expr wp_symbolic(const Program& c, const Expr& f) {
    switch (c->kind) {
    case StmtKind::Skip:
        return f;
    case StmtKind::Assign:
        return substitute(f, c->var, c->expr);
    case StmtKind::Seq:
        return wp_symbolic(c->first, wp_symbolic(c->second, f));
    case StmtKind::If:
        return ex::add(ex::mul(c->expr, wp_symbolic(c->first, f)),
                       ex::mul(ex::sub(ex::constant(1), c->expr), wp_symbolic(c->second, f)));
    case StmtKind::While:
        throw DomainError("symbolic wp needs a loop-free program");
    }
    return f;
}

Expr phi_expr(const Expr& guard, const Program& body, const Expr& f, const Expr& x) {
    return ex::add(ex::mul(ex::sub(ex::constant(1), guard), f), ex::mul(guard, wp_symbolic(body, x)));
}

namespace {

ExtVec<1> nonneg_post(const Expr& f, const State& s, const EvalOptions& eval) {
    const ExtValue v = eval_expr(f, s, eval);
    if (!v.is_inf() && v.value() < 0) {
        throw DomainError("not a non-negative expectation: '" + to_string(f) + "' is " + v.to_string() +
                          " at state {" + s.to_string() + "}");
    }
    return {ExtNonNeg::from(v)};
}

} // namespace

ExtNonNeg wp_loop_iterate(const Expr& guard, const Program& body, const Expr& f, const State& s, long n,
                          const EvalOptions& eval) {
    LoopOptions opts;
    opts.eval = eval;
    opts.fixed_n = n;
    opts.prefer_forward = false;
    const VecLoop<1> loop(opts, nullptr);
    const PostFn<ExtVec<1>> post = [&](const State& t) { return nonneg_post(f, t, eval); };
    return loop(stmt::loop(guard, body), post, s)[0];
}

WpResult wp_value(const Program& c, const Expr& f, const State& s, const LoopOptions& opts) {
    WpResult res;
    const VecLoop<1> loop(opts, &res.stats);
    const PostFn<ExtVec<1>> post = [&](const State& t) { return nonneg_post(f, t, opts.eval); };
    res.value = run_program<ExtVec<1>>(c, post, s, loop.as_fn())[0];
    return res;
}

std::vector<CheckRow> NonNegCheckReport::failures() const {
    std::vector<CheckRow> out;
    for (const auto& r : rows) {
        if (!r.ok) {
            out.push_back(r);
        }
    }
    return out;
}

CheckRow compare_row(const State& s, std::string label, const ExtValue& lhs, const ExtValue& rhs, bool approximated,
                     double tol) {
    CheckRow row;
    row.state = s;
    row.label = std::move(label);
    row.lhs = lhs;
    row.rhs = rhs;
    row.approximated = approximated;
    if (rhs.is_inf()) {
        row.ok = true;
        row.margin = std::numeric_limits<double>::infinity();
    } else if (lhs.is_inf()) {
        row.ok = false;
        row.margin = -std::numeric_limits<double>::infinity();
    } else {
        const Rational diff = rhs.value() - lhs.value();
        row.margin = diff.get_d();
        row.ok = approximated ? row.margin >= -tol : diff >= 0;
    }
    return row;
}

namespace {

void require_loop_free(const Program& body) {
    if (!is_loop_free(body)) {
        throw DomainError("invariant checks need a loop-free loop body");
    }
}

CheckRow check_at(const State& s, std::string label, const Expr& lhs, const Expr& rhs, double tol,
                  const EvalOptions& eval) {
    EvalTrace tr;
    const ExtValue l = eval_expr(lhs, s, eval, &tr);
    const ExtValue r = eval_expr(rhs, s, eval, &tr);
    return compare_row(s, std::move(label), l, r, tr.approximated, tol);
}

} // namespace

NonNegCheckReport verify_upper_invariant(const Expr& guard, const Program& body, const Expr& f, const Expr& inv,
                                         const std::vector<State>& states, double tol, const EvalOptions& eval) {
    require_loop_free(body);
    const Expr lhs = phi_expr(guard, body, f, inv);
    NonNegCheckReport rep;
    for (const auto& s : states) {
        eval_guard(guard, s);
        rep.rows.push_back(check_at(s, "Phi(I) <= I", lhs, inv, tol, eval));
        rep.ok = rep.ok && rep.rows.back().ok;
    }
    return rep;
}

NonNegCheckReport verify_lower_omega_invariant(const Expr& guard, const Program& body, const Expr& f, const Expr& h,
                                               const std::string& index, const std::vector<State>& states, long n_max,
                                               double tol, const EvalOptions& eval) {
    require_loop_free(body);
    NonNegCheckReport rep;
    auto h_at = [&](long n) { return substitute(h, index, ex::constant(n)); };
    std::vector<std::pair<std::string, std::pair<Expr, Expr>>> conditions;
    conditions.push_back({"H_0 <= Phi(0)", {h_at(0), phi_expr(guard, body, f, ex::constant(0))}});
    for (long n = 0; n < n_max; ++n) {
        conditions.push_back({"H_" + std::to_string(n + 1) + " <= Phi(H_" + std::to_string(n) + ")",
                              {h_at(n + 1), phi_expr(guard, body, f, h_at(n))}});
    }
    for (const auto& s : states) {
        eval_guard(guard, s);
        for (const auto& [label, sides] : conditions) {
            rep.rows.push_back(check_at(s, label, sides.first, sides.second, tol, eval));
            rep.ok = rep.ok && rep.rows.back().ok;
        }
    }
    return rep;
}

} // namespace iwe
