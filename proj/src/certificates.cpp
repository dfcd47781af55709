// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace iwe {

ExtNonNeg sup_H(const Expr& h, const std::string& index, const State& s, const ConvergencePolicy& policy, long n_sup,
                const EvalOptions& eval) {
    SequenceMonitor mon(policy);
    Rational running;
    std::deque<double> recent;
    for (long n = 0; n < n_sup; ++n) {
        const ExtValue v = eval_expr(substitute(h, index, ex::constant(n)), s, eval);
        if (v.is_inf()) {
            return ExtNonNeg::infinity();
        }
        const Rational next = n == 0 ? v.value() : std::max(running, v.value());
        const Rational inc = next - running;
        running = next;
        recent.push_back(std::fabs(inc.get_d()));
        if (recent.size() > static_cast<std::size_t>(policy.window)) {
            recent.pop_front();
        }
        const Verdict verdict = mon.push(running.get_d(), inc.get_d());
        if (verdict == Verdict::Converged) {
            break;
        }
        if (verdict != Verdict::Running) {
            return ExtNonNeg::infinity();
        }
        if (n + 1 == n_sup) {
            const bool flat = recent.size() == static_cast<std::size_t>(policy.window) &&
                              std::all_of(recent.begin(), recent.end(), [](double d) { return d == 0; });
            if (!flat) {
                throw LimitUndetected("sup of H undetected at state {" + s.to_string() + "} within " +
                                      std::to_string(n_sup) + " evaluations");
            }
        }
    }
    if (running < 0) {
        throw DomainError("H is negative at state {" + s.to_string() + "}");
    }
    return ExtNonNeg(running);
}

namespace {

ConditionResult condition(const std::string& name, const NonNegCheckReport& rep) {
    ConditionResult c;
    c.name = name;
    c.ok = rep.ok;
    c.checked = static_cast<long>(rep.rows.size());
    c.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rep.rows) {
        c.min_margin = std::min(c.min_margin, r.margin);
        if (!r.ok) {
            c.failures.push_back(r);
        }
    }
    return c;
}

IWPairExpr loop_post(const MixedCertificate& cert) {
    return cert.suffix ? wpt_symbolic(cert.suffix, cert.post) : cert.post;
}

Program whole_program(const MixedCertificate& cert) {
    std::vector<Program> parts;
    if (cert.prefix) {
        parts.push_back(cert.prefix);
    }
    parts.push_back(stmt::loop(cert.guard, cert.body));
    if (cert.suffix) {
        parts.push_back(cert.suffix);
    }
    return stmt::sequence(parts);
}

CertificateReport check_mixed(const MixedCertificate& cert, bool upper) {
    if (!is_loop_free(cert.body) || (cert.prefix && !is_loop_free(cert.prefix)) ||
        (cert.suffix && !is_loop_free(cert.suffix))) {
        throw DomainError("certificates need loop-free body, prefix, and suffix");
    }
    const EvalOptions& eval = cert.loop.eval;
    const IWPairExpr post = loop_post(cert);
    const Expr abs_f = ex::abs(post.first);
    const Expr plus_f = ex::add(ex::abs(post.first), post.first);

    for (const auto& s : cert.grid) {
        if (eval_expr(cert.bound, s, eval).is_inf()) {
            throw DomainError("G must be finite; it is inf at state {" + s.to_string() + "}");
        }
    }

    CertificateReport rep;
    rep.upper = upper;
    rep.conditions.push_back(condition(
        "Phi_g(G) <= G", verify_upper_invariant(cert.guard, cert.body, post.witness, cert.bound, cert.grid, cert.tol, eval)));
    rep.conditions.push_back(condition(upper ? "Phi_{|f|+f}(I) <= I" : "Phi_{|f|}(I) <= I",
                                       verify_upper_invariant(cert.guard, cert.body, upper ? plus_f : abs_f, cert.inv,
                                                              cert.grid, cert.tol, eval)));
    const NonNegCheckReport omega = verify_lower_omega_invariant(cert.guard, cert.body, upper ? abs_f : plus_f,
                                                                 cert.family, cert.index, cert.grid, cert.n_max,
                                                                 cert.tol, eval);
    NonNegCheckReport base;
    NonNegCheckReport step;
    for (const auto& row : omega.rows) {
        auto& target = row.label.rfind("H_0 ", 0) == 0 ? base : step;
        target.rows.push_back(row);
        target.ok = target.ok && row.ok;
    }
    const std::string side = upper ? "|f|" : "|f|+f";
    rep.conditions.push_back(condition("H_0 <= Phi_{" + side + "}(0)", base));
    rep.conditions.push_back(condition("H_{n+1} <= Phi_{" + side + "}(H_n)", step));
    rep.ok = std::all_of(rep.conditions.begin(), rep.conditions.end(), [](const ConditionResult& c) { return c.ok; });

    ConvergencePolicy sup_policy = series_policy();
    sup_policy.tol = std::min(cert.tol, sup_policy.tol);
    std::map<State, BoundRow> cache;
    auto head_bound = [&](const State& s) -> const BoundRow& {
        if (auto it = cache.find(s); it != cache.end()) {
            return it->second;
        }
        BoundRow row;
        row.state = s;
        EvalTrace tr;
        const Rational i = eval_expr(cert.inv, s, eval, &tr).value();
        const ExtValue g = eval_expr(cert.bound, s, eval, &tr);
        if (g.is_inf()) {
            throw DomainError("G must be finite; it is inf at state {" + s.to_string() + "}");
        }
        row.sup_h = sup_H(cert.family, cert.index, s, sup_policy, cert.n_sup, eval);
        if (row.sup_h.is_inf()) {
            throw DomainError("sup of H is inf at state {" + s.to_string() + "}");
        }
        row.first = upper ? Rational(i - row.sup_h.value()) : Rational(row.sup_h.value() - i);
        row.witness = Rational(2) * ExtNonNeg::from(g);
        return cache.emplace(s, row).first->second;
    };

    const double slack = 10 * cert.tol;
    auto sandwich = [&](BoundRow& row, const IWValue& engine) {
        row.has_engine = true;
        row.engine = engine;
        const bool witness_ok = engine.witness().to_double() <= row.witness.to_double() + slack;
        const double f_eng = engine.first().get_d();
        const double f_bnd = row.first.get_d();
        const bool first_ok = upper ? f_eng <= f_bnd + slack : f_bnd <= f_eng + slack;
        row.sandwich_ok = witness_ok && first_ok && !engine.witness().is_inf();
        rep.sandwich_ok = rep.sandwich_ok && row.sandwich_ok;
    };

    for (const auto& s : cert.grid) {
        BoundRow row = head_bound(s);
        if (cert.sandwich && rep.ok) {
            sandwich(row, wpt_loop_value(cert.guard, cert.body, post, s, cert.loop).value);
        }
        rep.head.push_back(row);
    }

    if (cert.prefix) {
        const Program program = whole_program(cert);
        const auto& entries = cert.entry_states.empty() ? cert.grid : cert.entry_states;
        for (const auto& s : entries) {
            BoundRow row;
            row.state = s;
            row.witness = ExtNonNeg();
            row.sup_h = ExtNonNeg();
            for (const auto& [t, m] : body_distribution(cert.prefix, s)) {
                const BoundRow& h = head_bound(t);
                row.first += m * h.first;
                row.witness = row.witness + m * h.witness;
                row.sup_h = row.sup_h + m * h.sup_h;
            }
            if (cert.sandwich && rep.ok) {
                sandwich(row, wpt_value(program, cert.post, s, cert.loop).value);
            }
            rep.entry.push_back(row);
        }
    }
    return rep;
}

std::vector<std::pair<State, ExtNonNeg>> through_prefix(const Program& prefix, const std::vector<State>& entries,
                                                        const std::function<ExtNonNeg(const State&)>& at_head) {
    std::vector<std::pair<State, ExtNonNeg>> out;
    if (!prefix) {
        return out;
    }
    for (const auto& s : entries) {
        ExtNonNeg total;
        for (const auto& [t, m] : body_distribution(prefix, s)) {
            total = total + m * at_head(t);
        }
        out.emplace_back(s, total);
    }
    return out;
}

} // namespace

CertificateReport check_mixed_upper(const MixedCertificate& cert) { return check_mixed(cert, true); }

CertificateReport check_mixed_lower(const MixedCertificate& cert) { return check_mixed(cert, false); }

NonNegCertificateReport check_nonneg_upper(const Program& prefix, const Expr& guard, const Program& body,
                                           const Expr& f, const Expr& inv, const std::vector<State>& grid,
                                           const std::vector<State>& entry_states, double tol) {
    NonNegCertificateReport rep;
    rep.check = verify_upper_invariant(guard, body, f, inv, grid, tol);
    rep.ok = rep.check.ok;
    auto at_head = [&](const State& s) { return ExtNonNeg::from(eval_expr(inv, s)); };
    for (const auto& s : grid) {
        rep.head.emplace_back(s, at_head(s));
    }
    rep.entry = through_prefix(prefix, entry_states.empty() ? grid : entry_states, at_head);
    return rep;
}

NonNegCertificateReport check_nonneg_lower(const Program& prefix, const Expr& guard, const Program& body,
                                           const Expr& f, const Expr& h, const std::string& index,
                                           const std::vector<State>& grid, const std::vector<State>& entry_states,
                                           long n_max, long n_sup, double tol) {
    NonNegCertificateReport rep;
    rep.check = verify_lower_omega_invariant(guard, body, f, h, index, grid, n_max, tol);
    rep.ok = rep.check.ok;
    ConvergencePolicy policy = series_policy();
    policy.tol = std::min(tol, policy.tol);
    auto at_head = [&](const State& s) { return sup_H(h, index, s, policy, n_sup); };
    for (const auto& s : grid) {
        rep.head.emplace_back(s, at_head(s));
    }
    rep.entry = through_prefix(prefix, entry_states.empty() ? grid : entry_states, at_head);
    return rep;
}

} // namespace iwe
