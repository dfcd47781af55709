// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/wpt.hpp"

#include "iwe/wp.hpp"

namespace iwe {

IWPairExpr default_pair(const Expr& f) { return {f, ex::abs(f)}; }

IWValue eval_pair(const IWPairExpr& p, const State& s, const EvalOptions& eval, double tol) {
    EvalTrace tr;
    const ExtValue g = eval_expr(p.witness, s, eval, &tr);
    if (g.is_inf()) {
        return IWValue::infinite();
    }
    if (g.value() < 0) {
        throw DomainError("witness '" + to_string(p.witness) + "' is negative at state {" + s.to_string() + "}");
    }
    const ExtValue f = eval_expr(p.first, s, eval, &tr);
    if (f.is_inf()) {
        throw DomainError("first component '" + to_string(p.first) + "' is inf at state {" + s.to_string() + "}");
    }
    const Rational& fv = f.value();
    const Rational& gv = g.value();
    if (abs(fv) > gv) {
        if (!tr.approximated || Rational(abs(fv) - gv).get_d() > tol) {
            throw DomainError("not integrability-witnessing at state {" + s.to_string() + "}: |" + to_string(fv) +
                              "| > " + to_string(gv));
        }
        return {fv, ExtNonNeg(abs(fv))};
    }
    return {fv, ExtNonNeg(gv)};
}

IWPairExpr wpt_symbolic(const Program& c, const IWPairExpr& p) {
    // Guard weights are non-negative, so |w| g = w g and both components follow wp.
    return {wp_symbolic(c, p.first), wp_symbolic(c, p.witness)};
}

namespace {

ExtVec<3> to_triple(const IWValue& v) {
    if (v.witness().is_inf()) {
        return {ExtNonNeg(), ExtNonNeg(), ExtNonNeg::infinity()};
    }
    const Rational af = abs(v.first());
    return {ExtNonNeg(Rational(af + v.first())), ExtNonNeg(af), v.witness()};
}

IWValue from_triple(const ExtVec<3>& t) {
    if (t[2].is_inf()) {
        return IWValue::infinite();
    }
    if (t[0].is_inf() || t[1].is_inf()) {
        throw LimitUndetected("decomposition parts diverge while the witness converges");
    }
    return {Rational(t[0].value() - t[1].value()), t[2]};
}

// Mixed-sign loops, resolved through the decomposition triple.
class IWLoop {
  public:
    IWLoop(const LoopOptions& opts, RunStats* stats) : opts_(opts), stats_(stats) {}

    IWValue operator()(const Program& loop, const PostFn<IWValue>& post, const State& s) const {
        const VecLoop<3> vec(opts_, stats_);
        const PostFn<ExtVec<3>> triple_post = [&](const State& t) { return to_triple(post(t)); };
        return from_triple(vec(loop, triple_post, s));
    }

    LoopFn<IWValue> as_fn() const {
        return [self = *this](const Program& l, const PostFn<IWValue>& p, const State& s) { return self(l, p, s); };
    }

  private:
    LoopOptions opts_;
    RunStats* stats_;
};

IWReport make_report(const State& s, const IWValue& v, const RunStats& stats) {
    IWReport rep;
    rep.state = s;
    rep.value = v;
    rep.iterations = stats.max_iterations;
    rep.last_increment = stats.last_increment;
    rep.diverged = v.witness().is_inf();
    rep.heuristic = stats.heuristic;
    rep.traces = stats.records;
    rep.reason = stats.reason;
    return rep;
}

} // namespace

DecompTriple char_triple_iterate(const Expr& guard, const Program& body, const IWPairExpr& p, const State& s, long n,
                                 const LoopOptions& opts) {
    LoopOptions o = opts;
    o.fixed_n = n;
    o.prefer_forward = false;
    const VecLoop<3> vec(o, nullptr);
    const PostFn<ExtVec<3>> post = [&](const State& t) { return to_triple(eval_pair(p, t, o.eval)); };
    const ExtVec<3> t = vec(stmt::loop(guard, body), post, s);
    return {t[0], t[1], t[2]};
}

IWValue pair_iterate(const Expr& guard, const Program& body, const IWPairExpr& p, const State& s, long n,
                     const LoopOptions& opts) {
    const IWLoop inner(opts, nullptr);
    const LoopFn<IWValue> inner_fn = inner.as_fn();
    std::vector<std::unordered_map<State, IWValue, StateHash>> memo(static_cast<std::size_t>(n) + 1);
    std::function<IWValue(long, const State&)> psi = [&](long k, const State& t) -> IWValue {
        if (k == 0) {
            return {};
        }
        auto& level = memo[static_cast<std::size_t>(k)];
        if (auto it = level.find(t); it != level.end()) {
            return it->second;
        }
        const Rational q = eval_guard(guard, t);
        IWValue out;
        if (q != 1) {
            out = iw_scale(Rational(1 - q), eval_pair(p, t, opts.eval));
        }
        if (q != 0) {
            const PostFn<IWValue> prev = [&psi, k](const State& u) { return psi(k - 1, u); };
            out = iw_add(out, iw_scale(q, run_program<IWValue>(body, prev, t, inner_fn)));
        }
        level.emplace(t, out);
        return out;
    };
    return psi(n, s);
}

IWReport wpt_loop_value(const Expr& guard, const Program& body, const IWPairExpr& p, const State& s,
                        const LoopOptions& opts) {
    return wpt_value(stmt::loop(guard, body), p, s, opts);
}

IWReport wpt_value(const Program& c, const IWPairExpr& p, const State& s, const LoopOptions& opts) {
    RunStats stats;
    const IWLoop loop(opts, &stats);
    const PostFn<IWValue> post = [&](const State& t) { return eval_pair(p, t, opts.eval); };
    const IWValue v = run_program<IWValue>(c, post, s, loop.as_fn());
    return make_report(s, v, stats);
}

} // namespace iwe
