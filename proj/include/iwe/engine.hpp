// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Structural evaluation of programs against a post given as a function of the
// final state. One template serves the non-negative transformer (vectors of
// extended non-negative values, one component per post) and the mixed-sign one
// (IWValue); loops are delegated to a rule supplied by the caller.

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "iwe/ast.hpp"
#include "iwe/errors.hpp"
#include "iwe/eval.hpp"
#include "iwe/state.hpp"
#include "iwe/values.hpp"

namespace iwe {

struct LoopOptions {
    ConvergencePolicy policy = loop_policy();
    EvalOptions eval;
    /// Compute the exact n-th iterate instead of the limit (inner loops too).
    std::optional<long> fixed_n;
    /// Keep per-iteration traces of the first few loop evaluations.
    bool trace = false;
    /// Forward propagation of the running mass when the body is loop-free.
    bool prefer_forward = true;
};

struct LoopRecord {
    long iterations = 0;
    double last_increment = 0;
    bool exact = false;
    bool diverged = false;
    std::string reason;
    /// One row of component values per iteration, when tracing.
    std::vector<std::vector<double>> trace;
};

struct RunStats {
    long loops = 0;
    long max_iterations = 0;
    double last_increment = 0;
    bool diverged = false;
    bool heuristic = false;
    std::string reason;
    std::vector<LoopRecord> records;

    void absorb(const LoopRecord& rec, bool keep);
};

using Distribution = std::unordered_map<State, Rational, StateHash>;

/// Exact output distribution of a loop-free program from one state.
Distribution body_distribution(const Program& c, const State& s);

template <class V>
using PostFn = std::function<V(const State&)>;
template <class V>
using LoopFn = std::function<V(const Program& loop, const PostFn<V>& post, const State& s)>;

inline ExtNonNeg weighted(const Rational& p, const ExtNonNeg& a, const Rational& q, const ExtNonNeg& b) {
    return p * a + q * b;
}
template <std::size_t K>
ExtVec<K> weighted(const Rational& p, const ExtVec<K>& a, const Rational& q, const ExtVec<K>& b) {
    return p * a + q * b;
}
inline IWValue weighted(const Rational& p, const IWValue& a, const Rational& q, const IWValue& b) {
    return iw_add(iw_scale(p, a), iw_scale(q, b));
}

template <class V>
V run_program(const Program& c, const PostFn<V>& post, const State& s, const LoopFn<V>& loop) {
    switch (c->kind) {
    case StmtKind::Skip:
        return post(s);
    case StmtKind::Assign:
        return post(s.with(c->var, eval_integer(c->expr, s)));
    case StmtKind::Seq: {
        const PostFn<V> rest = [&](const State& t) { return run_program<V>(c->second, post, t, loop); };
        return run_program<V>(c->first, rest, s, loop);
    }
    case StmtKind::If: {
        const Rational p = eval_guard(c->expr, s);
        if (p == 1) {
            return run_program<V>(c->first, post, s, loop);
        }
        if (p == 0) {
            return run_program<V>(c->second, post, s, loop);
        }
        return weighted(p, run_program<V>(c->first, post, s, loop), Rational(1 - p),
                        run_program<V>(c->second, post, s, loop));
    }
    case StmtKind::While:
        return loop(c, post, s);
    }
    throw Error("unknown statement");
}

/// Componentwise least fixed point of the characteristic functional, i.e. the
/// non-negative transformer applied to K posts at once. The last component
/// drives convergence; callers arrange that it dominates the others.
template <std::size_t K>
class VecLoop {
  public:
    VecLoop(const LoopOptions& opts, RunStats* stats) : opts_(opts), stats_(stats) {}

    ExtVec<K> operator()(const Program& loop, const PostFn<ExtVec<K>>& post, const State& s) const {
        if (opts_.prefer_forward && is_loop_free(loop->first)) {
            return forward(loop, post, s);
        }
        return backward(loop, post, s);
    }

    LoopFn<ExtVec<K>> as_fn() const {
        return [self = *this](const Program& l, const PostFn<ExtVec<K>>& p, const State& s) { return self(l, p, s); };
    }

  private:
    LoopOptions opts_;
    RunStats* stats_;

    static std::vector<double> row(const ExtVec<K>& v) {
        std::vector<double> r;
        for (const auto& x : v) {
            r.push_back(x.to_double());
        }
        return r;
    }

    void finish(const LoopRecord& rec) const {
        if (stats_) {
            stats_->absorb(rec, opts_.trace);
        }
    }

    // Only the last component is monitored; the others are dominated by it.
    // Returns true once it is decided.
    bool observe(SequenceMonitor& mon, ExtVec<K>& acc, const ExtVec<K>& inc, LoopRecord& rec) const {
        ExtNonNeg& drv = acc[K - 1];
        if (drv.is_inf()) {
            rec.reason = "post is inf on a reachable exit state";
            return true;
        }
        const Verdict v = mon.push(drv.value().get_d(), inc[K - 1].value().get_d());
        rec.last_increment = mon.last_increment();
        if (v == Verdict::Running) {
            return false;
        }
        rec.reason = mon.reason();
        if (v != Verdict::Converged) {
            drv = ExtNonNeg::infinity();
            return true;
        }
        for (std::size_t i = 0; i + 1 < K; ++i) {
            if (!acc[i].is_inf() && acc[i].value().get_d() > opts_.policy.threshold) {
                acc[i] = ExtNonNeg::infinity();
            }
        }
        return true;
    }

    ExtVec<K> forward(const Program& loop, const PostFn<ExtVec<K>>& post, const State& s) const {
        const Expr& guard = loop->expr;
        const Program& body = loop->first;
        Distribution frontier{{s, Rational(1)}};
        ExtVec<K> acc{};
        SequenceMonitor mon(opts_.policy);
        LoopRecord rec;
        for (long k = 0;; ++k) {
            if (opts_.fixed_n && k == *opts_.fixed_n) {
                rec.iterations = k;
                rec.exact = true;
                finish(rec);
                return acc;
            }
            ExtVec<K> inc{};
            Distribution next;
            for (const auto& [state, mass] : frontier) {
                const Rational p = eval_guard(guard, state);
                if (p != 1) {
                    inc = inc + Rational(mass * (1 - p)) * post(state);
                }
                if (p != 0) {
                    for (const auto& [t, q] : body_distribution(body, state)) {
                        next[t] += mass * p * q;
                    }
                }
            }
            acc = acc + inc;
            frontier = std::move(next);
            rec.iterations = k + 1;
            if (opts_.trace) {
                rec.trace.push_back(row(acc));
            }
            if (frontier.empty()) {
                rec.exact = true;
                rec.reason = "all runs terminated";
                finish(rec);
                return acc;
            }
            if (opts_.fixed_n) {
                continue;
            }
            if (observe(mon, acc, inc, rec)) {
                rec.diverged = acc[K - 1].is_inf();
                finish(rec);
                return acc;
            }
        }
    }

    ExtVec<K> backward(const Program& loop, const PostFn<ExtVec<K>>& post, const State& s) const {
        const Expr& guard = loop->expr;
        const Program& body = loop->first;
        std::vector<std::unordered_map<State, ExtVec<K>, StateHash>> memo(1);
        const LoopFn<ExtVec<K>> inner = as_fn();
        std::function<ExtVec<K>(long, const State&)> phi = [&](long k, const State& t) -> ExtVec<K> {
            if (k == 0) {
                return ExtVec<K>{};
            }
            if (memo.size() <= static_cast<std::size_t>(k)) {
                memo.resize(static_cast<std::size_t>(k) + 1);
            }
            if (auto it = memo[static_cast<std::size_t>(k)].find(t); it != memo[static_cast<std::size_t>(k)].end()) {
                return it->second;
            }
            const Rational p = eval_guard(guard, t);
            ExtVec<K> out{};
            if (p != 1) {
                out = Rational(1 - p) * post(t);
            }
            if (p != 0) {
                const PostFn<ExtVec<K>> prev = [&phi, k](const State& u) { return phi(k - 1, u); };
                out = out + p * run_program<ExtVec<K>>(body, prev, t, inner);
            }
            memo[static_cast<std::size_t>(k)].emplace(t, out);
            return out;
        };
        LoopRecord rec;
        if (opts_.fixed_n) {
            rec.iterations = *opts_.fixed_n;
            rec.exact = true;
            ExtVec<K> v = phi(*opts_.fixed_n, s);
            finish(rec);
            return v;
        }
        SequenceMonitor mon(opts_.policy);
        ExtVec<K> acc{};
        for (long k = 1;; ++k) {
            const ExtVec<K> cur = phi(k, s);
            ExtVec<K> inc{};
            for (std::size_t i = 0; i < K; ++i) {
                if (!cur[i].is_inf() && !acc[i].is_inf()) {
                    inc[i] = ExtNonNeg(Rational(cur[i].value() - acc[i].value()));
                }
            }
            acc = cur;
            rec.iterations = k;
            if (opts_.trace) {
                rec.trace.push_back(row(acc));
            }
            if (observe(mon, acc, inc, rec)) {
                rec.diverged = acc[K - 1].is_inf();
                finish(rec);
                return acc;
            }
        }
    }
};

} // namespace iwe
