// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "iwe/engine.hpp"

namespace iwe {

/// An integrability-witnessing pair of expressions (f, g) with |f| <= g.
struct IWPairExpr {
    Expr first;
    Expr witness;
};

/// (f, |f|): the pair used to ask for the expected value of f itself.
IWPairExpr default_pair(const Expr& f);

/// Canonical value of the pair at one state. The first component is not evaluated
/// where the witness is inf. Throws DomainError when |f| > g; series values get
/// `tol` of slack and are clamped.
IWValue eval_pair(const IWPairExpr& p, const State& s, const EvalOptions& eval = {}, double tol = 1e-9);

/// Mixed-sign transformer on loop-free code, as a pair of expressions.
IWPairExpr wpt_symbolic(const Program& c, const IWPairExpr& p);

/// a = Phi^n_{|f|+f}(0), b = Phi^n_{|f|}(0), c = Phi^n_g(0) at one state.
struct DecompTriple {
    ExtNonNeg a;
    ExtNonNeg b;
    ExtNonNeg c;
};

DecompTriple char_triple_iterate(const Expr& guard, const Program& body, const IWPairExpr& p, const State& s, long n,
                                 const LoopOptions& opts = {});

/// Psi^n(0, 0) at one state, unrolled directly with pair arithmetic.
IWValue pair_iterate(const Expr& guard, const Program& body, const IWPairExpr& p, const State& s, long n,
                     const LoopOptions& opts = {});

struct IWReport {
    State state;
    IWValue value;
    long iterations = 0;
    double last_increment = 0;
    /// Witness reported as inf.
    bool diverged = false;
    /// Some loop verdict relied on the convergence policy.
    bool heuristic = false;
    std::string reason;
    std::vector<LoopRecord> traces;
};

IWReport wpt_loop_value(const Expr& guard, const Program& body, const IWPairExpr& p, const State& s,
                        const LoopOptions& opts = {});

IWReport wpt_value(const Program& c, const IWPairExpr& p, const State& s, const LoopOptions& opts = {});

} // namespace iwe
