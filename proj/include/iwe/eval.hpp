// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "iwe/ast.hpp"
#include "iwe/convergence.hpp"
#include "iwe/state.hpp"
#include "iwe/values.hpp"

namespace iwe {

struct EvalOptions {
    ConvergencePolicy series = series_policy();
};

/// Filled in by evaluation. Values that came out of an infinite series are only
/// as good as the series policy; callers switch to tolerance comparisons then.
struct EvalTrace {
    bool approximated = false;
    bool diverged = false;
    long series_terms = 0;
};

/// f(state). Exact unless an infinite series is involved.
/// Throws EvalError for division by zero, negative exponents, and similar.
ExtValue eval_expr(const Expr& e, const State& s, const EvalOptions& opts = {}, EvalTrace* trace = nullptr);

bool eval_pred(const Pred& p, const State& s, const EvalOptions& opts = {});

/// Guard probability in [0, 1]; throws EvalError naming the state otherwise.
Rational eval_guard(const Expr& guard, const State& s);

/// Right-hand side of an assignment; must be an integer.
Integer eval_integer(const Expr& e, const State& s);

} // namespace iwe
