// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "iwe/engine.hpp"

namespace iwe {

/// Weakest pre-expectation of a loop-free program as an expression. Only constant
/// folding is applied; compare results by evaluation. Throws DomainError on a loop.
Expr wp_symbolic(const Program& c, const Expr& f);

/// The characteristic functional applied to X, as an expression:
/// (1 - guard) * f + guard * wp(body, X). The body must be loop-free.
Expr phi_expr(const Expr& guard, const Program& body, const Expr& f, const Expr& x);

/// n-th iterate of the characteristic functional from 0, at one state, by
/// structural recursion memoised on (remaining depth, state). Exact.
ExtNonNeg wp_loop_iterate(const Expr& guard, const Program& body, const Expr& f, const State& s, long n,
                          const EvalOptions& eval = {});

struct WpResult {
    ExtNonNeg value;
    RunStats stats;
};

/// Full evaluation; loops are iterated until the policy decides. f must be non-negative
/// wherever it is evaluated (DomainError otherwise).
WpResult wp_value(const Program& c, const Expr& f, const State& s, const LoopOptions& opts = {});

struct CheckRow {
    State state;
    std::string label;  // which inequality, e.g. "Phi(I) <= I" or "H_3 <= Phi(H_2)"
    ExtValue lhs;
    ExtValue rhs;
    bool ok = false;
    bool approximated = false;
    /// rhs - lhs as a double (inf when rhs is inf).
    double margin = 0;
};

struct NonNegCheckReport {
    bool ok = true;
    std::vector<CheckRow> rows;
    std::vector<CheckRow> failures() const;
};

/// Compares lhs <= rhs: exactly, or within tol when a series was approximated.
CheckRow compare_row(const State& s, std::string label, const ExtValue& lhs, const ExtValue& rhs, bool approximated,
                     double tol);

/// Grid check of Phi(I) <= I. A pass certifies wp(while) f <= I on the grid.
NonNegCheckReport verify_upper_invariant(const Expr& guard, const Program& body, const Expr& f, const Expr& inv,
                                         const std::vector<State>& states, double tol = 1e-9,
                                         const EvalOptions& eval = {});

/// Grid check of H_0 <= Phi(0) and H_{n+1} <= Phi(H_n) for n < n_max, where H is an
/// expression in the free variable `index`.
NonNegCheckReport verify_lower_omega_invariant(const Expr& guard, const Program& body, const Expr& f, const Expr& h,
                                               const std::string& index, const std::vector<State>& states, long n_max,
                                               double tol = 1e-9, const EvalOptions& eval = {});

} // namespace iwe
