// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "iwe/wp.hpp"
#include "iwe/wpt.hpp"

namespace iwe {

/// Candidate invariants for one loop `while (guard) { body }`, optionally preceded
/// and followed by loop-free code. The loop's post is wpt_symbolic(suffix, post).
struct MixedCertificate {
    Program prefix;  // may be null
    Expr guard;
    Program body;
    Program suffix;  // may be null
    IWPairExpr post;
    Expr inv;         // I
    Expr bound;       // G
    Expr family;      // H, an expression in `index`
    std::string index = "n";
    /// Loop-head states where the four conditions are checked.
    std::vector<State> grid;
    /// Program-entry states where the bound is pushed through the prefix (empty: use grid).
    std::vector<State> entry_states;
    long n_max = 50;
    long n_sup = 200;
    double tol = 1e-9;
    /// Compare every bound with the engine's value.
    bool sandwich = true;
    LoopOptions loop;
};

struct ConditionResult {
    std::string name;
    bool ok = true;
    long checked = 0;
    double min_margin = 0;
    std::vector<CheckRow> failures;
};

struct BoundRow {
    State state;
    Rational first;
    ExtNonNeg witness;
    ExtNonNeg sup_h;
    bool has_engine = false;
    IWValue engine;
    bool sandwich_ok = true;
};

struct CertificateReport {
    bool upper = true;
    bool ok = false;
    bool sandwich_ok = true;
    std::vector<ConditionResult> conditions;
    /// Bound at each loop-head grid state.
    std::vector<BoundRow> head;
    /// Bound at each entry state, when there is a prefix.
    std::vector<BoundRow> entry;
};

/// Conditions Phi_g(G) <= G, Phi_{|f|+f}(I) <= I, H_0 <= Phi_{|f|}(0),
/// H_{n+1} <= Phi_{|f|}(H_n); bound (I - sup H, 2G) from above.
CertificateReport check_mixed_upper(const MixedCertificate& cert);

/// Roles of |f| and |f|+f swapped; bound (sup H - I, 2G) on the first component from below.
CertificateReport check_mixed_lower(const MixedCertificate& cert);

/// sup_n H_n at one state. Throws LimitUndetected when the running maximum does
/// not stabilise within n_sup evaluations.
ExtNonNeg sup_H(const Expr& h, const std::string& index, const State& s, const ConvergencePolicy& policy,
                long n_sup = 200, const EvalOptions& eval = {});

/// Non-negative counterpart, for the classical rules: grid verdict plus bound rows.
struct NonNegCertificateReport {
    bool ok = false;
    NonNegCheckReport check;
    /// (state, bound) at the loop head and, through the prefix, at entry states.
    std::vector<std::pair<State, ExtNonNeg>> head;
    std::vector<std::pair<State, ExtNonNeg>> entry;
};

NonNegCertificateReport check_nonneg_upper(const Program& prefix, const Expr& guard, const Program& body,
                                           const Expr& f, const Expr& inv, const std::vector<State>& grid,
                                           const std::vector<State>& entry_states, double tol);

NonNegCertificateReport check_nonneg_lower(const Program& prefix, const Expr& guard, const Program& body,
                                           const Expr& f, const Expr& h, const std::string& index,
                                           const std::vector<State>& grid, const std::vector<State>& entry_states,
                                           long n_max, long n_sup, double tol);

} // namespace iwe
