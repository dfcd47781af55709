// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "iwe/wpt.hpp"

namespace iwe {

/// Result of running a program for a bounded number of guard evaluations.
struct SubDistribution {
    std::map<State, Rational> terminal;
    /// Mass of runs still going, by the state they are in.
    std::map<State, Rational> pending;
    Rational residual;
    long depth = 0;

    Rational terminal_mass() const;
};

/// Breadth-first exploration of the branching tree. Every guard evaluation
/// (if or while) costs one unit of `depth`; other steps are free. Identical
/// configurations are merged and zero-probability branches pruned.
SubDistribution enumerate(const Program& c, const std::vector<std::pair<State, Rational>>& initial, long depth);
SubDistribution enumerate(const Program& c, const State& s, long depth);

enum class JordanVerdict { IntegrableSoFar, Diverging, Undetermined };

std::string to_string(JordanVerdict v);

/// Partial expectations of f+ = max(f, 0), f- = -min(f, 0) and |f| over terminal mass.
struct JordanReport {
    Rational e_plus;
    Rational e_minus;
    Rational e_abs;
    Rational residual;
    JordanVerdict verdict = JordanVerdict::Undetermined;

    Rational expectation() const { return e_plus - e_minus; }
};

/// f must be series-free and finite on terminal states.
JordanReport expected_value(const SubDistribution& d, const Expr& f, double threshold = 1e9);

struct ComparisonReport {
    bool match = false;
    /// Exact rational comparison (loop-free program, series-free pair).
    bool exact = false;
    /// False when the witness is inf and there is nothing to compare.
    bool comparable = true;
    IWReport wpt;
    JordanReport oracle;
    /// Partial expectation of the witness expression over terminal mass.
    Rational witness_expectation;
    double first_difference = 0;
    double witness_difference = 0;
    /// Allowed deviation: tol + residual * max |f| over the explored support.
    double bound = 0;
    std::string note;
};

ComparisonReport compare_with_wpt(const Program& c, const IWPairExpr& p, const State& s, long depth, double tol,
                                  const LoopOptions& opts = {});

} // namespace iwe
