// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <string>

namespace iwe {

/// Shared policy for infinite series, loop iteration, and sequence limits.
/// Every verdict it produces is heuristic except exact termination.
struct ConvergencePolicy {
    double tol = 1e-12;
    double threshold = 1e9;
    /// Block length k for the increment test.
    int window = 8;
    /// Consecutive positive, non-decreasing increments that count as divergence.
    int growth_window = 8;
    /// Consecutive non-decreasing tail estimates (>= tol) that count as divergence.
    int stall_window = 32;
    /// All-zero prefix length after which the sequence is taken to be identically zero.
    long zero_prefix_limit = 1000;
    long max_iterations = 100000;
};

ConvergencePolicy series_policy();
/// Loop iterates rise for a while before the tail sets in, so the growth window is wider.
ConvergencePolicy loop_policy();

enum class Verdict { Running, Converged, Diverged, Exhausted };

/// Watches S_0, S_1, ... through the increments S_n - S_{n-1}.
class SequenceMonitor {
  public:
    explicit SequenceMonitor(ConvergencePolicy policy);

    /// `value` is the new partial value, `increment` the exact difference to the previous
    /// one (both rounded to double). Returns the verdict after this step.
    Verdict push(double value, double increment);

    Verdict verdict() const { return verdict_; }
    long steps() const { return steps_; }
    double last_increment() const { return last_increment_; }
    bool heuristic() const { return heuristic_; }
    const std::string& reason() const { return reason_; }
    const ConvergencePolicy& policy() const { return policy_; }

  private:
    ConvergencePolicy policy_;
    std::deque<double> recent_;  // |increments|, at most 2k
    Verdict verdict_ = Verdict::Running;
    long steps_ = 0;
    double last_increment_ = 0;
    double prev_increment_ = 0;
    int growth_run_ = 0;
    int stall_run_ = 0;
    double prev_tail_ = -1;
    bool seen_nonzero_ = false;
    bool heuristic_ = true;
    std::string reason_;
};

/// Block test on the last 2k absolute increments: the newest k are below tol and a
/// geometric tail bound through the two block maxima is below tol as well.
bool tail_certified(const std::deque<double>& recent_abs, int window, double tol);

} // namespace iwe
