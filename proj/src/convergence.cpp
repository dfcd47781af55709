// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace iwe {

ConvergencePolicy series_policy() { return ConvergencePolicy{}; }

ConvergencePolicy loop_policy() {
    ConvergencePolicy p;
    p.growth_window = 64;
    return p;
}

namespace {

struct Blocks {
    double m0 = 0;  // older block
    double m1 = 0;  // newer block
};

Blocks block_maxima(const std::deque<double>& recent, int k) {
    Blocks b;
    const auto n = static_cast<int>(recent.size());
    for (int i = 0; i < n; ++i) {
        if (i < n - k) {
            b.m0 = std::max(b.m0, recent[static_cast<std::size_t>(i)]);
        } else {
            b.m1 = std::max(b.m1, recent[static_cast<std::size_t>(i)]);
        }
    }
    return b;
}

} // namespace

bool tail_certified(const std::deque<double>& recent_abs, int window, double tol) {
    if (static_cast<int>(recent_abs.size()) < 2 * window) {
        return false;
    }
    const Blocks b = block_maxima(recent_abs, window);
    if (b.m1 >= tol) {
        return false;
    }
    if (b.m1 == 0) {
        return b.m0 > 0;
    }
    const double r = b.m1 / b.m0;
    return r < 1 && window * b.m1 * r / (1 - r) < tol;
}

SequenceMonitor::SequenceMonitor(ConvergencePolicy policy) : policy_(policy) {}

Verdict SequenceMonitor::push(double value, double increment) {
    if (verdict_ != Verdict::Running) {
        return verdict_;
    }
    ++steps_;
    prev_increment_ = last_increment_;
    last_increment_ = increment;
    recent_.push_back(std::fabs(increment));
    const auto k = static_cast<std::size_t>(policy_.window);
    if (recent_.size() > 2 * k) {
        recent_.pop_front();
    }
    if (increment != 0) {
        seen_nonzero_ = true;
    }

    if (!std::isfinite(value) || std::fabs(value) > policy_.threshold) {
        verdict_ = Verdict::Diverged;
        reason_ = "partial value exceeded the divergence threshold";
        return verdict_;
    }

    if (increment > 0 && steps_ > 1 && prev_increment_ > 0 && increment >= prev_increment_) {
        ++growth_run_;
    } else {
        growth_run_ = 0;
    }
    if (growth_run_ >= policy_.growth_window) {
        verdict_ = Verdict::Diverged;
        reason_ = "increments non-decreasing for " + std::to_string(policy_.growth_window) + " steps";
        return verdict_;
    }

    if (recent_.size() == 2 * k) {
        const Blocks b = block_maxima(recent_, policy_.window);
        if (b.m0 > 0 && b.m1 < b.m0) {
            const double r = b.m1 / b.m0;
            const double tail = policy_.window * b.m1 * r / (1 - r);
            if (tail >= policy_.tol && prev_tail_ >= 0 && tail >= prev_tail_) {
                ++stall_run_;
            } else {
                stall_run_ = 0;
            }
            prev_tail_ = tail;
        } else {
            stall_run_ = 0;
            prev_tail_ = -1;
        }
        if (stall_run_ >= policy_.stall_window) {
            verdict_ = Verdict::Diverged;
            reason_ = "tail estimate stopped shrinking";
            return verdict_;
        }
        if (tail_certified(recent_, policy_.window, policy_.tol)) {
            verdict_ = Verdict::Converged;
            reason_ = "increments below tolerance with geometric tail bound";
            return verdict_;
        }
    }

    if (!seen_nonzero_ && steps_ >= policy_.zero_prefix_limit) {
        verdict_ = Verdict::Converged;
        reason_ = "identically zero so far";
        return verdict_;
    }
    if (steps_ >= policy_.max_iterations) {
        verdict_ = Verdict::Exhausted;
        reason_ = "iteration budget exhausted";
    }
    return verdict_;
}

} // namespace iwe
