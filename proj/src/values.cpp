// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "iwe/errors.hpp"

namespace iwe {

ExtValue ExtValue::infinity() {
    ExtValue v;
    v.inf_ = true;
    return v;
}

const Rational& ExtValue::value() const {
    if (inf_) {
        throw DomainError("expected a finite value, got inf");
    }
    return value_;
}

double ExtValue::to_double() const { return inf_ ? std::numeric_limits<double>::infinity() : value_.get_d(); }

std::string ExtValue::to_string() const { return inf_ ? "inf" : iwe::to_string(value_); }

ExtNonNeg::ExtNonNeg(Rational v) : value_(std::move(v)) {
    if (value_ < 0) {
        throw DomainError("negative value " + iwe::to_string(value_) + " where a non-negative one is required");
    }
}

ExtNonNeg ExtNonNeg::from(const ExtValue& v) { return v.is_inf() ? infinity() : ExtNonNeg(v.value()); }

ExtNonNeg ExtNonNeg::infinity() {
    ExtNonNeg v;
    v.inf_ = true;
    return v;
}

const Rational& ExtNonNeg::value() const {
    if (inf_) {
        throw DomainError("expected a finite value, got inf");
    }
    return value_;
}

double ExtNonNeg::to_double() const { return inf_ ? std::numeric_limits<double>::infinity() : value_.get_d(); }

std::string ExtNonNeg::to_string() const { return inf_ ? "inf" : iwe::to_string(value_); }

ExtNonNeg operator+(const ExtNonNeg& a, const ExtNonNeg& b) {
    if (a.inf_ || b.inf_) {
        return ExtNonNeg::infinity();
    }
    ExtNonNeg out;
    out.value_ = a.value_ + b.value_;
    return out;
}

ExtNonNeg operator*(const Rational& c, const ExtNonNeg& a) {
    if (c < 0) {
        throw DomainError("negative scale factor " + to_string(c));
    }
    if (a.inf_) {
        if (c == 0) {
            throw DomainError("0 * inf is undefined");
        }
        return a;
    }
    ExtNonNeg out;
    out.value_ = c * a.value_;
    return out;
}

bool operator<=(const ExtNonNeg& a, const ExtNonNeg& b) {
    if (b.inf_) {
        return true;
    }
    return !a.inf_ && a.value_ <= b.value_;
}

ExtNonNeg max(const ExtNonNeg& a, const ExtNonNeg& b) { return a <= b ? b : a; }

// -----------------------------------------------------------------------------

static void validate(const Rational& first, const ExtNonNeg& witness) {
    if (!witness.is_inf() && abs(first) > witness.value()) {
        throw DomainError("not integrability-witnessing: |" + to_string(first) + "| > " + witness.to_string());
    }
}

IWValue::IWValue(Rational first, ExtNonNeg witness) : first_(std::move(first)), witness_(std::move(witness)) {
    validate(first_, witness_);
    if (witness_.is_inf()) {
        first_ = 0;
    }
}

IWValue IWValue::raw(Rational first, ExtNonNeg witness) {
    validate(first, witness);
    IWValue v;
    v.first_ = std::move(first);
    v.witness_ = std::move(witness);
    return v;
}

IWValue IWValue::canonical() const { return IWValue(first_, witness_); }

std::string IWValue::to_string() const { return "(" + iwe::to_string(first_) + ", " + witness_.to_string() + ")"; }

IWValue iw_add(const IWValue& a, const IWValue& b) {
    return {Rational(a.first() + b.first()), a.witness() + b.witness()};
}

IWValue iw_scale(const Rational& c, const IWValue& a) {
    if (c == 0) {
        // |c| g with g = inf is the excluded 0 * inf; the zero-weight term simply vanishes.
        if (a.witness().is_inf()) {
            throw DomainError("0 * inf is undefined");
        }
        return {};
    }
    return {Rational(c * a.first()), abs(c) * a.witness()};
}

IWValue iw_mul(const Rational& h, const IWValue& a) { return iw_scale(h, a); }

bool iw_leq(const IWValue& a, const IWValue& b) {
    if (b.witness().is_inf()) {
        return true;
    }
    return a.first() <= b.first() && a.witness() <= b.witness();
}

bool iw_equiv(const IWValue& a, const IWValue& b) {
    if (a.witness().is_inf() && b.witness().is_inf()) {
        return true;
    }
    return a.first() == b.first() && a.witness() == b.witness();
}

IWValue iw_sup(const std::vector<IWValue>& values) {
    if (values.empty()) {
        throw std::invalid_argument("iw_sup of an empty set");
    }
    ExtNonNeg w = values.front().witness();
    Rational f = values.front().first();
    for (const auto& v : values) {
        w = max(w, v.witness());
        f = std::max(f, v.first());
    }
    if (w.is_inf()) {
        return IWValue::infinite();
    }
    return {f, w};
}

// -----------------------------------------------------------------------------

namespace {

// Repeated averaging of neighbouring partial sums; kills an alternating tail.
Rational averaged(const std::vector<Rational>& xs, std::size_t from, std::size_t count) {
    std::vector<Rational> row(xs.begin() + static_cast<long>(from), xs.begin() + static_cast<long>(from + count));
    while (row.size() > 1) {
        for (std::size_t i = 0; i + 1 < row.size(); ++i) {
            row[i] = (row[i] + row[i + 1]) / 2;
        }
        row.pop_back();
    }
    return row.front();
}

constexpr std::size_t averaging_depth = 48;

} // namespace

LimitReport iw_limit(const std::vector<IWValue>& seq, const ConvergencePolicy& policy) {
    if (seq.empty()) {
        throw std::invalid_argument("iw_limit of an empty sequence");
    }
    LimitReport rep;
    rep.iterations = static_cast<long>(seq.size());
    if (seq.back().witness().is_inf()) {
        rep.value = IWValue::infinite();
        rep.diverged = true;
        rep.heuristic = false;
        rep.reason = "witness is inf";
        return rep;
    }

    SequenceMonitor witness_mon(policy);
    Verdict v = Verdict::Running;
    for (std::size_t i = 0; i < seq.size() && v == Verdict::Running; ++i) {
        if (seq[i].witness().is_inf()) {
            continue;
        }
        const Rational prev = i == 0 || seq[i - 1].witness().is_inf() ? Rational(0) : seq[i - 1].witness().value();
        const Rational& cur = seq[i].witness().value();
        v = witness_mon.push(cur.get_d(), Rational(cur - prev).get_d());
    }
    rep.last_increment = witness_mon.last_increment();
    if (v != Verdict::Converged) {
        rep.value = IWValue::infinite();
        rep.diverged = true;
        rep.reason = v == Verdict::Diverged ? witness_mon.reason() : "witnesses did not stabilise";
        return rep;
    }
    const ExtNonNeg witness = seq.back().witness();

    std::vector<Rational> firsts;
    std::deque<double> recent;
    firsts.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        firsts.push_back(seq[i].first());
        if (i > 0) {
            recent.push_back(std::fabs(Rational(firsts[i] - firsts[i - 1]).get_d()));
            if (recent.size() > 2 * static_cast<std::size_t>(policy.window)) {
                recent.pop_front();
            }
        }
    }
    Rational first = firsts.back();
    if (!tail_certified(recent, policy.window, policy.tol) &&
        !(recent.size() >= static_cast<std::size_t>(policy.window) &&
          std::all_of(recent.end() - policy.window, recent.end(), [](double d) { return d == 0; }))) {
        if (firsts.size() < averaging_depth + 1) {
            throw LimitUndetected("first components have not settled and the prefix is too short to accelerate");
        }
        const std::size_t n = firsts.size();
        const Rational e1 = averaged(firsts, n - averaging_depth, averaging_depth);
        const Rational e0 = averaged(firsts, n - averaging_depth - 1, averaging_depth);
        if (std::fabs(Rational(e1 - e0).get_d()) >= policy.tol) {
            throw LimitUndetected("first components oscillate without settling");
        }
        first = e1;
        rep.accelerated = true;
    }
    if (abs(first) > witness.value()) {
        first = first < 0 ? Rational(-witness.value()) : witness.value();
    }
    rep.value = IWValue(first, witness);
    rep.reason = witness_mon.reason();
    return rep;
}

} // namespace iwe
