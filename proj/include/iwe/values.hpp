// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>
#include <vector>

#include "iwe/convergence.hpp"
#include "iwe/rational.hpp"

namespace iwe {

/// Value of an expression: a rational or +inf.
class ExtValue {
  public:
    ExtValue() = default;
    ExtValue(Rational v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    ExtValue(long v) : value_(v) {}                 // NOLINT(google-explicit-constructor)
    static ExtValue infinity();

    bool is_inf() const { return inf_; }
    /// Finite value; throws DomainError at inf.
    const Rational& value() const;
    double to_double() const;
    std::string to_string() const;

    friend bool operator==(const ExtValue& a, const ExtValue& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
    }

  private:
    bool inf_ = false;
    Rational value_;
};

/// Element of [0, inf]. Addition and positive scaling absorb inf; 0 * inf is rejected.
class ExtNonNeg {
  public:
    ExtNonNeg() = default;
    /// Throws DomainError when v < 0.
    explicit ExtNonNeg(Rational v);
    explicit ExtNonNeg(long v) : ExtNonNeg(Rational(v)) {}
    /// Throws DomainError when v is a negative rational.
    static ExtNonNeg from(const ExtValue& v);
    static ExtNonNeg infinity();

    bool is_inf() const { return inf_; }
    const Rational& value() const;
    double to_double() const;
    std::string to_string() const;
    ExtValue ext() const { return inf_ ? ExtValue::infinity() : ExtValue(value_); }

    friend ExtNonNeg operator+(const ExtNonNeg& a, const ExtNonNeg& b);
    /// c * a for c >= 0.
    friend ExtNonNeg operator*(const Rational& c, const ExtNonNeg& a);

    friend bool operator==(const ExtNonNeg& a, const ExtNonNeg& b) {
        return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
    }
    friend bool operator<=(const ExtNonNeg& a, const ExtNonNeg& b);
    friend bool operator<(const ExtNonNeg& a, const ExtNonNeg& b) { return a <= b && !(a == b); }

  private:
    bool inf_ = false;
    Rational value_;
};

ExtNonNeg max(const ExtNonNeg& a, const ExtNonNeg& b);

/// Pointwise value of an integrability-witnessing pair.
class IWValue {
  public:
    IWValue() = default;
    /// Validates |first| <= witness and returns the canonical form.
    IWValue(Rational first, ExtNonNeg witness);
    /// Validates |first| <= witness but keeps a non-zero first component at inf.
    static IWValue raw(Rational first, ExtNonNeg witness);
    static IWValue infinite() { return {Rational(0), ExtNonNeg::infinity()}; }

    const Rational& first() const { return first_; }
    const ExtNonNeg& witness() const { return witness_; }
    bool is_canonical() const { return !witness_.is_inf() || first_ == 0; }
    IWValue canonical() const;
    std::string to_string() const;

    /// Structural equality of the stored pair (not the equivalence).
    friend bool operator==(const IWValue& a, const IWValue& b) {
        return a.first_ == b.first_ && a.witness_ == b.witness_;
    }

  private:
    Rational first_;
    ExtNonNeg witness_;
};

IWValue iw_add(const IWValue& a, const IWValue& b);
/// c * (f, g) = (c f, |c| g).
IWValue iw_scale(const Rational& c, const IWValue& a);
/// h * (f, g) = (h f, |h| g) for the value h of an expectation at one state.
IWValue iw_mul(const Rational& h, const IWValue& a);

/// The quasi-order: b's witness is inf, or both components are below b's.
bool iw_leq(const IWValue& a, const IWValue& b);
/// Equal, or both witnesses inf.
bool iw_equiv(const IWValue& a, const IWValue& b);
/// Least upper bound of a non-empty finite set. Throws std::invalid_argument when empty.
IWValue iw_sup(const std::vector<IWValue>& values);

struct LimitReport {
    IWValue value;
    bool diverged = false;
    bool heuristic = true;
    bool accelerated = false;
    long iterations = 0;
    double last_increment = 0;
    std::string reason;
};

/// Limit of a finite prefix of an IW sequence. The witnesses decide convergence;
/// first components must then settle, directly or after repeated averaging of an
/// alternating tail. Throws LimitUndetected otherwise.
LimitReport iw_limit(const std::vector<IWValue>& seq, const ConvergencePolicy& policy = series_policy());

template <std::size_t K>
using ExtVec = std::array<ExtNonNeg, K>;

template <std::size_t K>
ExtVec<K> operator+(const ExtVec<K>& a, const ExtVec<K>& b) {
    ExtVec<K> out;
    for (std::size_t i = 0; i < K; ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

template <std::size_t K>
ExtVec<K> operator*(const Rational& c, const ExtVec<K>& a) {
    ExtVec<K> out;
    for (std::size_t i = 0; i < K; ++i) {
        out[i] = c * a[i];
    }
    return out;
}

} // namespace iwe
