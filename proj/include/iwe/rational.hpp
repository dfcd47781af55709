// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace iwe {

/// Program values are unbounded integers; probabilities and expectation values
/// are exact rationals.
using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

/// Canonical "p/q" form ("p" when q = 1).
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

/// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25".
/// Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Exact conversion of a finite double (every finite double is a dyadic rational).
Rational rational_from_double(double d);

double to_double(const Rational& r);

bool is_integer(const Rational& r);

Rational abs(const Rational& r);

int sign(const Rational& r);

/// Floor modulo: result has the sign of the divisor. Divisor must be non-zero.
Integer floor_mod(const Integer& a, const Integer& b);

std::size_t hash_value(const Integer& z);

} // namespace iwe
