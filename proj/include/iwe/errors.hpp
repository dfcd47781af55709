// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace iwe {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Lexical or syntactic error, or a construct used where the grammar forbids it.
class ParseError : public Error {
  public:
    ParseError(const std::string& message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& detail() const { return detail_; }

  private:
    std::string detail_;
    int line_;
    int column_;
};

/// State-dependent failure while evaluating an expression, guard, or program:
/// division by zero, guard out of [0,1], negative exponent, and so on.
class EvalError : public Error {
  public:
    using Error::Error;
};

/// Violated precondition of the expectation domain (e.g. |first| > witness, 0 * inf).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A limit or supremum could not be detected under the convergence policy.
class LimitUndetected : public Error {
  public:
    using Error::Error;
};

} // namespace iwe
