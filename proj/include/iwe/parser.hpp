// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "iwe/ast.hpp"

namespace iwe {

/// Parses one program. Throws ParseError with the line and column of the offending token.
Program parse_program(std::string_view text);

/// Parses an expectation expression (series and `inf` allowed).
Expr parse_expression(std::string_view text);

/// Parses a predicate such as `x >= 0 && c != 1`.
Pred parse_predicate(std::string_view text);

} // namespace iwe
