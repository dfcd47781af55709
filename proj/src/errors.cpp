// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/errors.hpp"

namespace iwe {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), detail_(message), line_(line),
      column_(column) {}

} // namespace iwe
