// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "iwe/ast.hpp"

namespace iwe {

/// One bundled program together with the question it is usually asked.
struct CorpusEntry {
    std::string name;
    std::string title;
    std::string note;
    std::string source;
    /// Typical post-expectation and a small state grid for it.
    std::string post;
    std::string states;
};

const std::vector<CorpusEntry>& corpus();

/// Throws std::out_of_range for unknown names.
const CorpusEntry& corpus_entry(const std::string& name);

Program corpus_program(const std::string& name);

} // namespace iwe
