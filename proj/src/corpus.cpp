// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/corpus.hpp"

#include <map>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "iwe/parser.hpp"

namespace iwe {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& corpus_sources();
}

namespace {

struct Meta {
    const char* title;
    const char* note;
    const char* post;
    const char* states;
};

const std::map<std::string, Meta>& metadata() {
    static const std::map<std::string, Meta> m = {
        {"tortoise_hare",
         {"tortoise and hare", "race that ends once the hare overtakes; terminates almost surely", "h - t", ""}},
        {"trunc", {"truncated geometric", "loop-free; expected x is x + 3/4", "x", "x=-3..3"}},
        {"alttrunc",
         {"alternating truncated geometric", "loop-free; expected x is x/2 + 1/4 with witness (2|x|+|x+1|+|x+2|)/4",
          "x", "x=-3..3"}},
        {"op", {"decreasing walk", "expected F is F - 2", "F", "F=0"}},
        {"geo", {"geometric counter", "posts (-2)^x and (-2)^x/x are not integrable: result (0, inf)", "(-2)^x", "x=0"}},
        {"geo_parity", {"parity-dependent geometric loop", "guard 2/3 on even x, 1/3 on odd x", "x", "x=0..3"}},
        {"kozen", {"Kozen's counter", "expected number of iterations c is 2n for n >= 0", "c", "n=0..5"}},
        {"walk", {"sign-alternating walk", "expected x is x/3 - sign(x)/9", "x", "x=-3..3"}},
    };
    return m;
}

} // namespace

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> out;
        for (const auto& [name, text] : detail::corpus_sources()) {
            CorpusEntry e;
            e.name = std::string(name);
            e.source = std::string(text);
            if (auto it = metadata().find(e.name); it != metadata().end()) {
                e.title = it->second.title;
                e.note = it->second.note;
                e.post = it->second.post;
                e.states = it->second.states;
            }
            out.push_back(std::move(e));
        }
        return out;
    }();
    return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
    for (const auto& e : corpus()) {
        if (e.name == name) {
            return e;
        }
    }
    throw std::out_of_range("no corpus program named '" + name + "'");
}

Program corpus_program(const std::string& name) { return parse_program(corpus_entry(name).source); }

} // namespace iwe
