// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/state.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "iwe/errors.hpp"

namespace iwe {

const Integer* State::find(const std::string& name) const {
    const auto it = vars_.find(name);
    return it == vars_.end() ? nullptr : &it->second;
}

const Integer& State::at(const std::string& name) const {
    if (const Integer* v = find(name)) {
        return *v;
    }
    throw EvalError("unbound variable '" + name + "' in state {" + to_string() + "}");
}

void State::set(const std::string& name, Integer value) { vars_[name] = std::move(value); }

State State::with(const std::string& name, Integer value) const {
    State s = *this;
    s.set(name, std::move(value));
    return s;
}

std::size_t State::hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& [name, value] : vars_) {
        h ^= std::hash<std::string>{}(name) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= hash_value(value) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::string State::to_string() const {
    std::string out;
    for (const auto& [name, value] : vars_) {
        if (!out.empty()) {
            out += ", ";
        }
        out += name + "=" + value.get_str();
    }
    return out;
}

State complete(const State& s, const std::set<std::string>& vars) {
    State out = s;
    for (const auto& v : vars) {
        if (!out.contains(v)) {
            out.set(v, Integer(0));
        }
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

Integer parse_integer(std::string_view text, std::string_view whole) {
    text = trim(text);
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        digits.remove_prefix(1);
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw std::invalid_argument("malformed integer '" + std::string(text) + "' in '" + std::string(whole) + "'");
    }
    std::string s(text);
    if (s.front() == '+') {
        s.erase(0, 1);
    }
    return Integer(s);
}

bool valid_name(std::string_view name) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name.front())) || name.front() == '_')) {
        return false;
    }
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; });
}

struct Range {
    std::string name;
    Integer lo;
    Integer hi;
};

std::vector<Range> parse_ranges(std::string_view text) {
    std::vector<Range> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        const std::string_view item = trim(text.substr(start, comma - start));
        start = comma + 1;
        if (item.empty()) {
            if (comma == text.size()) {
                break;
            }
            throw std::invalid_argument("empty entry in '" + std::string(text) + "'");
        }
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("expected var=value in '" + std::string(item) + "'");
        }
        Range r;
        r.name = std::string(trim(item.substr(0, eq)));
        if (!valid_name(r.name)) {
            throw std::invalid_argument("bad variable name '" + r.name + "'");
        }
        const std::string_view rhs = trim(item.substr(eq + 1));
        const auto dots = rhs.find("..");
        if (dots == std::string_view::npos) {
            r.lo = r.hi = parse_integer(rhs, text);
        } else {
            r.lo = parse_integer(rhs.substr(0, dots), text);
            r.hi = parse_integer(rhs.substr(dots + 2), text);
        }
        if (r.lo > r.hi) {
            throw std::invalid_argument("empty range for '" + r.name + "'");
        }
        for (const auto& prev : out) {
            if (prev.name == r.name) {
                throw std::invalid_argument("variable '" + r.name + "' given twice");
            }
        }
        out.push_back(std::move(r));
        if (comma == text.size()) {
            break;
        }
    }
    return out;
}

} // namespace

State parse_state(std::string_view text) {
    State s;
    for (const auto& r : parse_ranges(text)) {
        if (r.lo != r.hi) {
            throw std::invalid_argument("a single state cannot contain the range for '" + r.name + "'");
        }
        s.set(r.name, r.lo);
    }
    return s;
}

std::vector<State> parse_grid(std::string_view text) {
    const auto ranges = parse_ranges(text);
    std::vector<State> out{State{}};
    for (const auto& r : ranges) {
        std::vector<State> next;
        for (const auto& s : out) {
            for (Integer v = r.lo; v <= r.hi; ++v) {
                next.push_back(s.with(r.name, v));
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace iwe
