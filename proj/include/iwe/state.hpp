// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "iwe/rational.hpp"

namespace iwe {

/// A program state: finite map from variable names to integers.
class State {
  public:
    State() = default;
    State(std::initializer_list<std::pair<const std::string, Integer>> init) : vars_(init) {}

    const Integer* find(const std::string& name) const;
    /// Throws EvalError when the variable is unbound.
    const Integer& at(const std::string& name) const;
    bool contains(const std::string& name) const { return vars_.contains(name); }

    void set(const std::string& name, Integer value);
    State with(const std::string& name, Integer value) const;

    const std::map<std::string, Integer>& values() const { return vars_; }
    std::size_t size() const { return vars_.size(); }

    std::size_t hash() const;
    /// "x=1, y=-2" in name order.
    std::string to_string() const;

    friend bool operator==(const State& a, const State& b) { return a.vars_ == b.vars_; }
    friend bool operator<(const State& a, const State& b) { return a.vars_ < b.vars_; }

  private:
    std::map<std::string, Integer> vars_;
};

struct StateHash {
    std::size_t operator()(const State& s) const { return s.hash(); }
};

/// Adds every variable of `vars` missing from `s`, bound to 0.
State complete(const State& s, const std::set<std::string>& vars);

/// Parses "x=1, y=-2".
State parse_state(std::string_view text);

/// Parses a grid "x=-3..3,c=0..10" (single values allowed, e.g. "x=4").
/// The result is the cross product, first variable outermost.
std::vector<State> parse_grid(std::string_view text);

} // namespace iwe
