// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/json_io.hpp"

#include <cmath>

namespace iwe {

namespace {

json number_or_string(double d) {
    if (std::isinf(d)) {
        return d > 0 ? "inf" : "-inf";
    }
    return d;
}

json traces(const std::vector<LoopRecord>& records) {
    json out = json::array();
    for (const auto& rec : records) {
        json rows = json::array();
        for (const auto& row : rec.trace) {
            json r = json::array();
            for (double d : row) {
                r.push_back(number_or_string(d));
            }
            rows.push_back(std::move(r));
        }
        out.push_back({{"iterations", rec.iterations}, {"exact", rec.exact}, {"reason", rec.reason}, {"rows", rows}});
    }
    return out;
}

} // namespace

json to_json(const Rational& r) { return to_string(r); }

json to_json(const ExtValue& v) { return v.to_string(); }

json to_json(const ExtNonNeg& v) { return v.to_string(); }

json to_json(const IWValue& v) { return {{"first", to_string(v.first())}, {"witness", v.witness().to_string()}}; }

json to_json(const State& s) {
    json out = json::object();
    for (const auto& [name, value] : s.values()) {
        out[name] = value.get_str();
    }
    return out;
}

json to_json(const CheckRow& r) {
    return {{"state", to_json(r.state)}, {"condition", r.label},         {"lhs", to_json(r.lhs)},
            {"rhs", to_json(r.rhs)},     {"ok", r.ok},                   {"approximated", r.approximated},
            {"margin", number_or_string(r.margin)}};
}

json to_json(const NonNegCheckReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back(to_json(row));
    }
    return {{"ok", r.ok},
            {"verdict", r.ok ? "grid-certified" : "refuted"},
            {"checked", r.rows.size()},
            {"failures", r.failures().size()},
            {"rows", rows}};
}

json to_json(const IWReport& r, bool trace) {
    json out = {{"state", to_json(r.state)},
                {"value", to_json(r.value)},
                {"iterations", r.iterations},
                {"last_increment", number_or_string(r.last_increment)},
                {"diverged", r.diverged},
                {"heuristic", r.heuristic},
                {"reason", r.reason}};
    if (trace) {
        out["traces"] = traces(r.traces);
    }
    return out;
}

json to_json(const SubDistribution& d) {
    json terminal = json::array();
    for (const auto& [s, m] : d.terminal) {
        terminal.push_back({{"state", to_json(s)}, {"mass", to_string(m)}});
    }
    return {{"terminal", terminal}, {"residual", to_string(d.residual)}, {"depth", d.depth}};
}

json to_json(const JordanReport& r) {
    return {{"e_plus", to_string(r.e_plus)},
            {"e_minus", to_string(r.e_minus)},
            {"e_abs", to_string(r.e_abs)},
            {"expectation", to_string(r.expectation())},
            {"residual", to_string(r.residual)},
            {"verdict", to_string(r.verdict)}};
}

json to_json(const ComparisonReport& r) {
    return {{"match", r.match},
            {"exact", r.exact},
            {"comparable", r.comparable},
            {"wpt", to_json(r.wpt, false)},
            {"oracle", to_json(r.oracle)},
            {"witness_expectation", to_string(r.witness_expectation)},
            {"first_difference", r.first_difference},
            {"witness_difference", r.witness_difference},
            {"bound", r.bound},
            {"note", r.note}};
}

namespace {

json bound_row(const BoundRow& b) {
    json out = {{"state", to_json(b.state)},
                {"bound", {{"first", to_string(b.first)}, {"witness", b.witness.to_string()}}},
                {"bound_approx", {{"first", b.first.get_d()}, {"witness", number_or_string(b.witness.to_double())}}},
                {"sup_h", b.sup_h.to_string()}};
    if (b.has_engine) {
        out["engine"] = to_json(b.engine);
        out["sandwich_ok"] = b.sandwich_ok;
    }
    return out;
}

} // namespace

json to_json(const CertificateReport& r) {
    json conditions = json::array();
    for (const auto& c : r.conditions) {
        json failures = json::array();
        for (const auto& f : c.failures) {
            failures.push_back(to_json(f));
        }
        conditions.push_back({{"condition", c.name},
                              {"ok", c.ok},
                              {"checked", c.checked},
                              {"min_margin", number_or_string(c.min_margin)},
                              {"failures", failures}});
    }
    json head = json::array();
    for (const auto& b : r.head) {
        head.push_back(bound_row(b));
    }
    json out = {{"rule", r.upper ? "upper" : "lower"},
                {"ok", r.ok},
                {"verdict", r.ok ? "grid-certified" : "refuted"},
                {"sandwich_ok", r.sandwich_ok},
                {"conditions", conditions},
                {"loop_head", head}};
    if (!r.entry.empty()) {
        json entry = json::array();
        for (const auto& b : r.entry) {
            entry.push_back(bound_row(b));
        }
        out["entry"] = entry;
    }
    return out;
}

json to_json(const NonNegCertificateReport& r) {
    json out = to_json(r.check);
    json head = json::array();
    for (const auto& [s, v] : r.head) {
        head.push_back({{"state", to_json(s)}, {"bound", v.to_string()}});
    }
    out["loop_head"] = head;
    if (!r.entry.empty()) {
        json entry = json::array();
        for (const auto& [s, v] : r.entry) {
            entry.push_back({{"state", to_json(s)}, {"bound", v.to_string()}});
        }
        out["entry"] = entry;
    }
    return out;
}

IWValue iw_value_from_json(const json& j) {
    const std::string w = j.at("witness").get<std::string>();
    const Rational first = parse_rational(j.at("first").get<std::string>());
    if (w == "inf") {
        return IWValue::raw(first, ExtNonNeg::infinity());
    }
    return IWValue::raw(first, ExtNonNeg(parse_rational(w)));
}

} // namespace iwe
