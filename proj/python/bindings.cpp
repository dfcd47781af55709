// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Thin pybind11 layer. Results cross the boundary as the same JSON text the CLI
// prints; the Python package decodes it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>

#include "iwe/corpus.hpp"
#include "iwe/errors.hpp"
#include "iwe/json_io.hpp"
#include "iwe/oracle.hpp"
#include "iwe/parser.hpp"
#include "iwe/wp.hpp"
#include "iwe/wpt.hpp"

namespace py = pybind11;
using namespace iwe;

namespace {

Program load(const std::string& text) {
    if (text.rfind("corpus:", 0) == 0) {
        return corpus_program(text.substr(7));
    }
    return parse_program(text);
}

// Values may be Python ints or decimal strings (big integers survive either way).
State to_state(const std::map<std::string, py::object>& values, const Program& prog) {
    State s;
    for (const auto& [name, v] : values) {
        s.set(name, Integer(py::str(v).cast<std::string>()));
    }
    return complete(s, free_variables(prog));
}

IWPairExpr post_pair(const std::string& first, const std::optional<std::string>& witness) {
    const Expr f = parse_expression(first);
    return witness ? IWPairExpr{f, parse_expression(*witness)} : default_pair(f);
}

} // namespace

PYBIND11_MODULE(_iwe, m) {
    m.doc() = "Expected values of probabilistic programs with mixed-sign posts";

    auto base = py::register_exception<Error>(m, "IWEError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<EvalError>(m, "EvalError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<LimitUndetected>(m, "LimitUndetected", base.ptr());

    m.def("format_program", [](const std::string& text) { return to_string(load(text)); }, py::arg("program"));
    m.def("format_expression", [](const std::string& text) { return to_string(parse_expression(text)); },
          py::arg("expr"));

    m.def(
        "wpt_json",
        [](const std::string& program, const std::string& first, const std::optional<std::string>& witness,
           const std::map<std::string, py::object>& state, bool trace) {
            const Program prog = load(program);
            const State s = to_state(state, prog);
            const IWPairExpr p = post_pair(first, witness);
            py::gil_scoped_release release;
            return to_json(wpt_value(prog, p, s), trace).dump();
        },
        py::arg("program"), py::arg("post"), py::arg("witness") = py::none(),
        py::arg("state") = std::map<std::string, py::object>{}, py::arg("trace") = false);

    m.def(
        "wp_json",
        [](const std::string& program, const std::string& post, const std::map<std::string, py::object>& state) {
            const Program prog = load(program);
            const WpResult r = wp_value(prog, parse_expression(post), to_state(state, prog));
            json out;
            out["value"] = to_json(r.value);
            out["iterations"] = r.stats.max_iterations;
            out["diverged"] = r.stats.diverged;
            out["heuristic"] = r.stats.heuristic;
            out["reason"] = r.stats.reason;
            return out.dump();
        },
        py::arg("program"), py::arg("post"), py::arg("state") = std::map<std::string, py::object>{});

    m.def(
        "oracle_json",
        [](const std::string& program, const std::string& post, const std::map<std::string, py::object>& state,
           long depth) {
            const Program prog = load(program);
            const SubDistribution d = enumerate(prog, to_state(state, prog), depth);
            json out;
            out["distribution"] = to_json(d);
            out["expectation"] = to_json(expected_value(d, parse_expression(post)));
            return out.dump();
        },
        py::arg("program"), py::arg("post"), py::arg("state") = std::map<std::string, py::object>{},
        py::arg("depth") = 40);

    m.def("corpus_names", [] {
        std::vector<std::string> names;
        for (const auto& e : corpus()) {
            names.push_back(e.name);
        }
        return names;
    });
    m.def("corpus_source", [](const std::string& name) { return corpus_entry(name).source; }, py::arg("name"));
}
