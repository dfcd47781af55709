// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any of them fails. Expected values are computed here by hand (closed forms,
// direct enumeration) rather than taken from engine output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "iwe/certificates.hpp"
#include "iwe/corpus.hpp"
#include "iwe/eval.hpp"
#include "iwe/oracle.hpp"
#include "iwe/parser.hpp"
#include "iwe/values.hpp"
#include "iwe/wp.hpp"
#include "iwe/wpt.hpp"
#include "unit/random_programs.hpp"

using namespace iwe;

namespace {

Expr E(const char* text) { return parse_expression(text); }
Program P(const char* text) { return parse_program(text); }
IWPairExpr pair(const char* f, const char* g) { return {E(f), E(g)}; }

// Collects the first few failure messages of one criterion.
class Check {
  public:
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ++failures_;
            if (failures_ <= 5) {
                notes_ << "\n    " << what;
            }
        }
    }
    bool ok() const { return failures_ == 0; }
    std::string notes() const {
        std::string n = notes_.str();
        if (failures_ > 5) {
            n += "\n    ... " + std::to_string(failures_ - 5) + " more";
        }
        return n;
    }

  private:
    long failures_ = 0;
    std::ostringstream notes_;
};

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

long sign(long x) { return (x > 0) - (x < 0); }

// --- criteria -----------------------------------------------------------------------

void trunc_exact(Check& ck) {
    const Program c = corpus_program("trunc");
    const Expr w = wp_symbolic(c, E("x"));
    for (long x = -10; x <= 10; ++x) {
        const Rational expected = Rational(x) + Rational(3, 4);
        const State s{{"x", x}};
        ck.expect(eval_expr(w, s).value() == expected, "symbolic wp at x=" + std::to_string(x));
        // Hand enumeration: x with 1/2, x+1 with 1/4, x+2 with 1/4.
        ck.expect(expected == Rational(x, 2) + Rational(x + 1, 4) + Rational(x + 2, 4), "closed form");
        if (x >= 0) {
            ck.expect(wp_value(c, E("x"), s).value == ExtNonNeg(expected), "wp_value at x=" + std::to_string(x));
        }
    }
}

void alttrunc_exact(Check& ck) {
    const Program c = corpus_program("alttrunc");
    for (long x = -10; x <= 10; ++x) {
        const IWReport r = wpt_value(c, pair("x", "abs(x)"), State{{"x", x}});
        const Rational first = make_rational(2 * x + 1, 4);
        const Rational witness = make_rational(2 * std::labs(x) + std::labs(x + 1) + std::labs(x + 2), 4);
        ck.expect(r.value == IWValue(first, ExtNonNeg(witness)),
                  "x=" + std::to_string(x) + " got " + r.value.to_string());
    }
}

void geo_pathologies(Check& ck) {
    const Program c = corpus_program("geo");
    for (const auto& p : {pair("(-2)^x", "2^x"), pair("(-2)^x / x", "2^x / x")}) {
        const IWReport r = wpt_value(c, p, State{{"x", 0}});
        ck.expect(r.value == IWValue::infinite(), "value " + r.value.to_string());
        ck.expect(r.value.is_canonical(), "canonical");
        ck.expect(r.diverged, "flagged divergent");
        ck.expect(r.iterations <= 200, "iterations " + std::to_string(r.iterations));
    }
}

void offset_walk(Check& ck) {
    const char* g = "sum(i,0,inf, abs(F-3*i)/2^(i+1))";
    MixedCertificate cert;
    cert.prefix = P("F := F + 1");
    cert.guard = E("1/2");
    cert.body = P("F := F - 3");
    cert.post = pair("F", "abs(F)");
    cert.bound = E(g);
    cert.inv = ex::add(E(g), E("F - 3"));
    cert.family = E("sum(i,0,n, abs(F-3*i)/2^(i+1))");
    cert.grid = parse_grid("F=-20..20");
    cert.entry_states = {State{{"F", 0}}};
    cert.n_max = 50;
    cert.tol = 1e-9;
    const CertificateReport r = check_mixed_upper(cert);
    ck.expect(r.ok, "check_mixed_upper failed");
    ck.expect(r.entry.size() == 1, "one entry row");
    if (r.entry.size() == 1) {
        ck.expect(near(r.entry[0].first.get_d(), -2.0, 1e-9), "bound first " + to_string(r.entry[0].first));
        ck.expect(r.entry[0].witness <= ExtNonNeg(Rational(6) + Rational(1, 1000000000)),
                  "bound witness " + r.entry[0].witness.to_string());
    }

    const Program op = corpus_program("op");
    const State s{{"F", 0}};
    const IWReport w = wpt_value(op, pair("F", "abs(F)"), s);
    ck.expect(near(w.value.first().get_d(), -2.0, 1e-6), "wpt first " + w.value.to_string());

    // Oracle: depth-40 enumeration, error bounded by residual times max |F| seen.
    const SubDistribution d = enumerate(op, s, 40);
    const JordanReport j = expected_value(d, E("F"));
    double max_abs = 0;
    for (const auto* m : {&d.terminal, &d.pending}) {
        for (const auto& [t, mass] : *m) {
            max_abs = std::max(max_abs, std::fabs(t.at("F").get_d()));
        }
    }
    const double slack = 1e-6 + d.residual.get_d() * max_abs;
    ck.expect(near(j.expectation().get_d(), w.value.first().get_d(), slack),
              "oracle " + std::to_string(j.expectation().get_d()) + " vs engine, slack " + std::to_string(slack));
}

void kozen(Check& ck) {
    const Program k = corpus_program("kozen");
    const Program loop = top_level_statements(k).back();
    const NonNegCheckReport r =
        verify_upper_invariant(loop->expr, loop->first, E("c"), E("[x>=0]*(c+2*x)"), parse_grid("x=-5..30,c=0..10"));
    ck.expect(r.ok, "invariant check failed");
    for (const auto& row : r.rows) {
        ck.expect(!row.approximated, "inexact row at " + row.state.to_string());
    }
    for (long n = 1; n <= 10; ++n) {
        const WpResult v = wp_value(k, E("c"), State{{"n", n}});
        ck.expect(!v.value.is_inf() && near(v.value.to_double(), 2.0 * n, 1e-6),
                  "n=" + std::to_string(n) + " got " + v.value.to_string());
        ck.expect(v.value <= ExtNonNeg(Rational(2 * n)), "above the invariant bound at n=" + std::to_string(n));
    }
}

MixedCertificate walk_cert(bool upper) {
    MixedCertificate c;
    c.guard = E("1/2");
    c.body = P("x := -x - sign(x)");
    c.post = pair("x", "abs(x)");
    c.bound = E("abs(x) + 1");
    if (upper) {
        c.inv = E("abs(x) + [x != 0] + x/3 - sign(x)/9");
        c.family = E("sum(i,0,n, (abs(x) + [x != 0]*i)/2^(i+1))");
    } else {
        c.inv = E("abs(x) + [x != 0]");
        c.family = E("sum(i,0,n, (abs(x) + [x != 0]*i + (-1)^i*(x + sign(x)*i))/2^(i+1))");
    }
    c.grid = parse_grid("x=-10..10");
    c.n_max = 30;
    return c;
}

void walk(Check& ck) {
    const CertificateReport up = check_mixed_upper(walk_cert(true));
    const CertificateReport lo = check_mixed_lower(walk_cert(false));
    ck.expect(up.ok, "upper certificate failed");
    ck.expect(lo.ok, "lower certificate failed");
    ck.expect(up.head.size() == 21 && lo.head.size() == 21, "grid rows");
    const Expr h = walk_cert(true).family;
    for (std::size_t i = 0; i < up.head.size() && i < lo.head.size(); ++i) {
        const State& s = up.head[i].state;
        const long x = s.at("x").get_si();
        const double truth = x / 3.0 - sign(x) / 9.0;
        const IWReport w = wpt_loop_value(E("1/2"), P("x := -x - sign(x)"), pair("x", "abs(x)"), s);
        const double v = w.value.first().get_d();
        ck.expect(near(v, truth, 1e-6), "engine at x=" + std::to_string(x));
        ck.expect(lo.head[i].first.get_d() <= v + 1e-6 && v <= up.head[i].first.get_d() + 1e-6,
                  "sandwich at x=" + std::to_string(x));
        ck.expect(near(up.head[i].first.get_d(), truth, 1e-6) && near(lo.head[i].first.get_d(), truth, 1e-6),
                  "bounds not tight at x=" + std::to_string(x));
        const double sup = sup_H(h, "n", s, series_policy()).to_double();
        ck.expect(near(sup, std::labs(x) + (x != 0 ? 1.0 : 0.0), 1e-9), "sup_H at x=" + std::to_string(x));
    }
}

void soundness(Check& ck) {
    gen::RandomPrograms gen(2024);
    for (int i = 0; i < 500; ++i) {
        const Program c = gen.loop_free();
        const Expr f = gen.mixed_expr();
        const State s = gen.state();
        const IWReport w = wpt_value(c, default_pair(f), s);
        const JordanReport j = expected_value(enumerate(c, s, guard_depth(c)), f);
        ck.expect(j.residual == 0 && w.value.first() == j.e_plus - j.e_minus,
                  "program " + std::to_string(i) + ": " + to_string(c) + " f=" + to_string(f));
    }
}

IWValue random_value(std::mt19937& rng, bool canonical) {
    const int wit = std::uniform_int_distribution<int>(0, 4)(rng);
    if (wit == 4) {
        const long f = std::uniform_int_distribution<int>(-3, 3)(rng);
        return canonical ? IWValue::infinite() : IWValue::raw(Rational(f), ExtNonNeg::infinity());
    }
    const long f = std::uniform_int_distribution<int>(-wit, wit)(rng);
    return {Rational(f), ExtNonNeg(static_cast<long>(wit))};
}

void domain_properties(Check& ck) {
    std::mt19937 rng(8);
    std::vector<IWValue> pool;
    for (int i = 0; i < 40; ++i) {
        pool.push_back(random_value(rng, i % 2 == 0));
    }
    for (const auto& a : pool) {
        ck.expect(iw_leq(a, a) && iw_equiv(a, a), "reflexivity");
        for (const auto& b : pool) {
            ck.expect(iw_equiv(a, b) == iw_equiv(b, a), "equivalence symmetry");
            const IWValue ca = a.canonical();
            const IWValue cb = b.canonical();
            if (iw_leq(ca, cb) && iw_leq(cb, ca)) {
                ck.expect(ca == cb, "antisymmetry on canonical values");
            }
            for (const auto& c : pool) {
                if (iw_leq(a, b) && iw_leq(b, c)) {
                    ck.expect(iw_leq(a, c), "transitivity");
                }
                if (iw_equiv(a, b) && iw_equiv(b, c)) {
                    ck.expect(iw_equiv(a, c), "equivalence transitivity");
                }
            }
        }
    }
    // Raw pairs with an infinite witness are mutually below each other but differ.
    const IWValue r4 = IWValue::raw(Rational(4), ExtNonNeg::infinity());
    const IWValue r7 = IWValue::raw(Rational(7), ExtNonNeg::infinity());
    ck.expect(iw_leq(r4, r7) && iw_leq(r7, r4) && !(r4 == r7), "raw-pair antisymmetry failure");

    gen::RandomPrograms gen(88);
    for (int i = 0; i < 50; ++i) {
        const Program loop = gen.loop();
        const IWPairExpr p = default_pair(gen.mixed_expr());
        const IWPairExpr q{p.first, ex::add(ex::abs(p.first), gen.nonneg_expr())};
        const State s = gen.state(-3, 3);
        DecompTriple prev{ExtNonNeg(0L), ExtNonNeg(0L), ExtNonNeg(0L)};
        for (long n = 0; n <= 30; ++n) {
            const DecompTriple t = char_triple_iterate(loop->expr, loop->first, p, s, n);
            const IWValue direct = pair_iterate(loop->expr, loop->first, p, s, n);
            ck.expect(!t.c.is_inf() && direct == IWValue(t.a.value() - t.b.value(), t.c),
                      "decomposition " + to_string(loop) + " n=" + std::to_string(n));
            if (n <= 20) {
                const DecompTriple u = char_triple_iterate(loop->expr, loop->first, q, s, n);
                ck.expect(prev.a <= u.a && prev.b <= u.b && prev.c <= u.c, "triple non-decreasing");
                ck.expect(u.b <= u.c && u.a <= Rational(2) * u.c, "b <= c and a <= 2c");
                prev = u;
            }
        }
    }
    for (int i = 0; i < 200; ++i) {
        const Program c = gen.loop_free();
        const Expr f = gen.nonneg_expr();
        const Expr g = gen.nonneg_expr();
        const Rational k = make_rational(gen.uniform(0, 7), gen.uniform(1, 3));
        const State s = gen.state();
        const ExtNonNeg lhs = wp_value(c, ex::add(f, ex::mul(ex::constant(k), g)), s).value;
        const ExtNonNeg rhs = wp_value(c, f, s).value + k * wp_value(c, g, s).value;
        ck.expect(lhs == rhs, "linearity " + to_string(c));
    }
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<void(Check&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "truncated geometric wp is x + 3/4", 1, trunc_exact},
        {2, "alternating truncated geometric pair", 1, alttrunc_exact},
        {3, "geometric counter posts give (0, inf)", 1, geo_pathologies},
        {4, "offset walk upper certificate, engine and oracle", 10, offset_walk},
        {5, "Kozen invariant and wp = 2n", 30, kozen},
        {6, "walk upper and lower certificates", 10, walk},
        {7, "soundness on 500 loop-free programs", 60, soundness},
        {8, "domain property suite", 60, domain_properties},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Check ck;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(ck);
        } catch (const std::exception& e) {
            ck.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_s;
        if (!in_time) {
            ck.expect(false, "runtime " + std::to_string(secs) + " s over the " + std::to_string(c.limit_s) + " s limit");
        }
        const bool ok = ck.ok();
        failed += ok ? 0 : 1;
        std::printf("criterion %d: %s  %-48s %.3f s%s\n", c.id, ok ? "PASS" : "FAIL", c.name, secs,
                    ok ? "" : ck.notes().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
