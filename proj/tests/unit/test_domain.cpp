// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "iwe/errors.hpp"
#include "iwe/eval.hpp"
#include "iwe/json_io.hpp"
#include "iwe/parser.hpp"
#include "iwe/values.hpp"

using namespace iwe;

namespace {

const ExtNonNeg INF = ExtNonNeg::infinity();

IWValue iw(long f, long w) { return IWValue(Rational(f), ExtNonNeg(w)); }
IWValue iw_inf(long f) { return IWValue::raw(Rational(f), INF); }

ExtValue ev(const char* text, const State& s = {}) { return eval_expr(parse_expression(text), s); }

} // namespace

// --- rationals and states ---------------------------------------------------------

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
    EXPECT_EQ(parse_rational("-6/8"), Rational(-3, 4));
    EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
    EXPECT_EQ(to_string(Rational(-3, 4)), "-3/4");
    EXPECT_EQ(to_string(Rational(5)), "5");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Rational, FloorMod) {
    EXPECT_EQ(floor_mod(Integer(-3), Integer(2)), 1);
    EXPECT_EQ(floor_mod(Integer(7), Integer(-3)), -2);
    EXPECT_THROW(floor_mod(Integer(1), Integer(0)), std::domain_error);
}

TEST(State, GridAndCompletion) {
    const auto g = parse_grid("x=-1..1,c=0..1");
    ASSERT_EQ(g.size(), 6u);
    EXPECT_EQ(g.front().at("x"), -1);
    EXPECT_EQ(g.front().at("c"), 0);
    EXPECT_EQ(g[1].at("c"), 1);
    const State s = complete(parse_state("x=3"), {"x", "y"});
    EXPECT_EQ(s.at("y"), 0);
    EXPECT_EQ(s.to_string(), "x=3, y=0");
    EXPECT_THROW(s.at("z"), EvalError);
    EXPECT_THROW(parse_grid("x=3..1"), std::invalid_argument);
    EXPECT_EQ(parse_grid("x=5").size(), 1u);
}

// --- extended non-negative values -------------------------------------------------

TEST(ExtNonNeg, Arithmetic) {
    EXPECT_TRUE((INF + ExtNonNeg(3L)).is_inf());
    EXPECT_TRUE((Rational(1, 2) * INF).is_inf());
    EXPECT_THROW(Rational(0) * INF, DomainError);
    EXPECT_THROW(ExtNonNeg(-1L), DomainError);
    EXPECT_TRUE(ExtNonNeg(3L) <= INF);
    EXPECT_FALSE(INF <= ExtNonNeg(3L));
    EXPECT_EQ(ExtNonNeg(Rational(1, 2)) + ExtNonNeg(Rational(1, 3)), ExtNonNeg(Rational(5, 6)));
}

// --- pair algebra -----------------------------------------------------------------

TEST(IWValue, Invariants) {
    EXPECT_THROW(IWValue(Rational(3), ExtNonNeg(2L)), DomainError);
    EXPECT_EQ(IWValue(Rational(5), INF).first(), 0);
    EXPECT_EQ(iw_inf(5).first(), 5);
    EXPECT_FALSE(iw_inf(5).is_canonical());
    EXPECT_EQ(iw_inf(5).canonical(), IWValue::infinite());
}

TEST(IWValue, AddScaleMul) {
    EXPECT_EQ(iw_add(iw(3, 5), iw(-1, 2)), iw(2, 7));
    EXPECT_EQ(iw_scale(Rational(-2), iw(3, 5)), iw(-6, 10));
    EXPECT_EQ(iw_mul(Rational(-1, 2), iw(3, 5)), IWValue(Rational(-3, 2), ExtNonNeg(Rational(5, 2))));
    const IWValue s = iw_add(iw_inf(4), iw(1, 1));
    EXPECT_TRUE(s.witness().is_inf());
    EXPECT_EQ(s.first(), 0);
}

TEST(IWValue, Order) {
    EXPECT_FALSE(iw_leq(iw(0, 0), iw(-1, 1)));
    EXPECT_TRUE(iw_leq(iw(-1, 1), iw(-1, 1)));
    EXPECT_TRUE(iw_leq(iw(7, 9), IWValue::infinite()));
    EXPECT_FALSE(iw_leq(IWValue::infinite(), iw(7, 9)));
}

TEST(IWValue, Equivalence) {
    EXPECT_TRUE(iw_equiv(iw_inf(5), iw_inf(-3)));
    EXPECT_TRUE(iw_equiv(iw(1, 2), iw(1, 2)));
    EXPECT_FALSE(iw_equiv(iw(1, 2), iw(1, 3)));
}

TEST(IWValue, AntisymmetryFailsOnRawPairs) {
    const IWValue a = iw_inf(4);
    const IWValue b = iw_inf(7);
    EXPECT_TRUE(iw_leq(a, b));
    EXPECT_TRUE(iw_leq(b, a));
    EXPECT_FALSE(a == b);
    EXPECT_TRUE(iw_equiv(a, b));
    EXPECT_TRUE(a.canonical() == b.canonical());
}

TEST(IWValue, Sup) {
    EXPECT_EQ(iw_sup({iw(1, 2), iw(3, 4)}), iw(3, 4));
    EXPECT_EQ(iw_sup({iw(1, 2), IWValue::infinite()}), IWValue::infinite());
    EXPECT_EQ(iw_sup({iw(-5, 5)}), iw(-5, 5));
    EXPECT_THROW(iw_sup({}), std::invalid_argument);
}

namespace {

IWValue random_value(std::mt19937& rng, bool canonical) {
    std::uniform_int_distribution<int> w(0, 4);
    const int wit = w(rng);
    if (wit == 4) {
        const long f = std::uniform_int_distribution<int>(-3, 3)(rng);
        return canonical ? IWValue::infinite() : IWValue::raw(Rational(f), INF);
    }
    const long f = std::uniform_int_distribution<int>(-wit, wit)(rng);
    return iw(f, wit);
}

} // namespace

TEST(IWValueProperties, OrderLaws) {
    std::mt19937 rng(11);
    std::vector<IWValue> pool;
    for (int i = 0; i < 60; ++i) {
        pool.push_back(random_value(rng, i % 2 == 0));
    }
    for (const auto& a : pool) {
        EXPECT_TRUE(iw_leq(a, a));
        EXPECT_TRUE(iw_equiv(a, a));
        EXPECT_TRUE(iw_equiv(a.canonical(), a));
        EXPECT_EQ(a.canonical().canonical(), a.canonical());
        for (const auto& b : pool) {
            EXPECT_EQ(iw_equiv(a, b), iw_equiv(b, a));
            const IWValue ca = a.canonical();
            const IWValue cb = b.canonical();
            if (iw_leq(ca, cb) && iw_leq(cb, ca)) {
                EXPECT_TRUE(iw_equiv(ca, cb));
                EXPECT_EQ(ca, cb);
            }
            for (const auto& c : pool) {
                if (iw_leq(a, b) && iw_leq(b, c)) {
                    EXPECT_TRUE(iw_leq(a, c));
                }
                if (iw_equiv(a, b) && iw_equiv(b, c)) {
                    EXPECT_TRUE(iw_equiv(a, c));
                }
            }
        }
    }
}

TEST(IWValueProperties, ClosureOfOperations) {
    std::mt19937 rng(12);
    for (int i = 0; i < 500; ++i) {
        const IWValue a = random_value(rng, true);
        const IWValue b = random_value(rng, true);
        const Rational c = make_rational(std::uniform_int_distribution<int>(-6, 6)(rng), std::uniform_int_distribution<int>(1, 4)(rng));
        if (c == 0 && a.witness().is_inf()) {
            EXPECT_THROW(iw_mul(c, a), DomainError);
            continue;
        }
        for (const IWValue& r : {iw_add(a, b), iw_mul(c, a), iw_sup({a, b})}) {
            EXPECT_TRUE(r.is_canonical());
            if (!r.witness().is_inf()) {
                EXPECT_LE(abs(r.first()), r.witness().value());
            }
        }
    }
}

TEST(IWValueProperties, SupIsLeastUpperBound) {
    std::mt19937 rng(13);
    std::vector<IWValue> candidates;
    for (long w = 0; w <= 4; ++w) {
        for (long f = -w; f <= w; ++f) {
            candidates.push_back(iw(f, w));
        }
    }
    candidates.push_back(IWValue::infinite());
    for (int i = 0; i < 200; ++i) {
        std::vector<IWValue> set;
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        for (int k = 0; k < n; ++k) {
            set.push_back(random_value(rng, true));
        }
        const IWValue s = iw_sup(set);
        for (const auto& v : set) {
            EXPECT_TRUE(iw_leq(v, s));
        }
        for (const auto& u : candidates) {
            bool upper = true;
            for (const auto& v : set) {
                upper = upper && iw_leq(v, u);
            }
            if (upper) {
                EXPECT_TRUE(iw_leq(s, u)) << s.to_string() << " vs " << u.to_string();
            }
        }
    }
}

// --- limits -----------------------------------------------------------------------

TEST(IWLimit, Constant) {
    const std::vector<IWValue> seq(20, iw(1, 2));
    const LimitReport r = iw_limit(seq);
    EXPECT_EQ(r.value, iw(1, 2));
    EXPECT_FALSE(r.diverged);
}

TEST(IWLimit, GrowingWitnessDiverges) {
    std::vector<IWValue> seq;
    for (long n = 1; n <= 200; ++n) {
        seq.push_back(iw(0, n));
    }
    const LimitReport r = iw_limit(seq);
    EXPECT_TRUE(r.diverged);
    EXPECT_EQ(r.value, IWValue::infinite());
    EXPECT_TRUE(r.heuristic);
}

TEST(IWLimit, AlternatingHarmonicWithConvergingWitness) {
    // Firsts are partial sums of -1 + 1/2 - 1/3 + ..., witnesses 1 - 2^-n.
    std::vector<IWValue> seq;
    Rational first = 0;
    Rational witness = 0;
    for (long n = 1; n <= 120; ++n) {
        first += Rational(n % 2 == 0 ? 1 : -1, n);
        witness += Rational(1, 2) / (Integer(1) << static_cast<unsigned long>(n - 1));
        seq.push_back(IWValue::raw(first, ExtNonNeg(witness + 1)));
    }
    const LimitReport r = iw_limit(seq);
    EXPECT_FALSE(r.diverged);
    EXPECT_TRUE(r.accelerated);
    EXPECT_NEAR(r.value.first().get_d(), -std::log(2.0), 1e-9);
    EXPECT_NEAR(r.value.witness().to_double(), 2.0, 1e-9);
}

// --- expression evaluation --------------------------------------------------------

TEST(Eval, Basics) {
    EXPECT_EQ(ev("x + 3/4", State{{"x", 0}}).value(), Rational(3, 4));
    EXPECT_EQ(ev("abs(-3) + sign(-2) + min(1, 2) + max(1, 2)"), Rational(5));
    EXPECT_EQ(ev("-7 mod 3"), Rational(2));
    EXPECT_EQ(ev("[1 < 2] + [2 < 1]"), Rational(1));
    EXPECT_THROW(ev("x", State{}), EvalError);
    EXPECT_THROW(ev("1 / 0"), EvalError);
    EXPECT_THROW(ev("2 ^ (0 - 1)"), EvalError);
    EXPECT_THROW(ev("2 ^ (1/2)"), EvalError);
}

TEST(Eval, Series) {
    EXPECT_NEAR(ev("sum(i,0,inf, abs(0+1-3*i)/2^(i+1))").to_double(), 3.0, 1e-12);
    EXPECT_EQ(ev("sum(i, 1, 4, i)").value(), 10);
    EXPECT_EQ(ev("sum(i, 3, 1, i)").value(), 0);
    EXPECT_TRUE(ev("sum(i,0,inf, 2^(x+i)/2^(i+1))", State{{"x", 1}}).is_inf());
    EXPECT_TRUE(ev("inf - 3").is_inf());
    EXPECT_THROW(ev("3 - inf"), EvalError);
    // A zero left factor short-circuits; a zero right factor does not.
    EXPECT_EQ(ev("[1 < 0] * inf").value(), 0);
    EXPECT_THROW(ev("inf * [1 < 0]"), DomainError);
}

TEST(Eval, DivergentSeriesPartialSumsExceedThreshold) {
    // Oracle for the divergence verdict: partial sums are n * 2^(x-1).
    Rational partial = 0;
    for (long n = 0; n < 100; ++n) {
        partial += make_rational(Integer(1) << static_cast<unsigned long>(1 + n), Integer(1) << static_cast<unsigned long>(n + 1));
    }
    EXPECT_EQ(partial, 100);
}

TEST(Eval, Guards) {
    EXPECT_EQ(eval_guard(parse_expression("1/2"), State{{"x", 9}}), Rational(1, 2));
    EXPECT_EQ(eval_guard(parse_expression("[h <= t]"), State{{"h", 0}, {"t", 30}}), 1);
    EXPECT_EQ(eval_guard(parse_expression("2/3*[x mod 2 = 0] + 1/3*[x mod 2 = 1]"), State{{"x", 4}}),
              Rational(2, 3));
    try {
        eval_guard(parse_expression("x / 2"), State{{"x", 3}});
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_NE(std::string(e.what()).find("x=3"), std::string::npos);
    }
}

// --- convergence monitor ----------------------------------------------------------

TEST(Monitor, GeometricConverges) {
    SequenceMonitor m(series_policy());
    double s = 0;
    Verdict v = Verdict::Running;
    for (int n = 0; n < 200 && v == Verdict::Running; ++n) {
        const double inc = std::pow(0.5, n);
        s += inc;
        v = m.push(s, inc);
    }
    EXPECT_EQ(v, Verdict::Converged);
    EXPECT_LT(m.steps(), 80);
}

TEST(Monitor, HarmonicDiverges) {
    SequenceMonitor m(series_policy());
    double s = 0;
    Verdict v = Verdict::Running;
    for (int n = 1; n < 100000 && v == Verdict::Running; ++n) {
        s += 1.0 / n;
        v = m.push(s, 1.0 / n);
    }
    EXPECT_EQ(v, Verdict::Diverged);
}

TEST(Monitor, ThresholdDiverges) {
    ConvergencePolicy p = series_policy();
    p.threshold = 100;
    SequenceMonitor m(p);
    EXPECT_EQ(m.push(50, 50), Verdict::Running);
    EXPECT_EQ(m.push(150, 100), Verdict::Diverged);
}

// --- serialisation ----------------------------------------------------------------

TEST(Json, IWValueRoundTrip) {
    for (const IWValue& v : {iw(-3, 5), IWValue(Rational(1, 3), ExtNonNeg(Rational(2, 3))), IWValue::infinite()}) {
        const json j = to_json(v);
        EXPECT_EQ(iw_value_from_json(j), v);
    }
    EXPECT_EQ(to_json(IWValue::infinite()).dump(), R"({"first":"0","witness":"inf"})");
}
