// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "iwe/corpus.hpp"
#include "iwe/errors.hpp"
#include "iwe/eval.hpp"
#include "iwe/oracle.hpp"
#include "iwe/parser.hpp"
#include "iwe/wp.hpp"
#include "random_programs.hpp"

using namespace iwe;

namespace {

Expr E(const char* text) { return parse_expression(text); }
Program P(const char* text) { return parse_program(text); }

Rational exact(const ExtNonNeg& v) {
    EXPECT_FALSE(v.is_inf());
    return v.is_inf() ? Rational(-1) : v.value();
}

} // namespace

TEST(WpSymbolic, TruncIsXPlusThreeQuarters) {
    const Expr w = wp_symbolic(corpus_program("trunc"), E("x"));
    for (long x = -5; x <= 5; ++x) {
        EXPECT_EQ(eval_expr(w, State{{"x", x}}).value(), Rational(4 * x + 3, 4));
    }
}

TEST(WpSymbolic, SkipIsIdentity) {
    const Expr f = E("abs(x) + y");
    EXPECT_TRUE(equal(wp_symbolic(P("skip"), f), f));
}

TEST(WpSymbolic, KozenPrefix) {
    const Expr w = wp_symbolic(P("x := n; c := 0"), E("[x>=0]*(c+2*x)"));
    for (long n = -3; n <= 6; ++n) {
        EXPECT_EQ(eval_expr(w, State{{"n", n}}).value(), n >= 0 ? 2 * n : 0);
    }
}

TEST(WpSymbolic, RejectsLoops) { EXPECT_THROW(wp_symbolic(corpus_program("geo"), E("x")), DomainError); }

TEST(WpLoopIterate, ZeroIterations) {
    EXPECT_EQ(wp_loop_iterate(E("1/2"), P("x := x + 1"), E("x"), State{{"x", 1}}, 0), ExtNonNeg(0L));
}

TEST(WpLoopIterate, GeometricCounterLimit) {
    // Oracle: partial sums of (1 + i) / 2^(i+1).
    Rational partial = 0;
    for (long n = 1; n <= 40; ++n) {
        partial += make_rational(n, Integer(1) << static_cast<unsigned long>(n));
        EXPECT_EQ(exact(wp_loop_iterate(E("1/2"), P("x := x + 1"), E("x"), State{{"x", 1}}, n)), partial);
    }
    const WpResult r = wp_value(P("while (1/2) { x := x + 1 }"), E("x"), State{{"x", 1}});
    EXPECT_NEAR(r.value.to_double(), 2.0, 1e-9);
}

TEST(WpLoopIterate, KozenIteratesStayBelowBound) {
    const Program k = corpus_program("kozen");
    const Program loop = top_level_statements(k).back();
    ExtNonNeg prev(0L);
    for (long n = 0; n <= 60; n += 5) {
        const ExtNonNeg v = wp_loop_iterate(loop->expr, loop->first, E("c"), State{{"x", 3}, {"c", 0}, {"n", 0}}, n);
        EXPECT_TRUE(prev <= v);
        EXPECT_TRUE(v <= ExtNonNeg(6L));
        prev = v;
    }
    EXPECT_NEAR(prev.to_double(), 6.0, 1e-3);
}

TEST(WpValue, Examples) {
    EXPECT_EQ(wp_value(P("skip"), E("abs(x)"), State{{"x", -4}}).value, ExtNonNeg(4L));
    EXPECT_TRUE(wp_value(corpus_program("geo"), E("2^x"), State{{"x", 0}}).value.is_inf());
    const WpResult r = wp_value(P("while ([x != 0]) { x := x - 1 }"), E("1"), State{{"x", 3}});
    EXPECT_EQ(r.value, ExtNonNeg(1L));
    EXPECT_FALSE(r.stats.heuristic);
}

TEST(WpValue, DeterministicLoopMatchesOracleMass) {
    const Program c = P("while ([x != 0]) { x := x - 1 }");
    const SubDistribution d = enumerate(c, State{{"x", 3}}, 10);
    EXPECT_EQ(d.terminal_mass(), 1);
    EXPECT_EQ(wp_value(c, E("1"), State{{"x", 3}}).value, ExtNonNeg(1L));
}

TEST(WpValue, NegativePostRejected) {
    EXPECT_THROW(wp_value(P("x := x - 5"), E("x"), State{{"x", 1}}), DomainError);
}

TEST(WpValue, TortoiseHareTerminates) {
    const WpResult r = wp_value(corpus_program("tortoise_hare"), E("1"), State{{"h", 0}, {"t", 0}});
    EXPECT_NEAR(r.value.to_double(), 1.0, 1e-6);
}

TEST(VerifyUpper, KozenInvariant) {
    const Program loop = top_level_statements(corpus_program("kozen")).back();
    const auto grid = parse_grid("x=-5..30,c=0..10");
    const NonNegCheckReport r = verify_upper_invariant(loop->expr, loop->first, E("c"), E("[x>=0]*(c+2*x)"), grid);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.rows.size(), grid.size());
    for (const auto& row : r.rows) {
        EXPECT_FALSE(row.approximated);
    }
}

TEST(VerifyUpper, WrongInvariantFails) {
    const Program loop = top_level_statements(corpus_program("kozen")).back();
    const NonNegCheckReport r =
        verify_upper_invariant(loop->expr, loop->first, E("c"), E("[x>=0]*(c+x)"), parse_grid("x=0..3,c=0..1"));
    EXPECT_FALSE(r.ok);
    ASSERT_FALSE(r.failures().empty());
    EXPECT_EQ(r.failures().front().state.at("x"), 1);
}

TEST(VerifyUpper, TrivialAndWalkWitness) {
    EXPECT_TRUE(verify_upper_invariant(E("1/2"), P("x := x + 1"), E("0"), E("0"), parse_grid("x=-3..3")).ok);
    EXPECT_TRUE(
        verify_upper_invariant(E("1/2"), P("x := -x - sign(x)"), E("abs(x)"), E("abs(x)+1"), parse_grid("x=-10..10"))
            .ok);
}

TEST(VerifyUpper, RejectsLoopyBody) {
    EXPECT_THROW(verify_upper_invariant(E("1/2"), corpus_program("geo"), E("0"), E("0"), parse_grid("x=0")),
                 DomainError);
}

TEST(VerifyLower, WalkFamily) {
    const NonNegCheckReport r = verify_lower_omega_invariant(
        E("1/2"), P("x := -x - sign(x)"), E("abs(x)"), E("sum(i,0,n, (abs(x)+[x!=0]*i)/2^(i+1))"), "n",
        parse_grid("x=-10..10"), 30);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.rows.size(), 21u * 31u);
}

TEST(VerifyLower, ZeroFamilyAndOffsetWalk) {
    EXPECT_TRUE(verify_lower_omega_invariant(E("1/2"), P("x := x + 1"), E("x*x"), E("0"), "n", parse_grid("x=-3..3"),
                                             10)
                    .ok);
    EXPECT_TRUE(verify_lower_omega_invariant(E("1/2"), P("F := F - 3"), E("abs(F)"),
                                             E("sum(i,0,n, abs(F-3*i)/2^(i+1))"), "n", parse_grid("F=-20..20"), 50)
                    .ok);
}

TEST(VerifyLower, TooLargeFamilyFails) {
    const NonNegCheckReport r = verify_lower_omega_invariant(E("1/2"), P("x := x + 1"), E("1"), E("n + 1"), "n",
                                                             parse_grid("x=0"), 5);
    EXPECT_FALSE(r.ok);
}

// --- properties over random loop-free programs ---------------------------------

TEST(WpProperties, MonotoneInIterations) {
    iwe::gen::RandomPrograms gen(21);
    for (int i = 0; i < 40; ++i) {
        const Program loop = gen.loop();
        const Expr f = gen.nonneg_expr();
        const State s = gen.state(-3, 3);
        ExtNonNeg prev(0L);
        for (long n = 0; n <= 12; ++n) {
            const ExtNonNeg v = wp_loop_iterate(loop->expr, loop->first, f, s, n);
            EXPECT_TRUE(prev <= v) << to_string(loop);
            prev = v;
        }
    }
}

TEST(WpProperties, MonotoneInPost) {
    iwe::gen::RandomPrograms gen(22);
    for (int i = 0; i < 200; ++i) {
        const Program c = gen.loop_free();
        const Expr f = gen.nonneg_expr();
        const Expr g = ex::add(f, gen.nonneg_expr());  // f <= g everywhere
        const State s = gen.state();
        EXPECT_TRUE(wp_value(c, f, s).value <= wp_value(c, g, s).value) << to_string(c);
    }
}

TEST(WpProperties, Linearity) {
    iwe::gen::RandomPrograms gen(23);
    for (int i = 0; i < 200; ++i) {
        const Program c = gen.loop_free();
        const Expr f = gen.nonneg_expr();
        const Expr g = gen.nonneg_expr();
        const Rational r = make_rational(gen.uniform(0, 7), gen.uniform(1, 3));
        const State s = gen.state();
        const ExtNonNeg lhs = wp_value(c, ex::add(f, ex::mul(ex::constant(r), g)), s).value;
        const ExtNonNeg rhs = wp_value(c, f, s).value + r * wp_value(c, g, s).value;
        EXPECT_EQ(lhs, rhs) << to_string(c);
    }
}

TEST(WpProperties, FiniteChainContinuity) {
    // For a chain f_1 <= ... <= f_k the pointwise max is f_k, and wp of it equals
    // the largest wp value along the chain.
    iwe::gen::RandomPrograms gen(24);
    for (int i = 0; i < 100; ++i) {
        const Program c = gen.loop_free();
        const State s = gen.state();
        std::vector<Expr> chain{gen.nonneg_expr()};
        for (int k = 0; k < 3; ++k) {
            chain.push_back(ex::add(chain.back(), gen.nonneg_expr()));
        }
        Expr sup = chain.front();
        ExtNonNeg best(0L);
        for (const auto& f : chain) {
            sup = ex::max(sup, f);
            best = max(best, wp_value(c, f, s).value);
        }
        EXPECT_EQ(wp_value(c, sup, s).value, best);
    }
}

TEST(WpProperties, SymbolicAgreesWithValue) {
    iwe::gen::RandomPrograms gen(25);
    for (int i = 0; i < 200; ++i) {
        const Program c = gen.loop_free();
        const Expr f = gen.nonneg_expr();
        const State s = gen.state();
        EXPECT_EQ(ExtNonNeg::from(eval_expr(wp_symbolic(c, f), s)), wp_value(c, f, s).value);
    }
}
