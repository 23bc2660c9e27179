#include <gtest/gtest.h>

#include <random>

#include "hardy/hardy.hpp"

using namespace hardy;

TEST(Parse, IndicatorIsConstantPiece) {
    const PiecewiseFn f = parse("chi(0,1)");
    ASSERT_EQ(f.pieces().size(), 1u);
    EXPECT_EQ(f.pieces()[0].lo, 0.0);
    EXPECT_EQ(f.pieces()[0].hi, 1.0);
    EXPECT_TRUE(f.pieces()[0].is_constant());
    EXPECT_EQ(f.eval(0.5), 1.0);
    EXPECT_EQ(f.eval(1.0), 0.0);
}

TEST(Parse, AffinePowerPiece) {
    const PiecewiseFn f = parse("(1-t)^(-0.5) on (0,1)");
    ASSERT_EQ(f.pieces().size(), 1u);
    ASSERT_EQ(f.pieces()[0].atoms.size(), 1u);
    EXPECT_DOUBLE_EQ(f.eval(0.75), 2.0);
}

TEST(Parse, LogRecip) {
    const PiecewiseFn g = parse("logrecip(2) on (0,1)");
    const double x = 0.5;
    const double oracle = 1.0 / (x * std::pow(std::log(std::exp(2.0) / x), 2.0));
    EXPECT_NEAR(g.eval(x), oracle, 1e-14);
}

TEST(Parse, SyntaxErrorCarriesPosition) {
    try {
        parse("chi(0,1) + ");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_GE(e.position(), 9u);
    }
    EXPECT_THROW(parse("t^ on (0,1)"), ParseError);
    EXPECT_THROW(parse("foo(2) on (0,1)"), ParseError);
}

TEST(Parse, RoundTripThroughPrinter) {
    for (const char* s : {"chi(0,1)", "(1-t)^(-0.5) on (0,1)", "logrecip(2) on (0,1)", "3*t^(-0.25) on (0,4)",
                          "chi(0,1) + t^(-1) on (1,inf)", "(1+t)^(-2) on (0,inf)", "t^2 - 2*t on (1,3)",
                          "log(t) on (1,2)", "-(2-t)^(0.5) on (0,2)"}) {
        const PiecewiseFn f = parse(s);
        const PiecewiseFn g = parse(f.to_string());
        EXPECT_EQ(f.to_string(), g.to_string()) << s;
        for (double x : {0.1, 0.5, 0.9, 1.5, 2.5, 3.9, 10.0}) EXPECT_EQ(f.eval(x), g.eval(x)) << s << " at " << x;
    }
}

TEST(Eval, Examples) {
    EXPECT_EQ(parse("chi(0,1)").eval(0.5), 1.0);
    EXPECT_DOUBLE_EQ(parse("(1-t)^(-0.5) on (0,1)").eval(0.75), 2.0);
    EXPECT_THROW(parse("chi(0,1)").eval(0.0), DomainError);
    EXPECT_THROW(parse("chi(0,1)").eval(-1.0), DomainError);
}

TEST(Eval, RightContinuousAtBoundaries) {
    const PiecewiseFn f = parse("chi(0,1) + 2 on (1,2)");
    EXPECT_EQ(f.eval(1.0), 2.0);
    EXPECT_EQ(f.eval(2.0), 0.0);
}

TEST(Integrate, Examples) {
    const auto a = integrate(parse("t^(-0.5) on (0,1)"), 0.0, 1.0);
    ASSERT_TRUE(a.finite());
    EXPECT_NEAR(a.value, 2.0, 1e-12);

    // u = log(e^2/t): int_2^inf u^-2 du = 1/2.
    const auto b = integrate(parse("logrecip(2) on (0,1)"), 0.0, 1.0);
    ASSERT_TRUE(b.finite());
    EXPECT_NEAR(b.value, 0.5, 1e-10);

    const auto c = integrate(parse("logrecip(1) on (0,1)"), 0.0, 1.0);
    EXPECT_FALSE(c.finite());
    EXPECT_EQ(c.divergent_at, 0.0);
}

TEST(Integrate, ExponentClassification) {
    EXPECT_FALSE(integrate(parse("t^(-1) on (0,1)"), 0.0, 1.0).finite());
    EXPECT_FALSE(integrate(parse("t^(-1) on (1,inf)"), 1.0, kInf).finite());
    const auto tail = integrate(parse("t^(-1.5) on (1,inf)"), 1.0, kInf);
    ASSERT_TRUE(tail.finite());
    EXPECT_NEAR(tail.value, 2.0, 1e-12);
    EXPECT_FALSE(integrate(parse("(1-t)^(-1) on (0,1)"), 0.0, 1.0).finite());
}

TEST(Integrate, NumericOnlyDivergenceAndConvergence) {
    // Products of atoms with no registered antiderivative go through the window ladder.
    const PiecewiseFn conv = parse("t^(-0.5) on (0,1)").times(parse("(1+t)^(-1) on (0,1)"));
    const auto r = integrate(conv, 0.0, 1.0, IntegrateOptions{1e-10, true});
    ASSERT_TRUE(r.finite());
    EXPECT_NEAR(r.value, 2.0 * std::atan(1.0), 1e-9);  // 2 atan(1) from s = sqrt(t)
    const PiecewiseFn div = parse("t^(-1) on (0,1)").times(parse("(1+t)^(-1) on (0,1)"));
    EXPECT_FALSE(integrate(div, 0.0, 1.0, IntegrateOptions{1e-10, true}).finite());
}

TEST(Integrate, Linearity) {
    const PiecewiseFn f = parse("t^(-0.5) on (0,1) + (1+t)^(-2) on (1,inf)");
    const PiecewiseFn g = parse("chi(0,3) + t on (0,2)");
    const double a = 2.5, b = -1.25;
    const PiecewiseFn h = f.scaled(a).plus(g.scaled(b));
    const double lhs = integrate(h, 0.0, kInf).value;
    const double rhs = a * integrate(f, 0.0, kInf).value + b * integrate(g, 0.0, kInf).value;
    EXPECT_NEAR(lhs, rhs, 1e-9);
}

TEST(Integrate, ClosedFormAgreesWithQuadrature) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::vector<std::string> atoms{"t^(-0.3) on (0,10)", "(1+t)^(-1.5) on (0,10)", "(10-t)^(0.4) on (0,10)",
                                         "logrecip(2) on (0,7)", "log(t) on (0,10)", "t^3 - t on (0,10)"};
    const double tol = 1e-9;
    for (int i = 0; i < 100; ++i) {
        const PiecewiseFn f = parse(atoms[i % atoms.size()]);
        const double hi_end = f.support_end();
        double a = U(rng) * hi_end, b = U(rng) * hi_end;
        if (a > b) std::swap(a, b);
        const auto exact = integrate(f, a, b, IntegrateOptions{tol, false});
        const auto quad = integrate(f, a, b, IntegrateOptions{tol, true});
        ASSERT_TRUE(exact.finite() && quad.finite());
        EXPECT_EQ(exact.method, IntegralMethod::ClosedForm);
        EXPECT_NEAR(exact.value, quad.value, 10 * tol) << atoms[i % atoms.size()] << " on " << a << ", " << b;
    }
}

TEST(Integrate, Splitting) {
    const PiecewiseFn f = parse("(1-t)^(-0.5) on (0,1) + (1+t)^(-3) on (1,inf)");
    const double tol = 1e-9;
    for (double c : {0.25, 0.999, 1.0, 4.0}) {
        const double whole = integrate(f, 0.0, kInf, tol).value;
        const double parts = integrate(f, 0.0, c, tol).value + integrate(f, c, kInf, tol).value;
        EXPECT_NEAR(whole, parts, 2 * tol) << c;
    }
}

TEST(Integrate, RejectsBadBounds) {
    EXPECT_THROW(integrate(parse("chi(0,1)"), 2.0, 1.0), DomainError);
    EXPECT_THROW(integrate(parse("chi(0,1)"), -1.0, 1.0), DomainError);
}
