#include <gtest/gtest.h>

#include <random>

#include "hardy/hardy.hpp"

using namespace hardy;

TEST(Distribution, IndicatorOnShiftedInterval) {
    const DistFn d(parse("chi(3,5)"));
    for (double s : {0.0, 0.1, 0.5, 0.999}) EXPECT_DOUBLE_EQ(d(s), 2.0) << s;
    for (double s : {1.0, 1.5, 10.0}) EXPECT_EQ(d(s), 0.0) << s;
}

TEST(Distribution, HardyOfIndicator) {
    const DistFn d(hardy_transform(parse("chi(0,1)")));
    for (double s : {0.01, 0.1, 0.5, 0.9}) EXPECT_NEAR(d(s), 1.0 / s, 1e-12 / s) << s;
    EXPECT_EQ(d(1.0), 0.0);
    EXPECT_EQ(d(2.0), 0.0);
}

TEST(Distribution, SingularAffinePower) {
    const DistFn d(parse("(1-t)^(-0.5) on (0,1)"));
    for (double s : {0.1, 0.5, 0.99}) EXPECT_DOUBLE_EQ(d(s), 1.0);
    for (double s : {1.0, 2.0, 10.0, 1e4}) EXPECT_NEAR(d(s), 1.0 / (s * s), 1e-13 / (s * s)) << s;
}

TEST(Distribution, InfiniteMeasureLevels) {
    const DistFn d(parse("(1+t)^(-1) on (0,inf) + 2 on (0,1)"));
    EXPECT_EQ(d(0.0), kInf);
    EXPECT_NEAR(d(0.5), 1.0, 1e-12);  // (1+t)^-1 > 0.5 on (0,1), and the constant adds nothing new
    EXPECT_EQ(d.tail_level(), 0.0);
}

TEST(Rearrangement, Indicator) {
    const RearrangedFn r = rearrangement(parse("chi(3,5)"));
    EXPECT_TRUE(r.exact);
    for (double s : {0.01, 1.0, 1.99}) EXPECT_EQ(r.fn.eval(s), 1.0);
    for (double s : {2.0, 3.0, 100.0}) EXPECT_EQ(r.fn.eval(s), 0.0);
}

TEST(Rearrangement, ReflectedSingularity) {
    const RearrangedFn r = rearrangement(parse("(1-t)^(-0.5) on (0,1)"));
    for (double s : {1e-6, 0.01, 0.3, 0.75, 0.999}) EXPECT_NEAR(r.fn.eval(s), 1.0 / std::sqrt(s), 1e-9 / std::sqrt(s));
    EXPECT_EQ(r.fn.eval(1.5), 0.0);
}

TEST(Rearrangement, DecreasingFixedPoint) {
    const PiecewiseFn f = hardy_transform(parse("chi(0,1)"));
    const RearrangedFn r = rearrangement(f);
    for (double s : log_grid(1e-3, 1e3, 40)) EXPECT_NEAR(r.fn.eval(s), f.eval(s), 1e-12);
}

TEST(Equimeasurable, Examples) {
    const auto pair = l1linf_pair();
    const auto levels = log_grid(1e-3, 1e3, 64);
    EXPECT_TRUE(check_equimeasurable(pair.f, pair.g, levels));
    EXPECT_FALSE(check_equimeasurable(parse("chi(0,1)"), parse("chi(0,2)"), levels));
    const PiecewiseFn f = parse("(2-t)^(0.5) on (0,2) + 3*t^(-2) on (4,inf)");
    EXPECT_TRUE(check_equimeasurable(f, rearrangement(f).fn, levels));
}

namespace {

std::vector<PiecewiseFn> sample(unsigned seed, int n) {
    std::mt19937 rng(seed);
    std::vector<PiecewiseFn> out;
    for (int i = 0; i < n; ++i) out.push_back(random_function(rng, {3, 8.0, true, true}));
    return out;
}

}  // namespace

TEST(RearrangementProperties, EquimeasurableAt64Levels) {
    for (const auto& f : sample(101, 25)) {
        const RearrangedFn r = rearrangement(f);
        EXPECT_TRUE(check_equimeasurable(f, r.fn, log_grid(1e-3, 1e2, 64), 1e-6)) << f.to_string();
    }
}

TEST(RearrangementProperties, NonIncreasing) {
    for (const auto& f : sample(102, 25)) {
        const RearrangedFn r = rearrangement(f);
        double prev = kInf;
        for (double s : log_grid(1e-4, 1e2, 80)) {
            const double v = r.fn.eval(s);
            EXPECT_GE(prev, v - 1e-12) << f.to_string() << " at " << s;
            prev = v;
        }
    }
}

TEST(RearrangementProperties, IntegralPreserved) {
    for (const auto& f : sample(103, 25)) {
        const auto a = integrate(f.abs(), 0.0, kInf, 1e-9);
        if (!a.finite()) continue;
        const auto b = integrate(rearrangement(f).fn, 0.0, kInf, 1e-9);
        ASSERT_TRUE(b.finite()) << f.to_string();
        EXPECT_NEAR(a.value, b.value, 1e-6 * std::max(1.0, a.value)) << f.to_string();
    }
}

TEST(RearrangementProperties, HardyOfAbsBelowHardyOfRearrangement) {
    for (const auto& f : sample(104, 20)) {
        const PiecewiseFn lhs = rearrangement(hardy_transform(f.abs())).fn;
        const PiecewiseFn rhs = hardy_transform(rearrangement(f).fn);
        for (double x : log_grid(1e-3, 1e3, 50))
            EXPECT_LE(lhs.eval(x), rhs.eval(x) * (1 + 1e-7) + 1e-12) << f.to_string() << " at " << x;
    }
}
