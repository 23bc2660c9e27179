#include <gtest/gtest.h>

#include <random>

#include "hardy/hardy.hpp"

using namespace hardy;

TEST(Theta, Examples) {
    const ConcavePhi sq = ConcavePhi::parse("sqrt");
    for (double y : {0.01, 1.0, 4.0, 1e4}) EXPECT_NEAR(sq.theta(y), 1.0 / std::sqrt(y), 1e-14 / std::sqrt(y));
    const ConcavePhi m = ConcavePhi::parse("min1t");
    for (double y : {1e-3, 0.5, 0.999}) EXPECT_NEAR(m.theta(y), std::log(1.0 / y), 1e-14);
    for (double y : {1.0, 2.0, 100.0}) EXPECT_EQ(m.theta(y), 0.0);
    EXPECT_EQ(ConcavePhi::parse("linear").theta(1.0), kInf);
}

TEST(Theta, CustomPhiMatchesPreset) {
    const ConcavePhi c = ConcavePhi::parse("t^(0.5) on (0,inf)");
    for (double y : {1e-4, 0.3, 1.0, 50.0}) EXPECT_NEAR(c.theta(y), 1.0 / std::sqrt(y), 1e-9 / std::sqrt(y)) << y;
}

TEST(Theta, NonIncreasing) {
    for (const char* s : {"sqrt", "pow:1/3", "min1t", "pow:3/4"}) {
        const ConcavePhi phi = ConcavePhi::parse(s);
        double prev = kInf;
        for (double y : default_grid()) {
            EXPECT_LE(phi.theta(y), prev) << s << " " << y;
            prev = phi.theta(y);
        }
    }
}

TEST(CheckThetaX, Examples) {
    const ConditionReport a = check_thetaX(ConcavePhi::parse("sqrt"));
    EXPECT_EQ(a.holds, Condition::Holds);
    EXPECT_LE(a.identity_residual, 1e-8);
    EXPECT_EQ(check_thetaX(ConcavePhi::parse("linear")).holds, Condition::Fails);
    EXPECT_EQ(check_thetaX(ConcavePhi::parse("min1t")).holds, Condition::Holds);
}

TEST(CheckPhiConstant, Examples) {
    const ConditionReport a = check_phi_constant(ConcavePhi::parse("sqrt"));
    EXPECT_EQ(a.holds, Condition::Holds);
    EXPECT_NEAR(a.best_constant, 1.0, 1e-9);
    const ConditionReport b = check_phi_constant(ConcavePhi::parse("pow:1/3"));
    EXPECT_EQ(b.holds, Condition::Holds);
    EXPECT_NEAR(b.best_constant, 0.5, 1e-9);
    EXPECT_EQ(check_phi_constant(ConcavePhi::parse("min1t")).holds, Condition::Fails);
    EXPECT_THROW(check_phi_constant(ConcavePhi::parse("linear")), DomainError);
}

TEST(CheckThetaCondition, Examples) {
    const ConditionReport a = check_theta_condition(ConcavePhi::parse("sqrt"));
    EXPECT_EQ(a.holds, Condition::Holds);
    EXPECT_NEAR(a.best_constant, 1.0, 1e-9);
    for (double p : {1.5, 3.0, 5.0}) {
        const ConditionReport r = check_theta_condition(ConcavePhi::power(1.0 / p));
        EXPECT_EQ(r.holds, Condition::Holds);
        EXPECT_NEAR(r.best_constant, p - 1.0, 1e-9);
    }
    EXPECT_EQ(check_theta_condition(ConcavePhi::parse("min1t")).holds, Condition::Fails);
}

TEST(PhiConstantEquivalence, IntegralBoundedByOnePlusC) {
    for (const char* s : {"sqrt", "pow:1/3", "pow:0.8"}) {
        const ConcavePhi phi = ConcavePhi::parse(s);
        const double C = check_phi_constant(phi).best_constant;
        for (double t : default_grid(41)) EXPECT_LE(theta_integral(phi, t), (1 + C) * phi(t) * (1 + 1e-9)) << s;
    }
}

TEST(PhiLambda, Examples) {
    const ConcavePhi sq = ConcavePhi::parse("sqrt");
    EXPECT_NEAR(phi_lambda(sq, 1.0), kPi / 2, 1e-8);
    const double mid = sq.theta(1.0) + sq(1.0) / 1.0;
    EXPECT_DOUBLE_EQ(mid, 2.0);
    EXPECT_LE(phi_lambda(sq, 1.0), mid);
    EXPECT_LE(mid, 2 * phi_lambda(sq, 1.0));
    EXPECT_LT(phi_lambda(sq, 1e6), 2e-3);
    EXPECT_THROW(phi_lambda(ConcavePhi::parse("sqrt;jump=1"), 1.0), DomainError);
}

TEST(PhiLambda, ClosedFormsMatchQuadrature) {
    for (const char* s : {"sqrt", "pow:1/3", "min1t"}) {
        const ConcavePhi phi = ConcavePhi::parse(s);
        const PiecewiseFn cf = phi_lambda_fn(phi);
        for (double y : log_grid(1e-4, 1e4, 17)) EXPECT_NEAR(cf.eval(y), phi_lambda(phi, y), 1e-8 * cf.eval(y)) << s;
    }
}

TEST(Sandwich, GridRelativeTolerance) {
    for (const char* s : {"sqrt", "pow:1/3", "pow:2/3", "min1t"}) {
        const ConcavePhi phi = ConcavePhi::parse(s);
        for (double y : default_grid(61)) {
            const double pl = phi_lambda(phi, y), mid = phi.theta(y) + phi(y) / y;
            EXPECT_GE((mid - pl) / mid, -1e-9) << s << " " << y;
            EXPECT_GE((2 * pl - mid) / mid, -1e-9) << s << " " << y;
        }
    }
}

TEST(GammaLambdaNorm, Examples) {
    const ConcavePhi sq = ConcavePhi::parse("sqrt");
    const PiecewiseFn chi = parse("chi(0,1)");
    EXPECT_NEAR(gamma_lambda_norm(sq, chi), 2.0, 1e-9);
    EXPECT_NEAR(norm(SpaceDescriptor::lambda(sq), hardy_transform(chi)), 2.0, 1e-9);
    // No jump: weighted L1 norm of f* against theta.
    const PiecewiseFn f = parse("(1-t)^(-0.25) on (0,1)");
    const double weighted = integrate(rearrangement(f).fn.times(sq.theta_fn()), 0.0, kInf).value;
    EXPECT_NEAR(gamma_lambda_norm(sq, f), weighted, 1e-9);
    // Equals the Lambda norm of S f*.
    EXPECT_NEAR(gamma_lambda_norm(sq, f), norm(SpaceDescriptor::lambda(sq), hardy_transform(rearrangement(f).fn)),
                1e-7);
    // Jump adds phi(0+) ||f||_inf.
    EXPECT_NEAR(gamma_lambda_norm(ConcavePhi::parse("sqrt;jump=0.5"), chi), 2.5, 1e-9);
}

TEST(GammaLambdaNorm, ThetaIntegralIdentity) {
    const ConcavePhi sq = ConcavePhi::parse("sqrt");
    for (double t : {0.5, 1.0, 4.0}) EXPECT_NEAR(theta_integral(sq, t), 2 * std::sqrt(t), 1e-10);
}

TEST(IdentifyDomain, Examples) {
    const DomainIdentification a = identify_domain(ConcavePhi::parse("sqrt"));
    EXPECT_EQ(a.status, Condition::Holds);
    for (double y : {0.1, 1.0, 9.0}) EXPECT_NEAR(a.weight.eval(y), 1.0 / std::sqrt(y), 1e-12);
    const DomainIdentification b = identify_domain(ConcavePhi::parse("min1t"));
    EXPECT_EQ(b.status, Condition::Fails);
}

TEST(DomainSandwich, IntervalExample) {
    const ConcavePhi sq = ConcavePhi::parse("sqrt");
    const DomainSandwich s = domain_sandwich(sq, parse("chi(1,2)"));
    EXPECT_NEAR(s.weighted_l1, 2 * (std::sqrt(2.0) - 1), 1e-10);
    // int_1^2 (pi/2) y^-1/2 dy = pi (sqrt 2 - 1).
    EXPECT_NEAR(s.upper, kPi * (std::sqrt(2.0) - 1), 1e-9);
    EXPECT_TRUE(s.ordered());
}

TEST(DomainSandwich, RandomFunctions) {
    std::mt19937 rng(301);
    for (int i = 0; i < 50; ++i) {
        const PiecewiseFn f = random_function(rng, {3, 8.0, true, true});
        for (const char* s : {"sqrt", "pow:1/3"}) {
            const DomainSandwich d = domain_sandwich(ConcavePhi::parse(s), f);
            EXPECT_TRUE(d.ordered(1e-8)) << s << " " << f.to_string() << " " << d.weighted_l1 << " " << d.domain_norm
                                         << " " << d.upper;
        }
    }
}
