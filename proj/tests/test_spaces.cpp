#include <gtest/gtest.h>

#include <random>

#include "hardy/hardy.hpp"

using namespace hardy;

namespace {

const auto L1 = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1);
const auto L1w = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1weak);
const auto Linf = SpaceDescriptor::simple(SpaceDescriptor::Tag::Linf);
const auto L1pLinf = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1plusLinf);
const auto L2 = SpaceDescriptor::lp(2.0);

}  // namespace

TEST(ParseSpace, Syntax) {
    EXPECT_EQ(parse_space("Lp:2").tag, SpaceDescriptor::Tag::Lp);
    EXPECT_EQ(parse_space("Lpq:2,1").q, 1.0);
    EXPECT_EQ(parse_space("Lpq:3,inf").q, kInf);
    EXPECT_EQ(parse_space("L1w").tag, SpaceDescriptor::Tag::L1weak);
    EXPECT_EQ(parse_space("Lambda:sqrt").tag, SpaceDescriptor::Tag::LambdaPhi);
    EXPECT_EQ(parse_space("L1+Linf").tag, SpaceDescriptor::Tag::L1plusLinf);
    EXPECT_EQ(parse_space("Linf").tag, SpaceDescriptor::Tag::Linf);
    EXPECT_THROW(parse_space("Lp:0.5"), std::exception);
    EXPECT_THROW(parse_space("Lq:2"), std::exception);
}

TEST(Norm, Examples) {
    EXPECT_NEAR(norm(L1w, hardy_transform(parse("chi(0,1)"))), 1.0, 1e-12);
    EXPECT_NEAR(norm(L1, parse("chi(0,1)")), 1.0, 1e-15);
    const auto g = l1linf_pair().g;
    EXPECT_EQ(norm(L1pLinf, hardy_transform(rearrangement(g).fn)), kInf);
    // int_0^1 (1/2) t^-1/2 + int_1^inf (1/2) t^-3/2 = 1 + 1.
    EXPECT_NEAR(norm(parse_space("Lambda:sqrt"), hardy_transform(parse("chi(0,1)"))), 2.0, 1e-9);
}

TEST(Norm, LorentzForms) {
    // f* = (1+t)^-1: L^{2,1} = int t^{-1/2} (1+t)^-1 = pi; sup t^{1/2}/(1+t) = 1/2.
    const PiecewiseFn f = parse("(1+t)^(-1) on (0,inf)");
    EXPECT_NEAR(norm(parse_space("Lpq:2,1"), f), kPi, 1e-8);
    EXPECT_NEAR(norm(parse_space("Lpq:2,inf"), f), 0.5, 1e-9);
    EXPECT_NEAR(norm(parse_space("Lambda:sqrt"), f), kPi / 2, 1e-8);
    // L^{2,2} = L^2.
    const PiecewiseFn g = parse("(2-t)^(0.5) on (0,2) + (1+t)^(-2) on (3,inf)");
    EXPECT_NEAR(norm(parse_space("Lpq:2,2"), g), norm(L2, g), 1e-8);
}

TEST(Norm, MixedSpaces) {
    const PiecewiseFn f = parse("2 on (0,0.5) + (1+t)^(-2) on (1,inf)");
    // f* = 2 on (0, 0.5), then the tail: int_0^1 f* = 1 + int_1^{1.5} (1+t)^-2 dt.
    const double head = 1.0 + (1.0 / 2.0 - 1.0 / 2.5);
    EXPECT_NEAR(norm(L1pLinf, f), head, 1e-9);
    const double l1 = 1.0 + 0.5;
    EXPECT_NEAR(norm(parse_space("L1capLinf"), f), std::max(l1, 2.0), 1e-9);
    EXPECT_NEAR(norm(Linf, f), 2.0, 0.0);
}

TEST(FundamentalFunction, Examples) {
    EXPECT_NEAR(fundamental_function(L2, 4.0), 2.0, 1e-12);
    for (double t : {0.25, 1.0, 3.0}) EXPECT_NEAR(fundamental_function(L1pLinf, t), std::min(1.0, t), 1e-12);
    const ConcavePhi phi = ConcavePhi::power(1.0 / 3.0);
    EXPECT_NEAR(fundamental_function(SpaceDescriptor::lambda(phi), 1.0), phi(1.0), 1e-12);
}

TEST(DomainMember, Examples) {
    const Verdict a = domain_member(L2, parse("(1-t)^(-0.5) on (0,1)"));
    EXPECT_EQ(a.status, Membership::In);
    EXPECT_TRUE(std::isfinite(a.norm));
    EXPECT_EQ(domain_member(L2, parse("t^(-0.5) on (0,1)")).status, Membership::NotIn);
    EXPECT_EQ(domain_member(L1, parse("chi(0,1)")).status, Membership::NotIn);
    EXPECT_EQ(domain_member(L1, parse("(1+t)^(-3) on (2,inf)")).status, Membership::NotIn);
}

TEST(GammaMember, Examples) {
    EXPECT_EQ(gamma_member(L2, parse("chi(0,1)")).status, Membership::In);
    const auto pr = l1linf_pair();
    EXPECT_EQ(gamma_member(L1pLinf, pr.f).status, Membership::NotIn);
    EXPECT_EQ(domain_member(L1pLinf, pr.f).status, Membership::In);
    const Verdict z = gamma_member(L2, PiecewiseFn{});
    EXPECT_EQ(z.status, Membership::In);
    EXPECT_EQ(z.norm, 0.0);
}

TEST(L1LinfCriterion, Examples) {
    const std::vector<double> cs{0.1, 1.0, 10.0};
    EXPECT_EQ(l1linf_criterion(parse("1 on (0,inf)"), cs).status, Membership::In);
    EXPECT_EQ(l1linf_criterion(parse("(1+t)^(-2) on (0,inf)"), cs).status, Membership::In);
    EXPECT_EQ(l1linf_criterion(parse("t^(-1) on (0,1)"), cs).status, Membership::NotIn);
}

TEST(DEquivalences, Examples) {
    const auto l2 = check_d_equivalences(L2);
    EXPECT_EQ(l2.d2.status, Membership::In);
    EXPECT_EQ(l2.d3.status, Membership::In);
    EXPECT_TRUE(l2.agree);
    const auto l1 = check_d_equivalences(L1);
    EXPECT_EQ(l1.d3.status, Membership::NotIn);
    EXPECT_TRUE(l1.agree);
    const auto w = check_d_equivalences(L1w);
    EXPECT_EQ(w.d3.status, Membership::In);
    EXPECT_TRUE(w.agree);
}

namespace {

std::vector<std::pair<PiecewiseFn, PiecewiseFn>> dominated_pairs(unsigned seed, int n) {
    std::mt19937 rng(seed);
    std::vector<std::pair<PiecewiseFn, PiecewiseFn>> out;
    for (int i = 0; i < n; ++i) {
        PiecewiseFn f = random_function(rng, {3, 8.0, true, true});
        PiecewiseFn h = random_function(rng);
        PiecewiseFn g = f.abs().plus(h.abs());
        out.emplace_back(std::move(f), std::move(g));
    }
    return out;
}

}  // namespace

TEST(SpaceProperties, LatticeMonotonicity) {
    const auto pairs = dominated_pairs(201, 12);
    for (const char* x : {"L1", "Lp:2", "Linf", "L1w", "Lpq:2,1", "Lambda:sqrt", "L1+Linf", "L1capLinf"}) {
        const auto X = parse_space(x);
        for (const auto& [f, g] : pairs) EXPECT_LE(norm(X, f), norm(X, g) * (1 + 1e-9) + 1e-12) << x << " " << f.to_string();
    }
}

TEST(SpaceProperties, RearrangementInvariance) {
    const auto pairs = dominated_pairs(202, 8);
    for (const char* x : {"L1", "Lp:2", "Linf", "L1w", "Lpq:2,1", "Lambda:sqrt", "L1+Linf"}) {
        const auto X = parse_space(x);
        for (const auto& [f, g] : pairs) {
            const double a = norm(X, f), b = norm(X, rearrangement(f).fn);
            if (std::isinf(a) || std::isinf(b)) {
                EXPECT_EQ(a, b) << x << " " << f.to_string();
            } else {
                EXPECT_NEAR(a, b, 1e-6 * std::max(1.0, a)) << x << " " << f.to_string();
            }
        }
    }
}

TEST(SpaceProperties, HardyInequalityL2) {
    for (const auto& [f, g] : dominated_pairs(203, 20))
        EXPECT_LE(norm(L2, hardy_transform(f)), 2.0 * norm(L2, f) * (1 + 1e-9)) << f.to_string();
}

TEST(SpaceProperties, GammaInsideIntersection) {
    for (const auto& [f, g] : dominated_pairs(204, 10)) {
        const Verdict v = gamma_member(L2, f);
        if (v.status != Membership::In) continue;
        EXPECT_EQ(domain_member(L2, f).status, Membership::In) << f.to_string();
        EXPECT_TRUE(std::isfinite(norm(L2, f))) << f.to_string();
    }
}

TEST(SpaceProperties, RearrangementBelowItsAverage) {
    for (const auto& [f, g] : dominated_pairs(205, 10)) {
        const PiecewiseFn fs = rearrangement(f).fn;
        const PiecewiseFn sfs = hardy_transform(fs);
        for (double x : log_grid(1e-3, 1e3, 40)) EXPECT_LE(fs.eval(x), sfs.eval(x) * (1 + 1e-9) + 1e-12);
    }
}
