#include <gtest/gtest.h>

#include "hardy/hardy.hpp"

using namespace hardy;

namespace {

const auto L1pLinf = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1plusLinf);
const auto L2 = SpaceDescriptor::lp(2.0);

const NoesriArtifacts& noesri() {
    static const NoesriArtifacts a = noesri_construct(L2, parse("(1+t)^(-1) on (0,inf)"), 10);
    return a;
}

}  // namespace

TEST(FAlpha, Examples) {
    const FAlpha fa = f_alpha(-0.5);
    EXPECT_NEAR(norm(SpaceDescriptor::simple(SpaceDescriptor::Tag::L1), fa.f), 2.0, 1e-12);
    EXPECT_EQ(member(L2, fa.f).status, Membership::NotIn);
    for (double t : {1.0, 2.0, 50.0}) EXPECT_NEAR(fa.Sf.eval(t), 2.0 / t, 1e-15);
    const PiecewiseFn s = hardy_transform(fa.f);
    for (double t : log_grid(1e-3, 1e3, 50)) EXPECT_NEAR(s.eval(t), fa.Sf.eval(t), 1e-13);
    EXPECT_THROW(f_alpha(0.5), DomainError);
    EXPECT_THROW(f_alpha(-1.0), DomainError);
}

TEST(FAlpha, HardyTransformInEveryLq) {
    const PiecewiseFn s = f_alpha(-0.5).Sf;
    for (double q : {1.1, 2.0, 5.0}) EXPECT_TRUE(std::isfinite(norm(SpaceDescriptor::lp(q), s))) << q;
    EXPECT_NEAR(norm(SpaceDescriptor::simple(SpaceDescriptor::Tag::Linf), s), 2.0, 1e-12);
}

TEST(L1LinfPair, Examples) {
    const L1LinfPair p = l1linf_pair();
    EXPECT_NEAR(norm(SpaceDescriptor::simple(SpaceDescriptor::Tag::L1), p.g), 0.5, 1e-10);
    EXPECT_TRUE(check_equimeasurable(p.f, p.g, log_grid(1e-3, 1e3, 64)));
    const PiecewiseFn fs = rearrangement(p.f).fn;
    for (double t : log_grid(1e-3, 0.99, 30)) EXPECT_NEAR(fs.eval(t), p.g.eval(t), 1e-9 * p.g.eval(t));
    const double sup = norm(SpaceDescriptor::simple(SpaceDescriptor::Tag::Linf), hardy_transform(p.f));
    EXPECT_TRUE(std::isfinite(sup));
    EXPECT_LE(sup, 0.5);
    EXPECT_EQ(norm(L1pLinf, hardy_transform(fs)), kInf);
    EXPECT_EQ(gamma_member(L1pLinf, p.f).status, Membership::NotIn);
    EXPECT_EQ(domain_member(L1pLinf, p.f).status, Membership::In);
}

TEST(LpqWitness, Verdicts) {
    const PiecewiseFn w = lpq_witness(2.0, 2.0);
    EXPECT_EQ(member(SpaceDescriptor::lpq(2.0, 2.0), w).status, Membership::In);
    EXPECT_EQ(member(SpaceDescriptor::lpq(2.0, 1.0), w).status, Membership::NotIn);
    double prev = kInf;
    for (double t : log_grid(1e-8, 1e8, 200)) {
        EXPECT_LE(w.eval(t), prev) << t;
        prev = w.eval(t);
    }
    EXPECT_EQ(member(SpaceDescriptor::lpq(3.0, kInf), lpq_witness(3.0, kInf)).status, Membership::In);
    EXPECT_THROW(lpq_witness(1.0, 2.0), DomainError);
    EXPECT_THROW(lpq_witness(2.0, 1.0), DomainError);
}

TEST(Noesri, DoublingPoints) {
    const NoesriArtifacts& a = noesri();
    ASSERT_EQ(a.t.size(), 10u);
    // F(t) = log(1+t) + atan(t).
    for (std::size_t k = 0; k < a.t.size(); ++k) {
        const long double F = std::log1p(a.t[k]) + std::atan(a.t[k]);
        EXPECT_NEAR(static_cast<double>(F / a.Ft[k]), 1.0, 1e-12) << k;
        if (k > 0) EXPECT_NEAR(static_cast<double>(F / (std::log1p(a.t[k - 1]) + std::atan(a.t[k - 1]))), 2.0, 1e-9);
    }
}

TEST(Noesri, SpacingGrows) {
    const NoesriArtifacts& a = noesri();
    for (std::size_t k = 1; k + 1 < a.t.size(); ++k) {
        EXPECT_GE(a.t[k + 1] - a.t[k], a.t[k] - a.t[k - 1]);
        EXPECT_GE(a.t[k] - a.t[k - 1], a.t[1] - a.t[0] - 1e-12L);
    }
}

TEST(Noesri, BridgeShape) {
    const NoesriArtifacts& a = noesri();
    EXPECT_NEAR(a.h_eval(1.0), a.D, 1e-12);
    EXPECT_NEAR(a.h_eval(a.t2), static_cast<double>(a.Ft[1]), 1e-12);
    // Convex: midpoint values lie below chords.
    for (double x : {1.5, 2.5, 3.5, 4.0}) {
        const double d = 0.01;
        EXPECT_LE(a.h_eval(x), 0.5 * (a.h_eval(x - d) + a.h_eval(x + d)) + 1e-12);
    }
    EXPECT_GT(a.g.eval(a.t[1] - 1e-10), 1e4);  // slope blows up at t2
}

TEST(Noesri, Sandwich) {
    const NoesriArtifacts& a = noesri();
    int bad = 0;
    for (int k = 1; k <= a.windows(); ++k) {
        for (int i = 0; i < 60; ++i) {
            const long double L = a.linear_length(k);
            if (L > 0) {
                const auto [G, F] = a.linear_point(k, L * (i + 0.5L) / 60);
                if (G > F * (1 + 1e-15L) || G < F / 2) ++bad;
            }
            const auto [G2, F2] = a.bridge_point(k, 1.0 + (a.t2 - 1.0) * (i + 0.5) / 60);
            if (G2 > F2 * (1 + 1e-15L) || G2 < F2 / 2) ++bad;
        }
    }
    EXPECT_EQ(bad, 0);
    // The represented G against the numeric F.
    for (double t : log_grid(1.0, a.truncation * 0.999, 200)) {
        const double G = a.G.eval(t), F = integrate(a.f, 0.0, t, 1e-11).value;
        EXPECT_LE(G, F * (1 + 1e-9)) << t;
        EXPECT_GE(G, F / 2 * (1 - 1e-9)) << t;
    }
}

TEST(Noesri, GIsIncreasingAndDerivativeMatches) {
    const NoesriArtifacts& a = noesri();
    double prev = 0.0;
    for (double t : log_grid(1.0, a.truncation * 0.999, 300)) {
        EXPECT_GE(a.G.eval(t), prev);
        prev = a.G.eval(t);
    }
    for (double t : {0.5, 2.0, 100.0, 3e4}) {
        const double h = 1e-6 * t;
        EXPECT_NEAR((a.G.eval(t + h) - a.G.eval(t - h)) / (2 * h), a.g.eval(t), 1e-5 * std::max(1.0, a.g.eval(t))) << t;
    }
}

TEST(Noesri, DivergenceProbeGrowsLinearly) {
    const NoesriArtifacts& a = noesri();
    const auto s = a.truncation_series(1.0);
    const double per = a.bridge_level_integral(1.0);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_GE(s[k], (k + 1) * per * (1 - 1e-9));
    const double slope = (s.back() - s.front()) / (s.size() - 1);
    EXPECT_GT(slope, 0.9 * per);
}

TEST(Noesri, DomainAndCriterion) {
    const NoesriArtifacts& a = noesri();
    EXPECT_EQ(domain_member(L2, a.g).status, Membership::In);
    const Verdict v = l1linf_criterion(
        std::vector<std::vector<double>>{a.truncation_series(0.1), a.truncation_series(1.0), a.truncation_series(10.0)},
        a.norm_lower_series());
    EXPECT_EQ(v.status, Membership::NotIn);
    // S g <= S f pointwise.
    const PiecewiseFn sg = hardy_transform(a.g), sf = hardy_transform(a.f);
    for (double x : log_grid(1e-2, a.truncation * 0.999, 60)) EXPECT_LE(sg.eval(x), sf.eval(x) * (1 + 1e-9));
}

TEST(Noesri, Preconditions) {
    EXPECT_THROW(noesri_construct(L2, parse("(1+t)^(-2) on (0,inf)"), 10), DomainError);  // in L1
    EXPECT_THROW(noesri_construct(L2, parse("t on (0,inf)"), 10), DomainError);           // increasing
    EXPECT_THROW(noesri_construct(SpaceDescriptor::simple(SpaceDescriptor::Tag::L1), parse("(1+t)^(-1) on (0,inf)"), 10),
                 DomainError);
    EXPECT_THROW(noesri_construct(L2, parse("(1+t)^(-1) on (0,inf)"), 2), DomainError);
}
