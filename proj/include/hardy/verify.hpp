#pragma once

// The verification suite: one Report per acceptance check, run concurrently
// and returned in id order, with JSON / CSV emitters and plot series.

#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hardy/construct.hpp"
#include "hardy/vectmeasure.hpp"
#include "hardy/random.hpp"
#include "json.hpp"

namespace hardy {

enum class Status { Pass, Fail, Inconclusive };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct Report {
    std::string id;
    std::string anchor;
    Status status = Status::Inconclusive;
    double lhs = 0.0;  // measured value (worst case over the check)
    double rhs = 0.0;  // reference value or bound
    double tol = 0.0;
    std::string detail;
    double elapsed = 0.0;  // seconds
};

struct VerifyOptions {
    double quad_tol = 1e-9;  // tolerance handed to norm and integral evaluations
    int grid = kGridPoints;  // points of the log grid on [1e-6, 1e6]
    int samples = 50;        // random functions per property
    unsigned seed = 12345;
};

struct CheckInfo {
    std::string id;
    std::string anchor;
    std::string summary;
};

/// Check ids with their anchors, in output order.
inline const std::vector<CheckInfo>& check_catalog() {
    static const std::vector<CheckInfo> c{
        {"A01", "hardy-weak-l1-norm-equality", "||Sf||_{L1w} = ||f||_{L1} for 20 non-negative functions"},
        {"A02", "hardy-levelset-identity", "lambda_{Sf}(t) = (1/t) int_{Sf>t} f at 32 levels per function"},
        {"A03", "hardy-closed-forms", "S chi(0,1), S chi(1,2), S f_{-1/2} against their formulas at 1000 points"},
        {"A04", "falpha-l2-verdicts", "f_{-1/2}: NotIn L2, In [S,L2]; f*_{-1/2} NotIn [S,L2]"},
        {"A05", "theta-power-exactness", "theta for t^(1/p) equals y^(1/p-1)/(p-1)"},
        {"A06", "theta-integral-identity", "int_0^t theta = phi(t) + t theta(t) on the grid"},
        {"A07", "phi-lambda-sandwich", "phi_Lambda <= theta + phi/t <= 2 phi_Lambda; phi_Lambda(1) = pi/2 for sqrt"},
        {"A08", "condition-classifier", "phi-constant and theta-condition constants for t^(1/p); min1t fails"},
        {"A08b", "min1t-grid-ratio-threshold", "min1t phi-constant grid ratio exceeds 1e3"},
        {"A09", "vector-measure-norms", "nu_Linf of dyadic blocks is 1/2; nu_{L1+Linf}[k,inf) is 1; Lambda_sqrt probe decays"},
        {"A10", "noesri-construction", "doubling points, F/2 <= G <= F, linear window sums, g in [S,L2] but not L1+Linf"},
        {"A11", "lorentz-domain-identification", "weighted L1 sandwich for ||S|f|||_{L^{2,1}}; L^{p,q} witness verdicts"},
        {"A12", "property-suites", "equimeasurability, (S|f|)* <= Sf*, lattice monotonicity, Hardy inequality"},
    };
    return c;
}

inline const CheckInfo* find_check(const std::string& id) {
    for (const auto& c : check_catalog())
        if (c.id == id) return &c;
    return nullptr;
}

namespace verify_detail {

// Tolerances pinned from the acceptance criteria.
inline constexpr double kNormEqualityRel = 1e-6;
inline constexpr double kLevelsetAbs = 1e-6;
inline constexpr double kClosedFormRel = 1e-12;
inline constexpr double kThetaRel = 1e-9;
inline constexpr double kIdentityRel = 1e-6;
inline constexpr double kSandwichSlack = 1e-9;
inline constexpr double kPiHalfAbs = 1e-8;
inline constexpr double kConstantAbs = 1e-6;
inline constexpr double kMin1tRatio = 1e3;
inline constexpr double kProbeBound = 1e-2;
inline constexpr double kDoublingAbs = 1e-9;
inline constexpr double kSlopeRel = 0.10;
inline constexpr double kDomainSlack = 1e-6;
inline constexpr double kInconclusiveRate = 0.05;

// Accumulates the worst case of a family of comparisons.
struct Worst {
    double excess = -kInf;  // measured deviation minus allowance; > 0 is a failure
    double lhs = 0.0, rhs = 0.0;
    std::string where;
    int fails = 0;
    int total = 0;

    void add(double measured, double reference, double deviation, double allowance, const std::string& at) {
        ++total;
        const double e = std::isnan(deviation) ? kInf : deviation - allowance;
        if (e > 0) ++fails;
        if (e > excess) {
            excess = e;
            lhs = measured;
            rhs = reference;
            where = at;
        }
    }
    void fill(Report& r, double tol) const {
        r.lhs = lhs;
        r.rhs = rhs;
        r.tol = tol;
        r.status = fails == 0 ? Status::Pass : Status::Fail;
        r.detail = std::to_string(total) + " comparisons, " + std::to_string(fails) + " outside tolerance; worst at " + where;
    }
};

inline double rel_dev(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Non-negative integrable functions for the weak-L1 norm and level-set checks.
inline std::vector<std::pair<std::string, PiecewiseFn>> norm_test_functions() {
    std::vector<std::pair<std::string, PiecewiseFn>> out;
    for (const char* s : {"chi(0,1)", "chi(1,2)", "chi(0.5,3)", "chi(2,5)", "chi(0,0.25)", "chi(3,10)"})
        out.emplace_back(s, parse(s));
    for (double a : {-0.25, -0.5, -0.75, -0.9}) out.emplace_back("f_alpha(" + fmt12(a) + ")", f_alpha(a).f);
    for (const char* s : {"t^(-0.5) on (0,1)", "(1+t)^(-2) on (0,inf)", "t on (0,1)", "logrecip(2) on (0,1)",
                          "t^2 on (1,2)", "(2-t)^(0.5) on (0,2)", "(t-1)^(-0.5) on (1,2)", "3*t^(-0.25) on (0,4)",
                          "(1+t)^(-3) on (2,inf)", "(1+t^2)^(-1) on (0,inf)"})
        out.emplace_back(s, parse(s));
    return out;
}

inline std::vector<ConcavePhi> phi_presets() {
    return {ConcavePhi::power(0.5), ConcavePhi::power(1.0 / 3.0), ConcavePhi::power(2.0 / 3.0), ConcavePhi::min1t()};
}

inline std::vector<double> grid(const VerifyOptions& o) { return default_grid(o.grid); }

inline Report check_a01(const VerifyOptions& o) {
    Report r;
    Worst w;
    const auto L1 = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1);
    const auto L1w = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1weak);
    for (const auto& [name, f] : norm_test_functions()) {
        const double a = norm(L1, f, o.quad_tol);
        const double b = norm(L1w, hardy_transform(f), o.quad_tol);
        w.add(b, a, std::abs(b - a), kNormEqualityRel * a, name);
    }
    w.fill(r, kNormEqualityRel);
    return r;
}

inline Report check_a02(const VerifyOptions&) {
    Report r;
    Worst w;
    for (const auto& [name, f] : norm_test_functions()) {
        const PiecewiseFn sf = hardy_transform(f);
        const DistFn d(sf);
        // Bounded Sf: levels up to 0.9 sup, below which every level set is wider
        // than the double spacing at its ends.
        const double top = std::isfinite(d.sup()) ? 0.9 * d.sup() : 1e3;
        for (double t : log_grid(1e-2 * top, top, 32)) {
            const double lhs = d(t);
            const double rhs = levelset_distribution(f, t);
            w.add(lhs, rhs, std::abs(lhs - rhs), kLevelsetAbs, name + " at t = " + fmt12(t));
        }
    }
    w.fill(r, kLevelsetAbs);
    return r;
}

// Oracles typed in from the displayed closed forms.
inline double s_chi01(double x) { return x < 1.0 ? 1.0 : 1.0 / x; }
inline double s_chi_ab(double a, double b, double x) { return x <= a ? 0.0 : x < b ? 1.0 - a / x : (b - a) / x; }
inline double s_f_recip_p(double p, double t) {
    const double q = 1.0 - 1.0 / p;
    return t < 1.0 ? (1.0 - std::pow(1.0 - t, q)) / (q * t) : p / (p - 1.0) / t;
}

inline Report check_a03(const VerifyOptions&) {
    Report r;
    Worst w;
    const auto xs = log_grid(1e-3, 1e3, 1000);
    const PiecewiseFn s1 = hardy_transform(parse("chi(0,1)"));
    const PiecewiseFn s2 = hardy_transform(parse("chi(1,2)"));
    const PiecewiseFn s3 = hardy_transform(f_alpha(-0.5).f);
    for (double x : xs) {
        const double v1 = s1.eval(x), r1 = s_chi01(x);
        w.add(v1, r1, rel_dev(v1, r1), kClosedFormRel, "S chi(0,1) at " + fmt12(x));
        const double v2 = s2.eval(x), r2 = s_chi_ab(1.0, 2.0, x);
        w.add(v2, r2, rel_dev(v2, r2), kClosedFormRel, "S chi(1,2) at " + fmt12(x));
        const double v3 = s3.eval(x), r3 = s_f_recip_p(2.0, x);
        w.add(v3, r3, rel_dev(v3, r3), kClosedFormRel, "S f_{-1/2} at " + fmt12(x));
    }
    w.fill(r, kClosedFormRel);
    return r;
}

inline Report check_a04(const VerifyOptions& o) {
    Report r;
    const auto L2 = SpaceDescriptor::lp(2.0);
    const PiecewiseFn f = f_alpha(-0.5).f;
    const Verdict in_l2 = member(L2, f, o.quad_tol);
    const Verdict in_dom = domain_member(L2, f, o.quad_tol);
    const Verdict in_gamma = gamma_member(L2, f, o.quad_tol);
    const bool ok = in_l2.status == Membership::NotIn && in_dom.status == Membership::In &&
                    in_gamma.status == Membership::NotIn;
    const bool inconclusive = in_l2.status == Membership::Inconclusive || in_dom.status == Membership::Inconclusive ||
                              in_gamma.status == Membership::Inconclusive;
    r.status = ok ? Status::Pass : inconclusive ? Status::Inconclusive : Status::Fail;
    r.lhs = in_dom.norm;
    r.rhs = in_l2.norm;
    r.detail = std::string("L2: ") + to_string(in_l2.status) + ", [S,L2]: " + to_string(in_dom.status) + " (norm " +
               fmt12(in_dom.norm) + "), Gamma_L2: " + to_string(in_gamma.status);
    return r;
}

inline Report check_a05(const VerifyOptions& o) {
    Report r;
    Worst w;
    for (double p : {1.5, 2.0, 3.0}) {
        // Preset and the same phi given as a parsed custom function.
        const ConcavePhi preset = ConcavePhi::power(1.0 / p);
        const ConcavePhi custom = ConcavePhi::custom(parse("t^(" + fmt_exact(1.0 / p) + ") on (0,inf)"));
        for (double y : grid(o)) {
            const double ref = std::pow(y, 1.0 / p - 1.0) / (p - 1.0);
            const double a = preset.theta(y);
            w.add(a, ref, std::abs(a - ref) / ref, kThetaRel, "p = " + fmt12(p) + ", y = " + fmt12(y));
        }
        for (double y : log_grid(kGridLo, kGridHi, 21)) {
            const double ref = std::pow(y, 1.0 / p - 1.0) / (p - 1.0);
            const double b = custom.theta(y);
            w.add(b, ref, std::abs(b - ref) / ref, kThetaRel, "custom p = " + fmt12(p) + ", y = " + fmt12(y));
        }
    }
    w.fill(r, kThetaRel);
    return r;
}

inline Report check_a06(const VerifyOptions& o) {
    Report r;
    Worst w;
    for (const auto& phi : phi_presets()) {
        for (double t : grid(o)) {
            const double lhs = theta_integral(phi, t);
            const double rhs = phi(t) + t * phi.theta(t);
            w.add(lhs, rhs, std::abs(lhs - rhs) / std::abs(rhs), kIdentityRel, phi.name() + " at t = " + fmt12(t));
        }
    }
    w.fill(r, kIdentityRel);
    return r;
}

inline Report check_a07(const VerifyOptions& o) {
    Report r;
    Worst w;
    for (const auto& phi : phi_presets()) {
        for (double y : grid(o)) {
            const double pl = phi_lambda(phi, y);
            const double mid = phi.theta(y) + phi(y) / y;
            // Relative slack of the tighter side; >= -1e-9 required.
            const double slack = std::min(mid - pl, 2.0 * pl - mid) / mid;
            w.add(slack, 0.0, -slack, kSandwichSlack, phi.name() + " at y = " + fmt12(y));
        }
    }
    const double half_pi = phi_lambda(ConcavePhi::power(0.5), 1.0);
    w.add(half_pi, kPi / 2.0, std::abs(half_pi - kPi / 2.0), kPiHalfAbs, "sqrt phi_Lambda(1)");
    w.fill(r, kSandwichSlack);
    r.detail += "; phi_Lambda(1) for sqrt = " + fmt12(half_pi);
    return r;
}

inline Report check_a08(const VerifyOptions& o) {
    Report r;
    Worst w;
    bool verdicts = true;
    for (double p : {1.5, 2.0, 3.0}) {
        const ConcavePhi phi = ConcavePhi::power(1.0 / p);
        const ConditionReport pc = check_phi_constant(phi, o.grid);
        const ConditionReport tc = check_theta_condition(phi, o.grid);
        verdicts = verdicts && pc.holds == Condition::Holds && tc.holds == Condition::Holds;
        w.add(pc.best_constant, 1.0 / (p - 1.0), std::abs(pc.best_constant - 1.0 / (p - 1.0)), kConstantAbs,
              "phi-constant p = " + fmt12(p));
        w.add(tc.best_constant, p - 1.0, std::abs(tc.best_constant - (p - 1.0)), kConstantAbs,
              "theta-condition p = " + fmt12(p));
    }
    const ConditionReport m = check_phi_constant(ConcavePhi::min1t(), o.grid);
    w.fill(r, kConstantAbs);
    if (!verdicts || m.holds != Condition::Fails) r.status = Status::Fail;
    r.detail += std::string("; power verdicts ") + (verdicts ? "hold" : "not all hold") + "; min1t phi-constant " +
                to_string(m.holds) + " (" + m.detail + ")";
    return r;
}

inline Report check_a08b(const VerifyOptions& o) {
    Report r;
    const ConditionReport m = check_phi_constant(ConcavePhi::min1t(), o.grid);
    r.lhs = m.best_constant;
    r.rhs = kMin1tRatio;
    r.tol = 0.0;
    r.status = m.best_constant > kMin1tRatio ? Status::Pass : Status::Fail;
    r.detail = "grid sup of t theta(t)/phi(t) is " + fmt12(m.best_constant) + " at t = " + fmt12(m.witness) +
               "; the ratio equals -log t on (0,1), so its grid maximum is -log(1e-6) = " + fmt12(-std::log(kGridLo));
    return r;
}

inline Report check_a09(const VerifyOptions& o) {
    Report r;
    Worst w;
    const auto Linf = SpaceDescriptor::simple(SpaceDescriptor::Tag::Linf);
    const auto L1pLinf = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1plusLinf);
    for (int n = 0; n <= 20; ++n) {
        const BorelSet A({{std::ldexp(1.0, n), std::ldexp(1.0, n + 1)}});
        const double v = nu_norm(Linf, A, o.quad_tol).value;
        w.add(v, 0.5, std::abs(v - 0.5), 0.0, "nu_Linf " + A.to_string());
    }
    for (int k = 1; k <= 10; ++k) {
        const BorelSet A({{double(k), kInf}});
        const double v = nu_norm(L1pLinf, A, o.quad_tol).value;
        w.add(v, 1.0, std::abs(v - 1.0), 1e-9, "nu_{L1+Linf} " + A.to_string());
    }
    const auto X = SpaceDescriptor::lambda(ConcavePhi::power(0.5));
    const ProbeResult pr = strong_additivity_probe(X, "geometric", 20, o.quad_tol);
    w.add(pr.norms[14], kProbeBound, pr.norms[14] - kProbeBound, 0.0, "Lambda_sqrt probe at k = 15");
    int over = 0;
    for (std::size_t k = 0; k < pr.norms.size(); ++k)
        if (pr.norms[k] > pr.tail_bounds[k] * (1.0 + 1e-9) + 1e-12) ++over;
    w.fill(r, 0.0);
    if (over > 0 || pr.trend != AdditivityTrend::Vanishing) r.status = Status::Fail;
    r.detail += "; probe trend " + std::string(to_string(pr.trend)) + ", " + std::to_string(over) +
                " norms above the tail bound, norm at k = 15: " + fmt12(pr.norms[14]);
    return r;
}

// int of g chi_{g > c} over window k, from the level set of the piecewise g.
inline std::vector<double> numeric_window_sums(const NoesriArtifacts& a, double c) {
    const DistFn d(a.g);
    const auto level = d.level_set(c);
    std::vector<double> sums;
    double acc = 0.0;
    for (int k = 1; k <= a.represented_windows; ++k) {
        const double lo = static_cast<double>(a.t[k - 1]), hi = static_cast<double>(a.t[k]);
        for (const auto& [x0, x1] : level) {
            const double l = std::max(lo, x0), h = std::min(hi, x1);
            if (h > l) acc += integrate(a.g, l, h, 1e-11).extended();
        }
        sums.push_back(acc);
    }
    return sums;
}

inline double fit_slope(const std::vector<double>& y) {
    const double n = static_cast<double>(y.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline NoesriArtifacts noesri_default() {
    return noesri_construct(SpaceDescriptor::lp(2.0), parse("(1+t)^(-1) on (0,inf)"), 10);
}

inline Report check_a10(const VerifyOptions& o) {
    Report r;
    Worst w;
    const NoesriArtifacts a = noesri_default();
    // F(t) = log(1+t) + atan(t) for f = (1+t)^-1 + (1+t^2)^-1.
    auto oracle = [](long double t) { return std::log1p(t) + std::atan(t); };
    for (int k = 0; k + 1 < static_cast<int>(a.t.size()); ++k) {
        const double ratio = static_cast<double>(oracle(a.t[k + 1]) / oracle(a.t[k]));
        w.add(ratio, 2.0, std::abs(ratio - 2.0), kDoublingAbs, "F(t_" + std::to_string(k + 2) + ")/F(t_" +
                                                                   std::to_string(k + 1) + ")");
    }
    // F/2 <= G <= F at 1000 window-local points split between linear parts and bridges.
    int sandwich_bad = 0, points = 0;
    int segments = a.windows();
    for (int k = 1; k <= a.windows(); ++k) segments += a.linear_length(k) > 0;
    const int per = (1000 + segments - 1) / segments;
    for (int k = 1; k <= a.windows(); ++k) {
        for (int i = 0; i < per; ++i) {
            const long double L = a.linear_length(k);
            if (L > 0) {
                const auto [G, F] = a.linear_point(k, L * (i + 0.5L) / per);
                ++points;
                if (G > F * (1 + 1e-15L) || G < F / 2) ++sandwich_bad;
            }
            const auto [G2, F2] = a.bridge_point(k, 1.0 + (a.t2 - 1.0) * (i + 0.5) / per);
            ++points;
            if (G2 > F2 * (1 + 1e-15L) || G2 < F2 / 2) ++sandwich_bad;
        }
    }
    w.add(sandwich_bad, 0.0, sandwich_bad, 0.0, "F/2 <= G <= F at " + std::to_string(points) + " points");
    const double c = 1.0;
    const auto sums = numeric_window_sums(a, c);
    const double slope = fit_slope(sums);
    const double exact = a.bridge_level_integral(c);
    w.add(slope, exact, std::abs(slope - exact) / exact, kSlopeRel, "window-sum slope");
    const Verdict dom = domain_member(SpaceDescriptor::lp(2.0), a.g, o.quad_tol);
    const Verdict l1 = l1linf_criterion(
        std::vector<std::vector<double>>{a.truncation_series(0.1), a.truncation_series(1.0), a.truncation_series(10.0)},
        a.norm_lower_series());
    w.fill(r, kDoublingAbs);
    if (dom.status != Membership::In || l1.status != Membership::NotIn) r.status = Status::Fail;
    r.detail += "; window-sum slope " + fmt12(slope) + " vs bridge integral " + fmt12(exact) + "; [S,L2]: " +
                to_string(dom.status) + "; L1+Linf criterion: " + to_string(l1.status);
    return r;
}

inline std::vector<PiecewiseFn> random_functions(unsigned seed, int n, bool negative) {
    std::mt19937 rng(seed);
    std::vector<PiecewiseFn> out;
    for (int i = 0; i < n; ++i) out.push_back(random_function(rng, {3, 8.0, negative, true}));
    return out;
}

inline Report check_a11(const VerifyOptions& o) {
    Report r;
    Worst w;
    const double p = 2.0;
    const auto X = SpaceDescriptor::lpq(p, 1.0);
    const PiecewiseFn weight = PiecewiseFn::single(0.0, kInf, {power_atom(1.0, -1.0 / p)});  // t^(-1/p')
    int inconclusive = 0;
    int i = 0;
    for (const auto& f : random_functions(o.seed + 11, 20, true)) {
        ++i;
        try {
            const PiecewiseFn af = f.abs();
            const double wl1 = integrate(af.times(weight), 0.0, kInf, o.quad_tol).extended();
            const double mid = norm(X, hardy_transform(af), o.quad_tol);
            const double lo = wl1 / (p - 1.0), hi = 2.0 * p / (p - 1.0) * wl1;
            const double slack = std::min(mid - lo, hi - mid) / std::max(1.0, mid);
            w.add(mid, lo, -slack, kDomainSlack, "random #" + std::to_string(i) + " " + f.to_string());
        } catch (const InconclusiveError&) {
            ++inconclusive;
        }
    }
    const PiecewiseFn wit = lpq_witness(2.0, 2.0);
    const Verdict in22 = member(SpaceDescriptor::lpq(2.0, 2.0), wit, o.quad_tol);
    const Verdict in21 = member(SpaceDescriptor::lpq(2.0, 1.0), wit, o.quad_tol);
    w.fill(r, kDomainSlack);
    if (in22.status != Membership::In || in21.status != Membership::NotIn) r.status = Status::Fail;
    if (r.status == Status::Pass && inconclusive > 0) r.status = Status::Inconclusive;
    r.detail += "; " + std::to_string(inconclusive) + " inconclusive; witness: L^{2,2} " + to_string(in22.status) +
                ", L^{2,1} " + to_string(in21.status);
    return r;
}

struct PropertyTally {
    int total = 0, fails = 0, inconclusive = 0;
    std::vector<std::string> notes;
    std::vector<double> hardy_ratio;  // ||Sf||_2 / ||f||_2 per function
};

inline const std::vector<std::string>& property_spaces() {
    static const std::vector<std::string> s{"L1",      "Lp:2",        "Linf",         "L1w",     "Lpq:2,1",
                                            "Lpq:2,inf", "Lambda:sqrt", "Lambda:min1t", "L1+Linf", "L1capLinf"};
    return s;
}

// One random function through every property; g = |f| + |h| dominates f.
inline PropertyTally run_properties(const PiecewiseFn& f, const PiecewiseFn& h, double tol) {
    PropertyTally t;
    auto record = [&](const std::string& what, const std::function<bool()>& body) {
        ++t.total;
        try {
            if (!body()) {
                ++t.fails;
                t.notes.push_back(what + " failed for " + f.to_string());
            }
        } catch (const InconclusiveError& e) {
            ++t.inconclusive;
            t.notes.push_back(what + " inconclusive: " + e.what());
        } catch (const std::exception& e) {
            ++t.fails;
            t.notes.push_back(what + " error: " + e.what());
        }
    };
    const PiecewiseFn af = f.abs();
    const PiecewiseFn g = af.plus(h.abs());
    record("equimeasurability", [&] {
        return check_equimeasurable(f, rearrangement(f).fn, log_grid(1e-3, 1e2, 40));
    });
    for (const auto& x : property_spaces()) {
        record("lattice " + x, [&] {
            const auto X = parse_space(x);
            const double a = norm(X, f, tol), b = norm(X, g, tol);
            return a <= b * (1.0 + 1e-9) + 1e-12;
        });
    }
    record("hardy inequality", [&] {
        const auto L2 = SpaceDescriptor::lp(2.0);
        const double a = norm(L2, hardy_transform(f), tol), b = norm(L2, f, tol);
        t.hardy_ratio.push_back(b > 0 ? a / b : 0.0);
        return a <= 2.0 * b * (1.0 + 1e-9);
    });
    record("(S|f|)* <= Sf*", [&] {
        const PiecewiseFn lhs = rearrangement(hardy_transform(af)).fn;
        const PiecewiseFn rhs = hardy_transform(rearrangement(f).fn);
        for (double x : log_grid(1e-3, 1e3, 60))
            if (lhs.eval(x) > rhs.eval(x) * (1.0 + 1e-7) + 1e-12) return false;
        return true;
    });
    return t;
}

inline Report check_a12(const VerifyOptions& o) {
    Report r;
    std::mt19937 rng(o.seed);
    std::vector<std::pair<PiecewiseFn, PiecewiseFn>> cases;
    for (int i = 0; i < o.samples; ++i) {
        auto f = random_function(rng, {3, 8.0, true, true});
        auto h = random_function(rng);
        cases.emplace_back(std::move(f), std::move(h));
    }
    std::vector<std::future<PropertyTally>> jobs;
    for (const auto& [f, h] : cases)
        jobs.push_back(std::async(std::launch::async, [&f, &h, &o] { return run_properties(f, h, o.quad_tol); }));
    PropertyTally sum;
    for (auto& j : jobs) {
        const PropertyTally t = j.get();
        sum.total += t.total;
        sum.fails += t.fails;
        sum.inconclusive += t.inconclusive;
        sum.notes.insert(sum.notes.end(), t.notes.begin(), t.notes.end());
    }
    const double rate = sum.total ? static_cast<double>(sum.inconclusive) / sum.total : 0.0;
    r.lhs = sum.fails;
    r.rhs = rate;
    r.tol = kInconclusiveRate;
    r.status = sum.fails == 0 && rate < kInconclusiveRate ? Status::Pass : Status::Fail;
    r.detail = std::to_string(o.samples) + " functions, " + std::to_string(sum.total) + " checks, " +
               std::to_string(sum.fails) + " failures, " + std::to_string(sum.inconclusive) + " inconclusive";
    if (!sum.notes.empty()) r.detail += "; first: " + sum.notes.front();
    return r;
}

inline std::function<Report(const VerifyOptions&)> check_fn(const std::string& id) {
    static const std::map<std::string, std::function<Report(const VerifyOptions&)>> m{
        {"A01", check_a01}, {"A02", check_a02},   {"A03", check_a03}, {"A04", check_a04}, {"A05", check_a05},
        {"A06", check_a06}, {"A07", check_a07},   {"A08", check_a08}, {"A08b", check_a08b}, {"A09", check_a09},
        {"A10", check_a10}, {"A11", check_a11},   {"A12", check_a12},
    };
    return m.at(id);
}

}  // namespace verify_detail

/// Runs one check; numerical give-ups become Inconclusive and other errors Fail.
inline Report run_check(const std::string& id, const VerifyOptions& o = {}) {
    const CheckInfo* info = find_check(id);
    if (!info) throw DomainError("unknown check id '" + id + "'");
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    try {
        r = verify_detail::check_fn(id)(o);
    } catch (const InconclusiveError& e) {
        r.status = Status::Inconclusive;
        r.lhs = e.best_estimate();
        r.detail = e.what();
    } catch (const std::exception& e) {
        r.status = Status::Fail;
        r.detail = std::string("error: ") + e.what();
    }
    r.id = info->id;
    r.anchor = info->anchor;
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Runs the checks whose id starts with `filter` (all when empty) concurrently; results in id order.
inline std::vector<Report> run_verify(const VerifyOptions& o = {}, const std::string& filter = "") {
    std::vector<std::future<Report>> jobs;
    for (const auto& c : check_catalog()) {
        if (!filter.empty() && c.id != filter && c.id.rfind(filter, 0) != 0) continue;
        jobs.push_back(std::async(std::launch::async, [id = c.id, o] { return run_check(id, o); }));
    }
    std::vector<Report> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

/// 0 all pass, 1 any fail, 3 inconclusive without failures.
inline int exit_code(const std::vector<Report>& rs) {
    bool inc = false;
    for (const auto& r : rs) {
        if (r.status == Status::Fail) return 1;
        if (r.status == Status::Inconclusive) inc = true;
    }
    return inc ? 3 : 0;
}

namespace verify_detail {

inline nlohmann::json number(double x) {
    if (!std::isfinite(x)) return fmt12(x);
    return std::stod(fmt12(x));
}

}  // namespace verify_detail

inline nlohmann::ordered_json to_json(const Report& r, bool with_timing = true) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["anchor"] = r.anchor;
    j["status"] = to_string(r.status);
    j["lhs"] = verify_detail::number(r.lhs);
    j["rhs"] = verify_detail::number(r.rhs);
    j["tol"] = verify_detail::number(r.tol);
    j["detail"] = r.detail;
    if (with_timing) j["elapsed_s"] = verify_detail::number(r.elapsed);
    return j;
}

inline std::string reports_json(const std::vector<Report>& rs, bool with_timing = true) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) arr.push_back(to_json(r, with_timing));
    return arr.dump(2) + "\n";
}

namespace verify_detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace verify_detail

inline std::string reports_csv(const std::vector<Report>& rs) {
    std::string out = "id,anchor,status,lhs,rhs,tol\n";
    for (const auto& r : rs) {
        out += r.id + "," + r.anchor + "," + to_string(r.status) + "," + fmt12(r.lhs) + "," + fmt12(r.rhs) + "," +
               fmt12(r.tol) + "\n";
    }
    return out;
}

inline std::string reports_text(const std::vector<Report>& rs) {
    std::string out;
    for (const auto& r : rs) {
        char head[96];
        std::snprintf(head, sizeof head, "%-5s %-13s %-31s", r.id.c_str(), to_string(r.status), r.anchor.c_str());
        out += std::string(head) + " lhs=" + fmt12(r.lhs) + " rhs=" + fmt12(r.rhs) + " tol=" + fmt12(r.tol) + "  " +
               r.detail + "\n";
    }
    return out;
}

/// (x, y) series behind a check, for external plotting.
inline std::vector<std::pair<double, double>> plot_data(const std::string& id, const VerifyOptions& o = {}) {
    using namespace verify_detail;
    if (!find_check(id)) throw DomainError("unknown check id '" + id + "'");
    std::vector<std::pair<double, double>> xy;
    if (id == "A01") {  // (||f||_1, ||Sf||_{L1w})
        const auto L1 = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1);
        const auto L1w = SpaceDescriptor::simple(SpaceDescriptor::Tag::L1weak);
        for (const auto& [name, f] : norm_test_functions())
            xy.push_back({norm(L1, f, o.quad_tol), norm(L1w, hardy_transform(f), o.quad_tol)});
    } else if (id == "A02") {  // (t, lambda_{S chi(0,1)}(t))
        const DistFn d(hardy_transform(parse("chi(0,1)")));
        for (double t : log_grid(1e-2, 0.999, 32)) xy.push_back({t, d(t)});
    } else if (id == "A03") {  // (t, S f_{-1/2}(t))
        const PiecewiseFn s = hardy_transform(f_alpha(-0.5).f);
        for (double x : log_grid(1e-3, 1e3, 1000)) xy.push_back({x, s.eval(x)});
    } else if (id == "A04") {  // (t, S f*_{-1/2}(t)^2) integrand of the diverging L2 norm
        const PiecewiseFn s = hardy_transform(rearrangement(f_alpha(-0.5).f).fn);
        for (double x : log_grid(1e-3, 1e3, 200)) xy.push_back({x, s.eval(x) * s.eval(x)});
    } else if (id == "A05") {  // (y, theta(y)) for sqrt
        const ConcavePhi phi = ConcavePhi::power(0.5);
        for (double y : grid(o)) xy.push_back({y, phi.theta(y)});
    } else if (id == "A06") {  // (t, int_0^t theta) for min1t
        const ConcavePhi phi = ConcavePhi::min1t();
        for (double t : grid(o)) xy.push_back({t, theta_integral(phi, t)});
    } else if (id == "A07") {  // (y, (theta + phi/y) / phi_Lambda) for min1t
        const ConcavePhi phi = ConcavePhi::min1t();
        for (double y : grid(o)) xy.push_back({y, (phi.theta(y) + phi(y) / y) / phi_lambda(phi, y)});
    } else if (id == "A08" || id == "A08b") {  // (t, t theta(t) / phi(t)) for min1t
        const ConcavePhi phi = ConcavePhi::min1t();
        for (double t : grid(o)) xy.push_back({t, t * phi.theta(t) / phi(t)});
    } else if (id == "A09") {  // (k, ||nu(A_k u ... u A_20)||) for the Lambda_sqrt probe
        const auto pr = strong_additivity_probe(SpaceDescriptor::lambda(ConcavePhi::power(0.5)), "geometric", 20,
                                                o.quad_tol);
        for (std::size_t k = 0; k < pr.norms.size(); ++k) xy.push_back({double(k + 1), pr.norms[k]});
    } else if (id == "A10") {  // (k, partial sums of int g chi_{g>1} over windows 1..k)
        const auto a = noesri_default();
        const auto s = a.truncation_series(1.0);
        for (std::size_t k = 0; k < s.size(); ++k) xy.push_back({double(k + 1), s[k]});
    } else if (id == "A11") {  // (int |f| t^(-1/2), ||S|f|||_{L^{2,1}}) for the random functions
        const PiecewiseFn weight = PiecewiseFn::single(0.0, kInf, {power_atom(1.0, -0.5)});
        for (const auto& f : random_functions(o.seed + 11, 20, true)) {
            const PiecewiseFn af = f.abs();
            xy.push_back({integrate(af.times(weight), 0.0, kInf, o.quad_tol).extended(),
                          norm(SpaceDescriptor::lpq(2.0, 1.0), hardy_transform(af), o.quad_tol)});
        }
    } else {  // A12: (i, ||Sf||_2 / ||f||_2)
        std::mt19937 rng(o.seed);
        const auto L2 = SpaceDescriptor::lp(2.0);
        for (int i = 0; i < o.samples; ++i) {
            const auto f = random_function(rng, {3, 8.0, true, true});
            (void)random_function(rng);
            const double b = norm(L2, f, o.quad_tol);
            xy.push_back({double(i + 1), b > 0 ? norm(L2, hardy_transform(f), o.quad_tol) / b : 0.0});
        }
    }
    return xy;
}

inline std::string plot_csv(const std::vector<std::pair<double, double>>& xy) {
    std::string out = "x,y\n";
    for (const auto& [x, y] : xy) out += fmt12(x) + "," + fmt12(y) + "\n";
    return out;
}

}  // namespace hardy
