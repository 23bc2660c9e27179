#pragma once

// Norms of rearrangement-invariant spaces on (0, inf), fundamental functions,
// and three-valued membership verdicts for X, [S,X] and Gamma_X.

#include <memory>
#include <string>

#include "hardy/hardy_operator.hpp"
#include "hardy/phi.hpp"

namespace hardy {

struct SpaceDescriptor {
    enum class Tag { Lp, Lpq, L1weak, LambdaPhi, L1plusLinf, L1capLinf, L1, Linf };
    Tag tag = Tag::Lp;
    double p = 2.0;
    double q = 1.0;
    std::shared_ptr<const ConcavePhi> phi;

    static SpaceDescriptor lp(double p) {
        if (std::isinf(p)) return {Tag::Linf, 2.0, 1.0, nullptr};
        if (p == 1.0) return {Tag::L1, 2.0, 1.0, nullptr};
        if (!(p > 1.0)) throw DomainError("L^p needs p >= 1");
        return {Tag::Lp, p, 1.0, nullptr};
    }
    static SpaceDescriptor lpq(double p, double q) {
        if (!(p > 1.0) || std::isinf(p) || !(q >= 1.0)) throw DomainError("L^{p,q} needs 1 < p < inf, q >= 1");
        return {Tag::Lpq, p, q, nullptr};
    }
    static SpaceDescriptor lambda(const ConcavePhi& phi) {
        SpaceDescriptor d{Tag::LambdaPhi, 2.0, 1.0, nullptr};
        d.phi = std::make_shared<const ConcavePhi>(phi);
        return d;
    }
    static SpaceDescriptor simple(Tag t) { return {t, 2.0, 1.0, nullptr}; }

    std::string to_string() const {
        switch (tag) {
            case Tag::Lp: return "Lp:" + fmt12(p);
            case Tag::Lpq: return "Lpq:" + fmt12(p) + "," + fmt12(q);
            case Tag::L1weak: return "L1w";
            case Tag::LambdaPhi: return "Lambda:" + phi->name();
            case Tag::L1plusLinf: return "L1+Linf";
            case Tag::L1capLinf: return "L1capLinf";
            case Tag::L1: return "L1";
            case Tag::Linf: return "Linf";
        }
        return "?";
    }
};

namespace spaces_detail {

inline double parse_number(const std::string& s) {
    const Sum e = parse_expression(s);
    if (e.empty()) return 0.0;
    if (e.size() != 1 || !e[0].is_constant()) throw ParseError("expected a number in '" + s + "'", 0);
    return e[0].coef;
}

}  // namespace spaces_detail

/// "Lp:2", "Lp:inf", "Lpq:2,1", "L1w", "Lambda:sqrt", "Lambda:pow:1/3",
/// "Lambda:min1t", "L1+Linf", "L1capLinf", "L1", "Linf".
inline SpaceDescriptor parse_space(const std::string& text) {
    using T = SpaceDescriptor::Tag;
    if (text == "L1w") return SpaceDescriptor::simple(T::L1weak);
    if (text == "L1+Linf") return SpaceDescriptor::simple(T::L1plusLinf);
    if (text == "L1capLinf") return SpaceDescriptor::simple(T::L1capLinf);
    if (text == "L1") return SpaceDescriptor::simple(T::L1);
    if (text == "Linf") return SpaceDescriptor::simple(T::Linf);
    if (text.rfind("Lpq:", 0) == 0) {
        const auto body = text.substr(4);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw ParseError("Lpq needs p,q", 4);
        const std::string qs = body.substr(comma + 1);
        const double q = qs == "inf" ? kInf : spaces_detail::parse_number(qs);
        return SpaceDescriptor::lpq(spaces_detail::parse_number(body.substr(0, comma)), q);
    }
    if (text.rfind("Lp:", 0) == 0) {
        const auto body = text.substr(3);
        return SpaceDescriptor::lp(body == "inf" ? kInf : spaces_detail::parse_number(body));
    }
    if (text.rfind("Lambda:", 0) == 0) return SpaceDescriptor::lambda(ConcavePhi::parse(text.substr(7)));
    throw ParseError("unknown space '" + text + "'", 0);
}

struct NormValue {
    double value = 0.0;  // +inf encodes non-membership
    std::string evidence;
};

namespace spaces_detail {

// int_0^sup g(s, lambda(s)) ds split into bands between breakpoints of lambda.
inline NormValue layer_cake(const DistFn& d, const std::function<double(double, double)>& g, double tol) {
    std::vector<double> levels{0.0};
    for (double b : d.breakpoints()) levels.push_back(b);
    const double top = d.sup();
    if (levels.back() < top) levels.push_back(top);
    double total = 0.0;
    const double band_tol = tol / static_cast<double>(levels.size());
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double a = levels[i], b = levels[i + 1];
        if (!(a < b)) continue;
        auto h = [&](double s) { return g(s, d(s)); };
        const auto r = integrate_callable(h, a, b, band_tol, "layer");
        if (!r.finite()) {
            return {kInf, "divergent layer integral at level " + fmt12(r.divergent_at)};
        }
        total += r.value;
    }
    return {total, "layer-cake integral"};
}

// sup_s w(s) over the levels of lambda, with growth detection toward 0 and inf.
inline NormValue level_sup(const DistFn& d, const std::function<double(double)>& w) {
    if (d.sup() == 0.0) return {0.0, "zero function"};
    if (d.tail_level() > 0.0) return {kInf, "level set of infinite measure below " + fmt12(d.tail_level())};
    auto bps = d.breakpoints();
    const double top = d.sup();
    if (bps.empty()) bps.push_back(std::isfinite(top) ? top : 1.0);
    double best = 0.0;
    auto consider = [&](double s) {
        if (!(s > 0) || !std::isfinite(s)) return;
        const double v = w(s);
        if (v > best) best = v;
    };
    for (double b : bps) {
        consider(b);
        consider(b * (1.0 - 1e-13));
    }
    // Each band between consecutive levels: geometric samples refined by golden section.
    auto band = [&](double a, double b) {
        const double step = std::pow(b / a, 1.0 / 24.0);
        double xb = a, vb = -1.0;
        for (int k = 1; k < 24; ++k) {
            const double s = a * std::pow(step, k);
            const double v = w(s);
            if (v > vb) {
                vb = v;
                xb = s;
            }
        }
        const auto [xm, vm] = quad::golden_max([&](double u) { return w(std::exp(u)); },
                                               std::log(std::max(a, xb / step)), std::log(std::min(b, xb * step)), 80);
        (void)xm;
        best = std::max({best, vb, vm});
    };
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) band(bps[i], bps[i + 1]);
    if (std::isfinite(top) && bps.back() < top) band(bps.back(), top);
    band(bps.front() * 0x1p-30, bps.front());
    if (std::isinf(top)) band(bps.back(), bps.back() * 0x1p30);
    // Rays toward level 0 and toward an unbounded top: sustained growth means no finite supremum.
    auto ray = [&](double start, double factor) {
        double prev = w(start);
        int growing = 0;
        for (int k = 1; k <= 60; ++k) {
            const double s = start * std::pow(factor, k);
            if (!(s > 0) || !std::isfinite(s)) break;
            const double v = w(s);
            if (std::isinf(v)) return true;
            best = std::max(best, v);
            growing = v > prev * (1.0 + quad::kDivergenceGrowth) ? growing + 1 : 0;
            if (growing >= quad::kDivergenceStreak && k >= 20) return true;
            prev = v;
        }
        return false;
    };
    if (ray(bps.front(), 0.25)) return {kInf, "unbounded as the level tends to 0"};
    if (std::isinf(top) && ray(bps.back(), 4.0)) return {kInf, "unbounded as the level tends to infinity"};
    return {best, "supremum over levels"};
}

}  // namespace spaces_detail

/// Norm of f in X as an extended real; throws InconclusiveError when the
/// numerics cannot classify it.
inline NormValue norm_detail(const SpaceDescriptor& X, const PiecewiseFn& f, double tol = 1e-9) {
    using T = SpaceDescriptor::Tag;
    if (f.is_zero()) return {0.0, "zero function"};
    auto lp = [&](double p) -> NormValue {
        const auto r = integrate(f.abs_pow(p), 0.0, kInf, tol);
        if (!r.finite()) return {kInf, "divergent integral of |f|^" + fmt12(p) + " at " + fmt12(r.divergent_at)};
        return {std::pow(r.value, 1.0 / p), "integral of |f|^" + fmt12(p)};
    };
    switch (X.tag) {
        case T::L1: return lp(1.0);
        case T::Lp: return lp(X.p);
        case T::Linf: {
            const DistFn d(f);
            return {d.sup(), std::isinf(d.sup()) ? "unbounded" : "essential supremum"};
        }
        case T::L1weak: {
            const DistFn d(f);
            return spaces_detail::level_sup(d, [&](double s) { return s * d(s); });
        }
        case T::L1capLinf: {
            const NormValue a = lp(1.0);
            const DistFn d(f);
            if (d.sup() > a.value) return {d.sup(), "essential supremum"};
            return a;
        }
        case T::Lpq: {
            const RearrangedFn r = rearrangement(f);
            if (std::isinf(X.q)) {
                return spaces_detail::level_sup(r.dist, [&](double s) { return s * std::pow(r.dist(s), 1.0 / X.p); });
            }
            if (r.exact) {
                const auto g = r.fn.abs_pow(X.q).times(Sum{power_atom(1.0, X.q / X.p - 1.0)});
                const auto res = integrate(g, 0.0, kInf, tol);
                if (!res.finite())
                    return {kInf, "divergent integral of (t^{1/p} f*)^q dt/t at " + fmt12(res.divergent_at)};
                return {std::pow(res.value, 1.0 / X.q), "integral of (t^{1/p} f*)^q dt/t"};
            }
            auto nv = spaces_detail::layer_cake(
                r.dist, [&](double s, double lam) { return X.p * std::pow(s, X.q - 1.0) * std::pow(lam, X.q / X.p); },
                tol);
            if (std::isfinite(nv.value)) nv.value = std::pow(nv.value, 1.0 / X.q);
            return nv;
        }
        case T::LambdaPhi: {
            const ConcavePhi& phi = *X.phi;
            const RearrangedFn r = rearrangement(f);
            const double top = r.dist.sup();
            if (phi.jump() > 0 && std::isinf(top)) return {kInf, "phi(0+) times unbounded f*(0+)"};
            const double head = phi.jump() > 0 ? phi.jump() * top : 0.0;
            if (r.exact) {
                const auto res = integrate(r.fn.times(phi.derivative_fn()), 0.0, kInf, tol);
                if (!res.finite()) return {kInf, "divergent integral of f* phi' at " + fmt12(res.divergent_at)};
                return {head + res.value, "phi(0+) f*(0+) + integral of f* phi'"};
            }
            return spaces_detail::layer_cake(r.dist, [&](double, double lam) { return phi(lam); }, tol);
        }
        case T::L1plusLinf: {
            const RearrangedFn r = rearrangement(f);
            if (r.exact) {
                const auto res = integrate(r.fn, 0.0, 1.0, tol);
                if (!res.finite()) return {kInf, "divergent integral of f* on (0,1) at " + fmt12(res.divergent_at)};
                return {res.value, "integral of f* over (0,1)"};
            }
            return spaces_detail::layer_cake(r.dist, [](double, double lam) { return std::min(lam, 1.0); }, tol);
        }
    }
    return {kInf, "unsupported"};
}

inline double norm(const SpaceDescriptor& X, const PiecewiseFn& f, double tol = 1e-9) {
    return norm_detail(X, f, tol).value;
}

/// phi_X(t) = ||chi_[0,t]||_X.
inline double fundamental_function(const SpaceDescriptor& X, double t) {
    if (!(t > 0)) throw DomainError("fundamental function needs t > 0");
    return norm(X, PiecewiseFn::indicator(0.0, t));
}

enum class Membership { In, NotIn, Inconclusive };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::In: return "In";
        case Membership::NotIn: return "NotIn";
        case Membership::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct Verdict {
    Membership status = Membership::Inconclusive;
    double norm = std::numeric_limits<double>::quiet_NaN();
    std::string evidence;
};

inline Verdict member(const SpaceDescriptor& X, const PiecewiseFn& f, double tol = 1e-9) {
    try {
        const NormValue nv = norm_detail(X, f, tol);
        if (std::isfinite(nv.value)) return {Membership::In, nv.value, nv.evidence};
        return {Membership::NotIn, kInf, nv.evidence};
    } catch (const InconclusiveError& e) {
        return {Membership::Inconclusive, e.best_estimate(), e.what()};
    }
}

/// f in [S,X] iff S|f| in X; the norm of [S,X] is ||S|f| ||_X.
inline Verdict domain_member(const SpaceDescriptor& X, const PiecewiseFn& f, double tol = 1e-9) {
    PiecewiseFn sf;
    try {
        sf = hardy_transform(f.abs());
    } catch (const DomainError& e) {
        return {Membership::NotIn, kInf, std::string("S|f| undefined: ") + e.what()};
    }
    Verdict v = member(X, sf, tol);
    v.evidence = "||S|f|||_X: " + v.evidence;
    return v;
}

/// f in Gamma_X iff S f* in X.
inline Verdict gamma_member(const SpaceDescriptor& X, const PiecewiseFn& f, double tol = 1e-9) {
    if (f.is_zero()) return {Membership::In, 0.0, "zero function"};
    PiecewiseFn sfs;
    try {
        sfs = hardy_transform(rearrangement(f).fn);
    } catch (const DomainError& e) {
        return {Membership::NotIn, kInf, std::string("S f* undefined: ") + e.what()};
    }
    Verdict v = member(X, sfs, tol);
    v.evidence = "||S f*||_X: " + v.evidence;
    return v;
}

/// Decides f in L^1 + L^inf for f >= 0 from the truncations f chi_{f > c}:
/// NotIn iff every truncation integral diverges; cross-checked with the norm.
inline Verdict l1linf_criterion(const PiecewiseFn& f, const std::vector<double>& c_grid) {
    const DistFn d(f);
    int divergent = 0, finite = 0;
    std::string evidence;
    for (double c : c_grid) {
        if (d.tail_level() > c) {
            ++divergent;  // infinite-measure level set above c
            continue;
        }
        double total = 0.0;
        bool div = false;
        try {
            for (const auto& [a, b] : d.level_set(c)) {
                const auto r = integrate(f, a, b);
                if (!r.finite()) {
                    div = true;
                    break;
                }
                total += r.value;
            }
        } catch (const InconclusiveError& e) {
            return {Membership::Inconclusive, kInf, std::string("truncation probe: ") + e.what()};
        }
        (div ? divergent : finite) += 1;
        if (!div && evidence.empty()) evidence = "truncation at c=" + fmt12(c) + " integrates to " + fmt12(total);
    }
    const Verdict nv = member(SpaceDescriptor::simple(SpaceDescriptor::Tag::L1plusLinf), f);
    if (finite > 0) {
        if (nv.status == Membership::NotIn) return {Membership::Inconclusive, nv.norm, "truncation finite but norm infinite"};
        return {Membership::In, nv.norm, evidence};
    }
    if (nv.status == Membership::In) return {Membership::Inconclusive, nv.norm, "truncations diverge but norm finite"};
    return {Membership::NotIn, kInf, "every truncation f chi_{f>c} diverges on the grid"};
}

/// Series form of the same criterion for functions known window by window:
/// partial[c][k] is the truncation integral over the first k+1 windows at
/// level c_grid[c]; norm_lower[k] is a lower bound of the L^1+L^inf norm
/// from the first k+1 windows.
inline Verdict l1linf_criterion(const std::vector<std::vector<double>>& partial, const std::vector<double>& norm_lower) {
    auto diverges = [](const std::vector<double>& s) {
        int streak = 0;
        for (std::size_t k = 1; k < s.size(); ++k) {
            streak = (s[k - 1] > 0 && s[k] >= s[k - 1] * (1.0 + quad::kDivergenceGrowth)) ? streak + 1 : 0;
        }
        return streak >= quad::kDivergenceStreak;
    };
    for (const auto& s : partial)
        if (!diverges(s)) return {Membership::Inconclusive, kInf, "a truncation series stopped growing"};
    if (!diverges(norm_lower)) return {Membership::Inconclusive, kInf, "norm lower bounds stopped growing"};
    return {Membership::NotIn, kInf, "truncation and norm series grow without bound"};
}

struct DEquivalenceReport {
    Verdict d1, d2, d3, d4;
    bool agree = false;
};

/// Gamma_X != {0}  <=>  chi_(0,1) in Gamma_X  <=>  min(1, 1/t) in X  <=>  L^inf cap L^{1,inf} in X.
inline DEquivalenceReport check_d_equivalences(const SpaceDescriptor& X) {
    DEquivalenceReport r;
    const PiecewiseFn chi = PiecewiseFn::indicator(0.0, 1.0);
    const PiecewiseFn extremal = parse("chi(0,1) + t^(-1) on (1,inf)");
    // d1: some non-zero witness in Gamma_X.
    r.d1 = {Membership::NotIn, kInf, "no witness in Gamma_X"};
    for (const char* w : {"chi(0,1)", "chi(0,0.5)", "(1+t)^(-2) on (0,inf)"}) {
        const Verdict v = gamma_member(X, parse(w));
        if (v.status == Membership::In) {
            r.d1 = {Membership::In, v.norm, std::string("witness ") + w};
            break;
        }
        if (v.status == Membership::Inconclusive) r.d1 = v;
    }
    r.d2 = gamma_member(X, chi);
    r.d3 = member(X, extremal);
    // d4: elements of L^inf cap L^{1,inf} satisfy g* <= C min(1, 1/t); test the
    // extremal function and two further witnesses.
    r.d4 = {Membership::In, 0.0, "witnesses in X"};
    for (const char* w : {"chi(0,1) + t^(-1) on (1,inf)", "(1+t)^(-1) on (0,inf)", "chi(2,3) + 3*t^(-1) on (3,inf)"}) {
        const Verdict v = member(X, parse(w));
        if (v.status != Membership::In) {
            r.d4 = {v.status, v.norm, std::string("witness ") + w + ": " + v.evidence};
            break;
        }
        r.d4.norm = std::max(r.d4.norm, v.norm);
    }
    r.agree = r.d1.status == r.d2.status && r.d2.status == r.d3.status && r.d3.status == r.d4.status &&
              r.d1.status != Membership::Inconclusive;
    return r;
}

}  // namespace hardy
