#pragma once

// Definite and improper integrals of piecewise functions with divergence
// classification. Closed forms are used whenever every atom on a piece has
// one and is integrable at both ends; otherwise adaptive Gauss-Kronrod on the
// regular part and geometric window ladders toward singular endpoints.

#include <functional>
#include <string>

#include "hardy/piecewise.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

inline constexpr double kDefaultTol = 1e-9;

enum class IntegralStatus { Finite, Divergent };
enum class IntegralMethod { ClosedForm, AdaptiveQuadrature, ExponentAnalysis };

inline const char* to_string(IntegralMethod m) {
    switch (m) {
        case IntegralMethod::ClosedForm: return "closed_form";
        case IntegralMethod::AdaptiveQuadrature: return "adaptive_quadrature";
        case IntegralMethod::ExponentAnalysis: return "exponent_analysis";
    }
    return "?";
}

struct IntegralResult {
    IntegralStatus status = IntegralStatus::Finite;
    double value = 0.0;
    double error = 0.0;
    double divergent_at = 0.0;
    IntegralMethod method = IntegralMethod::ClosedForm;

    bool finite() const { return status == IntegralStatus::Finite; }
    /// Value as an extended real: +inf for a divergent non-negative integrand.
    double extended() const { return finite() ? value : kInf; }
};

struct IntegrateOptions {
    double tol = kDefaultTol;
    bool force_numeric = false;
};

/// Margin around -1 inside which a numerically estimated exponent is not trusted.
inline constexpr double kOrderMargin = 0.05;

namespace integrate_detail {

struct EndInfo {
    quad::Convergence hint = quad::Convergence::Converges;
    bool singular = false;
};

inline double atom_sign_near(const Atom& a, double e, double side) {
    const double v = std::isinf(e) ? a.eval(1e200) : a.eval_near(e, side, 1e-200);
    return v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0;
}

// Classifies the integrand of piece p at endpoint e (side +1: approached from
// the right, -1: from the left; e = inf for the tail).
inline EndInfo classify_end(const Piece& p, double e, double side, double scale) {
    EndInfo info;
    const bool at_inf = std::isinf(e);
    std::vector<std::pair<Order, double>> bad;  // non-integrable atoms with sign
    for (const auto& a : p.atoms) {
        const Order o = at_inf ? a.order_at_infinity() : a.order_at(e);
        if (!at_inf && (o.power < 0.0 || o.log_power != 0.0)) info.singular = true;
        const bool ok = at_inf ? integrable_at_infinity(o) : integrable_at_finite(o);
        if (!ok) bad.push_back({o, atom_sign_near(a, e, side)});
    }
    if (at_inf || e == 0.0) info.singular = true;
    quad::Convergence numeric_hint = quad::Convergence::Converges;
    if (!p.numeric.empty()) {
        auto g = [&](double d) {
            double v = 0.0;
            for (const auto& n : p.numeric) v += n->fn(at_inf ? d : e + side * d);
            return v;
        };
        const auto est = at_inf ? quad::estimate_order_at_infinity(g, scale) : quad::estimate_order_at_zero(g, scale);
        if (!est.valid) {
            numeric_hint = quad::Convergence::Unknown;
            info.singular = true;
        } else if (at_inf) {
            numeric_hint = est.power < -1.0 - kOrderMargin   ? quad::Convergence::Converges
                           : est.power > -1.0 + kOrderMargin ? quad::Convergence::Diverges
                                                             : quad::Convergence::Unknown;
        } else {
            // Negative or fractional local powers mark a branch point: use the ladder.
            if (est.power < -0.01 || std::abs(est.power - std::round(est.power)) > 0.01) info.singular = true;
            numeric_hint = est.power > -1.0 + kOrderMargin   ? quad::Convergence::Converges
                           : est.power < -1.0 - kOrderMargin ? quad::Convergence::Diverges
                                                             : quad::Convergence::Unknown;
        }
    }
    if (bad.empty()) {
        info.hint = numeric_hint;
        return info;
    }
    // Dominant group among non-integrable atoms.
    Order worst = bad[0].first;
    for (const auto& [o, s] : bad)
        if (more_singular(o, worst, at_inf)) worst = o;
    double sign = 0.0;
    bool mixed = false;
    for (const auto& [o, s] : bad) {
        if (!same_order(o, worst)) continue;
        if (sign == 0.0) sign = s;
        if (s != sign) mixed = true;
    }
    if (mixed || numeric_hint != quad::Convergence::Converges) {
        info.hint = quad::Convergence::Unknown;
    } else {
        info.hint = quad::Convergence::Diverges;
    }
    info.singular = true;
    return info;
}

// Limit of an antiderivative atom at endpoint e, or NaN when it has none.
inline double atom_limit(const Atom& a, double e) {
    const double v = a.eval(e);
    if (std::isfinite(v)) return v;
    const Order o = std::isinf(e) ? a.order_at_infinity() : a.order_at(e);
    const bool vanishes = std::isinf(e) ? (o.power < 0.0 || (o.power == 0.0 && o.log_power < 0.0))
                                        : (o.power > 0.0 || (o.power == 0.0 && o.log_power < 0.0));
    return vanishes ? 0.0 : std::numeric_limits<double>::quiet_NaN();
}

inline double antideriv_limit(const Antiderivative& F, double e) {
    double v = 0.0;
    for (const auto& a : F.atoms) v += atom_limit(a, e);
    for (const auto& t : F.atans) v += t.eval(e);
    return v;
}

inline IntegralResult divergent(double at) {
    IntegralResult r;
    r.status = IntegralStatus::Divergent;
    r.value = kInf;
    r.divergent_at = at;
    r.method = IntegralMethod::ExponentAnalysis;
    return r;
}

inline void absorb_ladder(const quad::LadderResult& lr, double at, IntegralResult& acc, bool& divergent_flag,
                          const std::string& what) {
    if (lr.status == quad::LadderStatus::Divergent) {
        divergent_flag = true;
        acc.divergent_at = at;
        return;
    }
    if (lr.status == quad::LadderStatus::Inconclusive) {
        throw InconclusiveError("could not classify the integral near " + what + " " + fmt12(at),
                                acc.value + lr.value);
    }
    acc.value += lr.value;
    acc.error += lr.error;
}

inline IntegralResult integrate_piece(const Piece& p, double lo, double hi, const IntegrateOptions& opt) {
    const double tol = opt.tol;
    const double scale = std::isinf(hi) ? std::max(1.0, lo) : std::min(1.0, 0.5 * (hi - lo));
    const EndInfo L = classify_end(p, lo, 1.0, scale);
    const EndInfo R = classify_end(p, hi, -1.0, scale);
    if (L.hint == quad::Convergence::Diverges) return divergent(lo);
    if (R.hint == quad::Convergence::Diverges) return divergent(hi);

    const double mid_ref = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
    if (p.exact() && !opt.force_numeric && L.hint == quad::Convergence::Converges &&
        R.hint == quad::Convergence::Converges) {
        if (auto F = antiderivative(p.atoms, mid_ref)) {
            const double v = antideriv_limit(*F, hi) - antideriv_limit(*F, lo);
            if (std::isfinite(v)) {
                IntegralResult r;
                r.value = v;
                r.error = 0.0;
                r.method = IntegralMethod::ClosedForm;
                return r;
            }
        }
    }

    IntegralResult acc;
    acc.method = IntegralMethod::AdaptiveQuadrature;
    bool div = false;
    auto h = [&](double t) { return p.eval(t); };
    auto check_adaptive = [&](const quad::QuadResult& q, double a, double b) {
        if (!q.converged) {
            throw InconclusiveError("quadrature did not reach tolerance on [" + fmt12(a) + ", " + fmt12(b) + "]",
                                    acc.value + q.value);
        }
        acc.value += q.value;
        acc.error += q.error;
    };
    if (std::isinf(hi)) {
        const double x0 = lo > 0 ? std::max(2.0 * lo, lo + 1.0) : 1.0;
        if (L.singular) {
            auto g = [&](double d) { return p.eval_near(lo, 1.0, d); };
            absorb_ladder(quad::ladder_to_zero(g, x0 - lo, tol / 4, L.hint), lo, acc, div, "endpoint");
        } else {
            check_adaptive(quad::adaptive(h, lo, x0, tol / 4), lo, x0);
        }
        if (!div) absorb_ladder(quad::ladder_to_infinity(h, x0, tol / 2, R.hint), kInf, acc, div, "infinity at");
    } else if (!L.singular && !R.singular) {
        check_adaptive(quad::adaptive(h, lo, hi, tol), lo, hi);
    } else {
        const double m = 0.5 * (lo + hi);
        if (L.singular) {
            auto g = [&](double d) { return p.eval_near(lo, 1.0, d); };
            absorb_ladder(quad::ladder_to_zero(g, m - lo, tol / 2, L.hint), lo, acc, div, "endpoint");
        } else {
            check_adaptive(quad::adaptive(h, lo, m, tol / 2), lo, m);
        }
        if (!div) {
            if (R.singular) {
                auto g = [&](double d) { return p.eval_near(hi, -1.0, d); };
                absorb_ladder(quad::ladder_to_zero(g, hi - m, tol / 2, R.hint), hi, acc, div, "endpoint");
            } else {
                check_adaptive(quad::adaptive(h, m, hi, tol / 2), m, hi);
            }
        }
    }
    if (div) {
        IntegralResult r = divergent(acc.divergent_at);
        r.method = IntegralMethod::AdaptiveQuadrature;
        return r;
    }
    return acc;
}

}  // namespace integrate_detail

/// Integral of f over (a, b), 0 <= a < b <= inf.
inline IntegralResult integrate(const PiecewiseFn& f, double a, double b, IntegrateOptions opt = {}) {
    if (!(a >= 0.0) || !(a <= b)) throw DomainError("integration bounds need 0 <= a <= b");
    IntegralResult total;
    if (a == b) return total;
    std::vector<std::pair<const Piece*, std::pair<double, double>>> parts;
    for (const auto& p : f.pieces()) {
        const double lo = std::max(p.lo, a), hi = std::min(p.hi, b);
        if (lo < hi) parts.push_back({&p, {lo, hi}});
    }
    IntegrateOptions sub = opt;
    sub.tol = opt.tol / std::max<std::size_t>(1, parts.size());
    for (const auto& [p, iv] : parts) {
        const IntegralResult r = integrate_detail::integrate_piece(*p, iv.first, iv.second, sub);
        if (!r.finite()) return r;
        total.value += r.value;
        total.error += r.error;
        if (r.method != IntegralMethod::ClosedForm) total.method = r.method;
    }
    const double floor = 64.0 * kEps * std::abs(total.value);
    if (total.error > std::max(opt.tol, floor))
        throw InconclusiveError("integral error estimate above tolerance", total.value);
    return total;
}

inline IntegralResult integrate(const PiecewiseFn& f, double a, double b, double tol) {
    return integrate(f, a, b, IntegrateOptions{tol, false});
}

/// Integral of an opaque callable over (a, b); endpoints 0 and inf are
/// classified from numerically estimated local exponents.
inline IntegralResult integrate_callable(std::function<double(double)> fn, double a, double b,
                                         double tol = kDefaultTol, std::string label = "callable") {
    Piece p{a, b, {}, {std::make_shared<NumericTerm>(NumericTerm{std::move(fn), std::move(label)})}};
    IntegrateOptions opt{tol, true};
    IntegralResult r = integrate_detail::integrate_piece(p, a, b, opt);
    if (r.finite() && r.error > std::max(tol, 64.0 * kEps * std::abs(r.value)))
        throw InconclusiveError("integral error estimate above tolerance", r.value);
    return r;
}

}  // namespace hardy
