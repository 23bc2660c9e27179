#pragma once

// theta_phi conditions on a log grid, phi_{Lambda_phi}, the Gamma_{Lambda_phi}
// norm and the weighted-L^1 identification of [S, Lambda_phi].

#include <string>
#include <vector>

#include "hardy/spaces.hpp"

namespace hardy {

inline constexpr double kGridLo = 1e-6;
inline constexpr double kGridHi = 1e6;
inline constexpr int kGridPoints = 201;

enum class Condition { Holds, Fails, Inconclusive };

inline const char* to_string(Condition c) {
    switch (c) {
        case Condition::Holds: return "holds";
        case Condition::Fails: return "fails";
        case Condition::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct ConditionReport {
    Condition holds = Condition::Inconclusive;
    double best_constant = kInf;  // sup of the ratio over the grid
    double witness = 0.0;         // grid point of the sup
    double identity_residual = 0.0;
    std::string detail;
};

namespace lorentz_detail {

// Classifies sup ratio(t) over the grid. A ratio still increasing over the
// last decade at either end fails when its increments do not shrink, and is
// inconclusive when they do.
inline ConditionReport grid_sup(const std::vector<double>& grid, const std::vector<double>& ratio) {
    ConditionReport r;
    r.best_constant = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::isnan(ratio[i])) {
            r.holds = Condition::Inconclusive;
            r.witness = grid[i];
            r.detail = "ratio undefined at " + fmt12(grid[i]);
            return r;
        }
        if (ratio[i] > r.best_constant || i == 0) {
            r.best_constant = ratio[i];
            r.witness = grid[i];
        }
    }
    if (std::isinf(r.best_constant)) {
        r.holds = Condition::Fails;
        r.detail = "ratio infinite at " + fmt12(r.witness);
        return r;
    }
    const double decade = std::log10(grid.back() / grid.front()) / static_cast<double>(grid.size() - 1);
    const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(1.0 / decade)));
    auto tail = [&](bool left) -> Condition {
        std::vector<double> v;
        for (std::size_t k = 0; k <= n && k < grid.size(); ++k) v.push_back(ratio[left ? k : grid.size() - 1 - k]);
        std::reverse(v.begin(), v.end());  // v now runs toward the end of the grid
        const double scale = std::max(std::abs(v.back()), 1e-300);
        bool increasing = false;
        for (std::size_t k = 1; k < v.size(); ++k)
            if (v[k] > v[k - 1] + 1e-9 * scale) increasing = true;
        if (!increasing) return Condition::Holds;
        const double first = v[1] - v[0], last = v.back() - v[v.size() - 2];
        return last >= 0.5 * first && last > 1e-9 * scale ? Condition::Fails : Condition::Inconclusive;
    };
    const Condition lt = tail(true), rt = tail(false);
    if (lt == Condition::Fails || rt == Condition::Fails) {
        r.holds = Condition::Fails;
        r.witness = lt == Condition::Fails ? grid.front() : grid.back();
        r.detail = std::string("ratio keeps growing toward t = ") + fmt12(r.witness);
    } else if (lt == Condition::Inconclusive || rt == Condition::Inconclusive) {
        r.holds = Condition::Inconclusive;
        r.detail = "ratio still increasing at the grid boundary";
    } else {
        r.holds = Condition::Holds;
        r.detail = "bounded on the grid with non-increasing tails";
    }
    return r;
}

inline void require_finite_theta(const ConcavePhi& phi) {
    if (std::isinf(phi.theta(1.0))) throw DomainError("theta_phi is infinite for phi = " + phi.name());
}

}  // namespace lorentz_detail

inline std::vector<double> default_grid(int n = kGridPoints) { return log_grid(kGridLo, kGridHi, n); }

/// int_0^t theta_phi.
inline double theta_integral(const ConcavePhi& phi, double t) {
    if (phi.kind() == ConcavePhi::Kind::Custom) {
        return integrate_callable([&](double y) { return phi.theta(y); }, 0.0, t, 1e-10, "theta").extended();
    }
    return integrate(phi.theta_fn(), 0.0, t, 1e-12).extended();
}

/// theta_phi(y) < inf on the grid, plus the identity
/// int_0^t theta = phi(t) - phi(0+) + t theta(t) at every grid point.
inline ConditionReport check_thetaX(const ConcavePhi& phi, int grid_points = kGridPoints) {
    ConditionReport r;
    const auto grid = default_grid(grid_points);
    try {
        r.best_constant = 0.0;
        for (double y : grid) {
            const double th = phi.theta(y);
            if (std::isinf(th)) {
                r.holds = Condition::Fails;
                r.best_constant = kInf;
                r.witness = y;
                r.detail = "theta diverges at y = " + fmt12(y);
                return r;
            }
            if (th > r.best_constant) {
                r.best_constant = th;
                r.witness = y;
            }
        }
        for (double t : grid) {
            const double lhs = theta_integral(phi, t);
            const double rhs = phi.base(t) + t * phi.theta(t);
            const double res = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
            r.identity_residual = std::max(r.identity_residual, res);
        }
    } catch (const InconclusiveError& e) {
        r.holds = Condition::Inconclusive;
        r.detail = e.what();
        return r;
    }
    r.holds = Condition::Holds;
    r.detail = "theta finite on the grid; identity residual " + fmt12(r.identity_residual);
    return r;
}

/// sup t theta(t) / phi(t).
inline ConditionReport check_phi_constant(const ConcavePhi& phi, int grid_points = kGridPoints) {
    lorentz_detail::require_finite_theta(phi);
    const auto grid = default_grid(grid_points);
    std::vector<double> ratio;
    try {
        for (double t : grid) ratio.push_back(t * phi.theta(t) / phi(t));
    } catch (const InconclusiveError& e) {
        return {Condition::Inconclusive, kInf, 0.0, 0.0, e.what()};
    }
    return lorentz_detail::grid_sup(grid, ratio);
}

/// sup (phi(t)/t) / theta(t).
inline ConditionReport check_theta_condition(const ConcavePhi& phi, int grid_points = kGridPoints) {
    lorentz_detail::require_finite_theta(phi);
    const auto grid = default_grid(grid_points);
    std::vector<double> ratio;
    try {
        for (double t : grid) {
            const double th = phi.theta(t);
            ratio.push_back(th > 0 ? phi(t) / t / th : kInf);
        }
    } catch (const InconclusiveError& e) {
        return {Condition::Inconclusive, kInf, 0.0, 0.0, e.what()};
    }
    return lorentz_detail::grid_sup(grid, ratio);
}

/// phi_{Lambda_phi}(y) = int_0^inf phi'(s) / (y + s) ds by quadrature.
inline double phi_lambda(const ConcavePhi& phi, double y, double tol = 1e-11) {
    if (!(y > 0)) throw DomainError("phi_lambda needs y > 0");
    if (phi.jump() != 0.0) throw DomainError("phi_lambda needs phi(0+) = 0");
    const PiecewiseFn w = phi.derivative_fn().times(Sum{affine_atom(1.0, y, 1.0, -1.0)});
    // Relative tolerance: theta(y) + phi(y)/y lies within a factor 2 of the value.
    const double scale = std::max(1.0, phi.theta(y) + phi(y) / y);
    return integrate(w, 0.0, kInf, IntegrateOptions{tol * (std::isfinite(scale) ? scale : 1.0), true}).extended();
}

/// phi_{Lambda_phi} as a function: closed form for the presets, quadrature otherwise.
inline PiecewiseFn phi_lambda_fn(const ConcavePhi& phi) {
    if (phi.jump() != 0.0) throw DomainError("phi_lambda needs phi(0+) = 0");
    switch (phi.kind()) {
        case ConcavePhi::Kind::Power: {
            const double r = phi.exponent();
            if (r >= 1.0) throw DomainError("phi_lambda is infinite for phi(t) = t");
            return PiecewiseFn::single(0.0, kInf, {power_atom(r * kPi / std::sin(kPi * r), r - 1.0)});
        }
        case ConcavePhi::Kind::Min1t: {
            // log(1 + 1/y) = log(1 + y) - log(y)
            const Atom a = normalize(Atom{1.0, {loglin(0.0, 1.0, -1.0, 1.0)}});
            const Atom b = normalize(Atom{-1.0, {loglin(0.0, 1.0, 0.0, 1.0)}});
            return PiecewiseFn::single(0.0, kInf, {a, b});
        }
        case ConcavePhi::Kind::Custom: {
            auto self = std::make_shared<const ConcavePhi>(phi);
            return PiecewiseFn({Piece{0.0, kInf, {}, {std::make_shared<NumericTerm>(NumericTerm{
                                                         [self](double y) { return phi_lambda(*self, y, 1e-10); },
                                                         "phi_lambda"})}}});
        }
    }
    return {};
}

/// phi(0+) ||f||_inf + int_0^inf f* theta_phi.
inline double gamma_lambda_norm(const ConcavePhi& phi, const PiecewiseFn& f, double tol = 1e-9) {
    if (f.is_zero()) return 0.0;
    const RearrangedFn r = rearrangement(f);
    const double top = r.dist.sup();
    double head = 0.0;
    if (phi.jump() > 0) {
        if (std::isinf(top)) return kInf;
        head = phi.jump() * top;
    }
    if (std::isinf(phi.theta(1.0))) return kInf;
    if (r.exact && phi.kind() != ConcavePhi::Kind::Custom) {
        return head + integrate(r.fn.times(phi.theta_fn()), 0.0, kInf, tol).extended();
    }
    // Layer cake with int_0^u theta = phi(u) - phi(0+) + u theta(u).
    const auto nv = spaces_detail::layer_cake(
        r.dist, [&](double, double lam) { return std::isinf(lam) ? kInf : phi.base(lam) + lam * phi.theta(lam); },
        tol);
    return head + nv.value;
}

struct DomainSandwich {
    double weighted_l1 = 0.0;  // int |f| theta_phi
    double domain_norm = 0.0;  // ||S|f|||_{Lambda_phi}
    double upper = 0.0;        // int |f| phi_{Lambda_phi}
    bool ordered(double slack = 1e-9) const {
        const double s = slack * std::max(1.0, std::abs(domain_norm));
        return weighted_l1 <= domain_norm + s && domain_norm <= upper + s;
    }
};

struct DomainIdentification {
    Condition status = Condition::Inconclusive;  // Holds: [S, Lambda_phi] = L^1(theta_phi dt)
    ConditionReport theta_condition;
    PiecewiseFn weight;  // theta_phi
    std::string description;
};

inline DomainIdentification identify_domain(const ConcavePhi& phi) {
    if (phi.jump() != 0.0) throw DomainError("domain identification needs phi(0+) = 0");
    const ConditionReport tx = check_thetaX(phi);
    DomainIdentification d;
    if (tx.holds != Condition::Holds) {
        d.status = tx.holds;
        d.description = "theta_phi not finite on the grid: " + tx.detail;
        return d;
    }
    d.theta_condition = check_theta_condition(phi);
    d.status = d.theta_condition.holds;
    d.weight = phi.theta_fn();
    switch (d.status) {
        case Condition::Holds:
            d.description = "[S,Lambda:" + phi.name() + "] = L1(w dt) with w = " + d.weight.to_string();
            break;
        case Condition::Fails: d.description = "identification withheld: " + d.theta_condition.detail; break;
        case Condition::Inconclusive: d.description = "identification withheld: condition inconclusive"; break;
    }
    return d;
}

/// int |f| theta <= ||S|f|||_{Lambda_phi} <= int |f| phi_{Lambda_phi}.
inline DomainSandwich domain_sandwich(const ConcavePhi& phi, const PiecewiseFn& f, double tol = 1e-9) {
    DomainSandwich s;
    const PiecewiseFn af = f.abs();
    s.weighted_l1 = integrate(af.times(phi.theta_fn()), 0.0, kInf, tol).extended();
    s.domain_norm = norm(SpaceDescriptor::lambda(phi), hardy_transform(af), tol);
    s.upper = integrate(af.times(phi_lambda_fn(phi)), 0.0, kInf, tol).extended();
    return s;
}

}  // namespace hardy
