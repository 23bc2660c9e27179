#pragma once

// Counterexample functions: f_alpha, the L^1 + L^inf pair, the L^{p,q}
// witness, and the staircase construction of g in [S,X] outside L^1 + L^inf.

#include <string>
#include <vector>

#include "hardy/spaces.hpp"

namespace hardy {

struct FAlpha {
    PiecewiseFn f;   // (1-t)^alpha on (0,1)
    PiecewiseFn Sf;  // closed form
};

inline FAlpha f_alpha(double alpha) {
    if (!(alpha > -1.0 && alpha < 0.0)) throw DomainError("alpha must lie in (-1, 0)");
    FAlpha r;
    r.f = PiecewiseFn::single(0.0, 1.0, {affine_atom(1.0, 1.0, -1.0, alpha)});
    const double k = 1.0 / (alpha + 1.0);
    // Sf = (1 - (1-t)^(alpha+1)) / ((alpha+1) t) on (0,1), 1/((alpha+1) t) after.
    Sum inner = multiply(Sum{power_atom(k, -1.0)}, Sum{constant_atom(1.0), affine_atom(-1.0, 1.0, -1.0, alpha + 1.0)});
    r.Sf = PiecewiseFn({Piece{0.0, 1.0, simplify(inner), {}}, Piece{1.0, kInf, {power_atom(k, -1.0)}, {}}});
    return r;
}

struct L1LinfPair {
    PiecewiseFn g;  // t^-1 (2 - log t)^-2 on (0,1)
    PiecewiseFn f;  // g(t - 1) on (1,2)
};

inline L1LinfPair l1linf_pair() {
    L1LinfPair r;
    r.g = PiecewiseFn::single(0.0, 1.0, {log_recip_atom(2.0)});
    r.f = r.g.substituted(-1.0, 1.0);
    return r;
}

/// t^(-1/p) (p + |log t|)^-1: decreasing, in L^{p,q} for q > 1, outside L^{p,1}.
inline PiecewiseFn lpq_witness(double p, double q) {
    if (!(p > 1.0) || std::isinf(p)) throw DomainError("p must lie in (1, inf)");
    if (!(q > 1.0)) throw DomainError("q must exceed 1");
    const Factor t_pow = lin(0.0, 1.0, -1.0 / p);
    return PiecewiseFn({Piece{0.0, 1.0, {normalize(Atom{1.0, {t_pow, loglin(p, -1.0, 0.0, -1.0)}})}, {}},
                        Piece{1.0, kInf, {normalize(Atom{1.0, {t_pow, loglin(p, 1.0, 0.0, -1.0)}})}, {}}});
}

/// Breakpoints above this are kept only in window-local coordinates.
inline constexpr double kRepresentableLimit = 1e12;

struct NoesriArtifacts {
    PiecewiseFn f1, f2, f;
    PiecewiseFn F;  // int_0^t f, numeric, valid while t fits in a double
    std::vector<long double> t;  // t_1 = 1, F(t_{k+1}) = 2 F(t_k)
    std::vector<long double> Ft;  // F(t_k)
    double t2 = 0.0;
    double D = 0.0;         // F(1)
    double bridge_c = 0.0;  // h'(x) = bridge_c (t2 - x)^(-1/2)
    std::vector<long double> slope;  // slope of G on the linear part of window k (0 when degenerate)
    PiecewiseFn h;  // on (1, t2)
    PiecewiseFn G, g;  // truncated at `truncation`
    double truncation = 0.0;
    int represented_windows = 0;
    std::function<long double(long double)> F_eval;
    std::function<long double(long double, long double)> F_inc;  // F(t0 + d) - F(t0)

    int windows() const { return static_cast<int>(t.size()) - 1; }
    double bridge_length() const { return t2 - 1.0; }
    /// Length of the linear part of window k (1-based).
    long double linear_length(int k) const { return t[k] - t[k - 1] - static_cast<long double>(t2 - 1.0); }

    double h_eval(double x) const { return static_cast<double>(Ft[1]) - D * std::sqrt((t2 - x) / (t2 - 1.0)); }

    /// G and F at t = t_k + s on the linear part of window k.
    std::pair<long double, long double> linear_point(int k, long double s) const {
        return {Ft[k - 1] + slope[k - 1] * s, Ft[k - 1] + F_inc(t[k - 1], s)};
    }
    /// G and F at t = t_{k+1} - (t2 - x) on the bridge of window k, 1 < x < t2.
    std::pair<long double, long double> bridge_point(int k, double x) const {
        const long double d = t2 - x;
        const long double G = Ft[k] - D * std::sqrt(static_cast<double>(d) / (t2 - 1.0));
        return {G, Ft[k] - F_inc(t[k] - d, d)};
    }

    /// int of h' over {h' > c} (the same in every window).
    double bridge_level_integral(double c) const {
        const double ell = std::min(t2 - 1.0, std::pow(bridge_c / c, 2.0));
        return D * std::sqrt(ell / (t2 - 1.0));
    }
    /// int over window k of g chi_{g > c}.
    long double window_level_integral(int k, double c) const {
        long double v = bridge_level_integral(c);
        if (slope[k - 1] > c) v += Ft[k] - D - Ft[k - 1];  // whole linear rise
        return v;
    }
    /// Partial sums over windows 1..k of int g chi_{g > c}, k = 1..windows().
    std::vector<double> truncation_series(double c) const {
        std::vector<double> s;
        long double acc = 0.0L;
        for (int k = 1; k <= windows(); ++k) s.push_back(static_cast<double>(acc += window_level_integral(k, c)));
        return s;
    }
    /// Lower bounds of int_0^1 g* from the bridges of windows 1..k: the
    /// bridges alone give lambda(s) >= k a / s^2 with a = bridge_c^2.
    std::vector<double> norm_lower_series() const {
        std::vector<double> s;
        const double a = bridge_c * bridge_c;
        for (int k = 1; k <= windows(); ++k) s.push_back(2.0 * std::sqrt(k * a));
        return s;
    }
};

namespace construct_detail {

struct Primitive {
    std::function<long double(long double)> F;
    std::function<long double(long double, long double)> inc;
};

// F = c log(1+t) + atan t when f1 = c (1+t)^-1; otherwise from the atom
// antiderivative or quadrature in double.
inline Primitive primitive(const PiecewiseFn& f1, const PiecewiseFn& f) {
    const auto& ps = f1.pieces();
    if (ps.size() == 1 && ps[0].lo == 0.0 && std::isinf(ps[0].hi) && ps[0].exact() && ps[0].atoms.size() == 1) {
        const Atom& a = ps[0].atoms[0];
        if (a.factors.size() == 1 && a.factors[0].kind == FactorKind::Lin && a.factors[0].p0 == 1.0 &&
            a.factors[0].p1 == 1.0 && a.factors[0].exp == -1.0 && a.coef > 0) {
            const long double c = a.coef;
            return {[c](long double t) { return c * std::log1p(t) + std::atan(t); },
                    [c](long double t0, long double d) {
                        return c * std::log1p(d / (1.0L + t0)) + std::atan(d / (1.0L + t0 * (t0 + d)));
                    }};
        }
    }
    auto F = [f](long double t) -> long double {
        const auto r = integrate(f, 0.0, static_cast<double>(t), 1e-13);
        if (!r.finite()) throw DomainError("f is not locally integrable");
        return r.value;
    };
    return {F, [F](long double t0, long double d) { return F(t0 + d) - F(t0); }};
}

}  // namespace construct_detail

/// Builds g with G = int g between F/2 and F, so Sg <= Sf in X, while
/// every truncation g chi_{g > c} has infinite integral.
inline NoesriArtifacts noesri_construct(const SpaceDescriptor& X, const PiecewiseFn& f1, int K = 10) {
    using T = SpaceDescriptor::Tag;
    if (K < 3) throw DomainError("K must be at least 3");
    if (X.tag == T::L1 || X.tag == T::L1weak || X.tag == T::L1plusLinf || X.tag == T::L1capLinf)
        throw DomainError("S is not bounded on " + X.to_string());
    // f1: positive, decreasing, outside L^1, inside X.
    double prev = kInf;
    for (double x : log_grid(1e-6, 1e6, 61)) {
        const double v = f1.eval(x);
        if (!(v > 0) || v > prev * (1.0 + 1e-12)) throw DomainError("f1 must be positive and decreasing");
        prev = v;
    }
    if (integrate(f1, 0.0, kInf).finite()) throw DomainError("f1 must lie outside L^1");
    if (member(X, f1).status != Membership::In) throw DomainError("f1 must lie in " + X.to_string());

    NoesriArtifacts a;
    a.f1 = f1;
    a.f2 = PiecewiseFn::single(0.0, kInf, {normalize(Atom{1.0, {quadratic(1.0, 0.0, 1.0, -1.0)}})});
    a.f = f1.plus(a.f2);
    const auto prim = construct_detail::primitive(f1, a.f);
    a.F_eval = prim.F;
    a.F_inc = prim.inc;
    {
        auto Fe = prim.F;
        a.F = PiecewiseFn({Piece{0.0, kInf, {}, {std::make_shared<NumericTerm>(NumericTerm{
                                                     [Fe](double x) { return static_cast<double>(Fe(x)); }, "F"})}}});
    }
    // Breakpoints from F(t_{k+1}) = 2 F(t_k), solved in u = log t.
    a.t.push_back(1.0L);
    a.Ft.push_back(prim.F(1.0L));
    a.D = static_cast<double>(a.Ft[0]);
    for (int k = 1; k < K; ++k) {
        const long double target = 2.0L * a.Ft.back();
        auto phi = [&](double u) { return static_cast<double>(prim.F(std::exp(static_cast<long double>(u))) - target); };
        double lo = std::log(static_cast<double>(a.t.back())), hi = lo + 1.0;
        while (phi(hi) < 0) {
            hi = lo + 2.0 * (hi - lo);
            if (hi > 11000.0) throw DomainError("breakpoint beyond the long double range");
        }
        const double u = quad::find_root(phi, lo, hi, 1e-13 * std::max(1.0, std::abs(hi)));
        a.t.push_back(std::exp(static_cast<long double>(u)));
        a.Ft.push_back(prim.F(a.t.back()));
    }
    a.t2 = static_cast<double>(a.t[1]);
    a.bridge_c = a.D / (2.0 * std::sqrt(a.t2 - 1.0));
    const double root = std::sqrt(a.t2 - 1.0);
    a.h = PiecewiseFn::single(1.0, a.t2, {constant_atom(2.0 * a.D), affine_atom(-a.D / root, a.t2, -1.0, 0.5)});

    // Window k = [t_k, t_{k+1}): linear from (t_k, F(t_k)) to (t_{k+1} - t2 + 1, F(t_{k+1}) - F(1)),
    // then the bridge translated to end at t_{k+1}.
    for (int k = 1; k <= a.windows(); ++k) {
        const long double len = a.linear_length(k);
        a.slope.push_back(len > 0 ? (a.Ft[k] - a.D - a.Ft[k - 1]) / len : 0.0L);
    }
    std::vector<Piece> Gp, gp;
    {
        auto Fe = prim.F;
        Gp.push_back(Piece{0.0, 1.0, {}, {std::make_shared<NumericTerm>(NumericTerm{
                                             [Fe](double x) { return static_cast<double>(Fe(x)); }, "F"})}});
        for (const auto& p : a.f.pieces())
            if (p.lo < 1.0) gp.push_back(Piece{p.lo, std::min(p.hi, 1.0), p.atoms, p.numeric});
    }
    a.truncation = 1.0;
    for (int k = 1; k <= a.windows(); ++k) {
        const double tk = static_cast<double>(a.t[k - 1]), tn = static_cast<double>(a.t[k]);
        if (!(tn <= kRepresentableLimit)) break;
        const double join = tn - (a.t2 - 1.0);
        if (join > tk) {
            const double m = static_cast<double>(a.slope[k - 1]);
            Gp.push_back(Piece{tk, join, {constant_atom(static_cast<double>(a.Ft[k - 1]) - m * tk), power_atom(m, 1.0)}, {}});
            gp.push_back(Piece{tk, join, {constant_atom(m)}, {}});
        }
        const double lo = std::max(join, tk);
        Gp.push_back(Piece{lo, tn, {constant_atom(static_cast<double>(a.Ft[k])), affine_atom(-a.D / root, tn, -1.0, 0.5)}, {}});
        gp.push_back(Piece{lo, tn, {affine_atom(a.bridge_c, tn, -1.0, -0.5)}, {}});
        a.truncation = tn;
        a.represented_windows = k;
    }
    a.G = PiecewiseFn(std::move(Gp));
    a.g = PiecewiseFn(std::move(gp));
    return a;
}

}  // namespace hardy
