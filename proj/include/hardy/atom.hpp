#pragma once

// Atoms: coef * prod_i base_i(t)^e_i with bases
//   Lin  : p0 + p1*t                 (p1 = +-1 after normalization)
//   Quad : p0 + p1*t + p2*t^2        (p2 = +-1)
//   Log  : p0 + p1*log|t - p2|       (p1 = +-1)
// A Sum is a list of atoms. Closed-form antiderivatives exist for the
// families used throughout the library; everything else is numeric-only.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hardy/common.hpp"

namespace hardy {

enum class FactorKind { Lin = 0, Quad = 1, Log = 2 };

struct Factor {
    FactorKind kind = FactorKind::Lin;
    double p0 = 0.0, p1 = 1.0, p2 = 0.0;
    double exp = 1.0;

    double base(double t) const {
        switch (kind) {
            case FactorKind::Lin: return p0 + p1 * t;
            case FactorKind::Quad: return p0 + t * (p1 + p2 * t);
            case FactorKind::Log: return p0 + p1 * std::log(std::abs(t - p2));
        }
        return kNaN();
    }
    // Base at x0 + side*d, keeping the small increment exact when the base
    // vanishes at x0.
    double base_near(double x0, double side, double d) const {
        const double sd = side * d;
        switch (kind) {
            case FactorKind::Lin: return (p0 + p1 * x0) + p1 * sd;
            case FactorKind::Quad: return (p0 + x0 * (p1 + p2 * x0)) + (p1 + 2.0 * p2 * x0) * sd + p2 * d * d;
            case FactorKind::Log: return p0 + p1 * std::log(std::abs((x0 - p2) + sd));
        }
        return kNaN();
    }
    bool same_base(const Factor& o) const {
        return kind == o.kind && p0 == o.p0 && p1 == o.p1 && p2 == o.p2;
    }
    auto key() const { return std::make_tuple(static_cast<int>(kind), p0, p1, p2); }
    static double kNaN() { return std::numeric_limits<double>::quiet_NaN(); }
};

inline Factor lin(double p0, double p1, double e) { return {FactorKind::Lin, p0, p1, 0.0, e}; }
inline Factor quadratic(double p0, double p1, double p2, double e) { return {FactorKind::Quad, p0, p1, p2, e}; }
inline Factor loglin(double a, double b, double s, double e) { return {FactorKind::Log, a, b, s, e}; }

/// Local behaviour |x - x0|^power * |log|x - x0||^log_power (or x^power log^log_power x at infinity).
struct Order {
    double power = 0.0;
    double log_power = 0.0;
};

inline bool integrable_at_finite(Order o) {
    constexpr double eps = 1e-12;
    if (o.power > -1.0 + eps) return true;
    if (o.power < -1.0 - eps) return false;
    return o.log_power < -1.0 - eps;
}
inline bool integrable_at_infinity(Order o) {
    constexpr double eps = 1e-12;
    if (o.power < -1.0 - eps) return true;
    if (o.power > -1.0 + eps) return false;
    return o.log_power < -1.0 - eps;
}

/// Growth comparison: true when `a` is more singular than `b`
/// (at a finite point: smaller power; at infinity: larger power).
inline bool more_singular(Order a, Order b, bool at_infinity) {
    constexpr double eps = 1e-12;
    if (std::abs(a.power - b.power) > eps) return at_infinity ? a.power > b.power : a.power < b.power;
    return a.log_power > b.log_power + eps;
}
inline bool same_order(Order a, Order b) {
    return std::abs(a.power - b.power) <= 1e-12 && std::abs(a.log_power - b.log_power) <= 1e-12;
}

struct Atom {
    double coef = 0.0;
    std::vector<Factor> factors;

    double eval(double t) const {
        double v = coef;
        for (const auto& f : factors) v *= std::pow(f.base(t), f.exp);
        return v;
    }
    double eval_near(double x0, double side, double d) const {
        double v = coef;
        for (const auto& f : factors) v *= std::pow(f.base_near(x0, side, d), f.exp);
        return v;
    }
    bool is_constant() const { return factors.empty(); }

    Order order_at(double x0) const {
        Order o;
        for (const auto& f : factors) {
            if (f.kind == FactorKind::Log) {
                if (x0 == f.p2) {
                    o.log_power += f.exp;
                } else if (std::abs(f.base(x0)) <= 1e-14 * (std::abs(f.p0) + 1.0)) {
                    o.power += f.exp;
                }
                continue;
            }
            const double b = f.base(x0);
            const double scale = std::abs(f.p0) + std::abs(f.p1 * x0) + std::abs(f.p2 * x0 * x0);
            if (std::abs(b) <= 1e-14 * scale || b == 0.0) {
                int mult = 1;
                if (f.kind == FactorKind::Quad && std::abs(f.p1 + 2.0 * f.p2 * x0) <= 1e-14 * (std::abs(f.p1) + 1.0)) mult = 2;
                o.power += mult * f.exp;
            }
        }
        return o;
    }
    Order order_at_infinity() const {
        Order o;
        for (const auto& f : factors) {
            switch (f.kind) {
                case FactorKind::Lin: o.power += f.exp; break;
                case FactorKind::Quad: o.power += 2.0 * f.exp; break;
                case FactorKind::Log: o.log_power += f.exp; break;
            }
        }
        return o;
    }
};

using Sum = std::vector<Atom>;

/// Canonical form: unit leading coefficients, merged equal bases, sorted factors.
inline Atom normalize(Atom a) {
    std::vector<Factor> out;
    for (auto f : a.factors) {
        if (f.exp == 0.0) continue;
        if (f.kind == FactorKind::Quad && f.p2 == 0.0) f = lin(f.p0, f.p1, f.exp);
        double lead = f.kind == FactorKind::Quad ? f.p2 : f.p1;
        if (lead == 0.0) {
            a.coef *= std::pow(f.p0, f.exp);
            continue;
        }
        const double mag = std::abs(lead);
        if (mag != 1.0) {
            a.coef *= std::pow(mag, f.exp);
            f.p0 /= mag;
            if (f.kind == FactorKind::Quad) {
                f.p1 /= mag;
                f.p2 /= mag;
            } else {
                f.p1 /= mag;
            }
        }
        auto it = std::find_if(out.begin(), out.end(), [&](const Factor& g) { return g.same_base(f); });
        if (it != out.end()) {
            it->exp += f.exp;
        } else {
            out.push_back(f);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Factor& f) { return f.exp == 0.0; }), out.end());
    std::sort(out.begin(), out.end(), [](const Factor& x, const Factor& y) { return x.key() < y.key(); });
    a.factors = std::move(out);
    if (a.coef == 0.0) a.factors.clear();
    return a;
}

inline Atom constant_atom(double c) { return Atom{c, {}}; }
/// c * t^g
inline Atom power_atom(double c, double g) { return normalize(Atom{c, {lin(0.0, 1.0, g)}}); }
/// c * (a + b t)^alpha
inline Atom affine_atom(double c, double a, double b, double alpha) { return normalize(Atom{c, {lin(a, b, alpha)}}); }
/// t^-1 * (2 - log t)^-beta, i.e. 1/(t log^beta(e^2/t)) on (0, e^2).
inline Atom log_recip_atom(double beta, double c = 1.0) {
    return normalize(Atom{c, {lin(0.0, 1.0, -1.0), loglin(2.0, -1.0, 0.0, -beta)}});
}

inline Atom multiply(const Atom& a, const Atom& b) {
    Atom r{a.coef * b.coef, a.factors};
    r.factors.insert(r.factors.end(), b.factors.begin(), b.factors.end());
    return normalize(r);
}

/// a^r; throws DomainError when the coefficient is negative and r is not an integer.
inline Atom pow_atom(const Atom& a, double r) {
    if (a.coef < 0.0 && r != std::floor(r)) throw DomainError("negative coefficient raised to a non-integer power");
    Atom out{std::pow(a.coef, r), a.factors};
    for (auto& f : out.factors) f.exp *= r;
    return normalize(out);
}

inline Sum scale(Sum s, double c) {
    if (c == 0.0) return {};
    for (auto& a : s) a.coef *= c;
    return s;
}

/// Merges atoms with identical factor lists and drops zeros.
inline Sum simplify(const Sum& s) {
    Sum out;
    for (const auto& a0 : s) {
        Atom a = normalize(a0);
        if (a.coef == 0.0) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const Atom& b) {
            if (b.factors.size() != a.factors.size()) return false;
            for (std::size_t i = 0; i < a.factors.size(); ++i)
                if (!a.factors[i].same_base(b.factors[i]) || a.factors[i].exp != b.factors[i].exp) return false;
            return true;
        });
        if (it != out.end()) {
            it->coef += a.coef;
        } else {
            out.push_back(a);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Atom& a) { return a.coef == 0.0; }), out.end());
    return out;
}

inline Sum add(const Sum& a, const Sum& b) {
    Sum r = a;
    r.insert(r.end(), b.begin(), b.end());
    return simplify(r);
}

inline Sum multiply(const Sum& a, const Sum& b) {
    Sum r;
    for (const auto& x : a)
        for (const auto& y : b) r.push_back(multiply(x, y));
    return simplify(r);
}

inline double eval(const Sum& s, double t) {
    double v = 0.0;
    for (const auto& a : s) v += a.eval(t);
    return v;
}

/// Substitution t -> c + k t (k != 0).
inline Atom substitute(const Atom& a, double c, double k) {
    Atom r{a.coef, {}};
    for (const auto& f : a.factors) {
        switch (f.kind) {
            case FactorKind::Lin: r.factors.push_back(lin(f.p0 + f.p1 * c, f.p1 * k, f.exp)); break;
            case FactorKind::Quad:
                r.factors.push_back(quadratic(f.p0 + f.p1 * c + f.p2 * c * c, (f.p1 + 2.0 * f.p2 * c) * k, f.p2 * k * k, f.exp));
                break;
            case FactorKind::Log:
                r.factors.push_back(loglin(f.p0 + f.p1 * std::log(std::abs(k)), f.p1, (f.p2 - c) / k, f.exp));
                break;
        }
    }
    return normalize(r);
}

inline Sum substitute(const Sum& s, double c, double k) {
    Sum r;
    for (const auto& a : s) r.push_back(substitute(a, c, k));
    return simplify(r);
}

/// Exact derivative by the product rule.
inline Sum derivative(const Atom& a) {
    Sum out;
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        const Factor& f = a.factors[i];
        Atom term{a.coef * f.exp, {}};
        for (std::size_t j = 0; j < a.factors.size(); ++j)
            if (j != i) term.factors.push_back(a.factors[j]);
        Factor reduced = f;
        reduced.exp -= 1.0;
        term.factors.push_back(reduced);
        switch (f.kind) {
            case FactorKind::Lin: term.coef *= f.p1; break;
            case FactorKind::Quad: term.factors.push_back(lin(f.p1, 2.0 * f.p2, 1.0)); break;
            case FactorKind::Log:
                term.coef *= f.p1;
                term.factors.push_back(lin(-f.p2, 1.0, -1.0));
                break;
        }
        out.push_back(normalize(term));
    }
    return simplify(out);
}

inline Sum derivative(const Sum& s) {
    Sum out;
    for (const auto& a : s) {
        auto d = derivative(a);
        out.insert(out.end(), d.begin(), d.end());
    }
    return simplify(out);
}

/// coef * atan(k0 + k1 t)
struct AtanTerm {
    double coef;
    double k0, k1;
    double eval(double t) const { return coef * std::atan(k0 + k1 * t); }
};

struct Antiderivative {
    Sum atoms;
    std::vector<AtanTerm> atans;

    double eval(double t) const {
        double v = hardy::eval(atoms, t);
        for (const auto& a : atans) v += a.eval(t);
        return v;
    }
    double eval_near(double x0, double side, double d) const {
        double v = 0.0;
        for (const auto& a : atoms) v += a.eval_near(x0, side, d);
        for (const auto& a : atans) v += a.eval(x0 + side * d);
        return v;
    }
};

/// Closed-form antiderivative of a single atom on a piece containing x_ref,
/// or nullopt when the atom is outside the supported families.
inline std::optional<Antiderivative> antiderivative(const Atom& a, double x_ref) {
    Antiderivative out;
    const double c = a.coef;
    if (c == 0.0) return out;
    const auto& fs = a.factors;
    if (fs.empty()) {
        out.atoms.push_back(power_atom(c, 1.0));
        return out;
    }
    if (fs.size() == 1 && fs[0].kind == FactorKind::Lin) {
        const Factor& f = fs[0];
        if (f.exp != -1.0) {
            out.atoms.push_back(normalize(Atom{c / (f.p1 * (f.exp + 1.0)), {lin(f.p0, f.p1, f.exp + 1.0)}}));
        } else {
            out.atoms.push_back(normalize(Atom{c / f.p1, {loglin(0.0, 1.0, -f.p0 / f.p1 + 0.0, 1.0)}}));
        }
        return out;
    }
    if (fs.size() == 1 && fs[0].kind == FactorKind::Quad && fs[0].exp == -1.0) {
        const Factor& f = fs[0];
        const double disc = 4.0 * f.p0 * f.p2 - f.p1 * f.p1;
        if (disc > 0.0 && f.p2 > 0.0) {
            const double r = std::sqrt(disc);
            out.atans.push_back({2.0 * c / r, f.p1 / r, 2.0 * f.p2 / r});
            return out;
        }
        return std::nullopt;
    }
    // u^gamma * (A + B log u)^delta with u = sigma (t - s).
    const Factor* lf = nullptr;
    const Factor* gf = nullptr;
    for (const auto& f : fs) {
        if (f.kind == FactorKind::Log && !lf) {
            lf = &f;
        } else if (f.kind == FactorKind::Lin && !gf) {
            gf = &f;
        } else {
            return std::nullopt;
        }
    }
    if (!lf) return std::nullopt;
    const double s = lf->p2;
    const double sigma = x_ref >= s ? 1.0 : -1.0;
    double gamma = 0.0;
    if (gf) {
        // Lin base must equal sigma (t - s).
        if (gf->p1 != sigma || gf->p0 != -sigma * s) return std::nullopt;
        gamma = gf->exp;
    }
    const double A = lf->p0, B = lf->p1, delta = lf->exp;
    const Factor u_base = lin(-sigma * s, sigma, 1.0);
    if (gamma == -1.0) {
        if (delta == -1.0) return std::nullopt;
        out.atoms.push_back(normalize(Atom{c / (sigma * B * (delta + 1.0)), {loglin(A, B, s, delta + 1.0)}}));
        return out;
    }
    if (delta == 1.0) {
        Factor up = u_base;
        up.exp = gamma + 1.0;
        const double g1 = gamma + 1.0;
        out.atoms.push_back(normalize(Atom{c / (sigma * g1), {up, loglin(A, B, s, 1.0)}}));
        out.atoms.push_back(normalize(Atom{-c * B / (sigma * g1 * g1), {up}}));
        return out;
    }
    return std::nullopt;
}

inline std::optional<Antiderivative> antiderivative(const Sum& s, double x_ref) {
    Antiderivative out;
    for (const auto& a : s) {
        auto r = antiderivative(a, x_ref);
        if (!r) return std::nullopt;
        out.atoms.insert(out.atoms.end(), r->atoms.begin(), r->atoms.end());
        out.atans.insert(out.atans.end(), r->atans.begin(), r->atans.end());
    }
    out.atoms = simplify(out.atoms);
    return out;
}

/// Expression text accepted back by the parser.
inline std::string to_string(const Atom& a) {
    std::string s;
    const bool unit = std::abs(a.coef) == 1.0 && !a.factors.empty();
    if (!unit) s = fmt_exact(a.coef);
    bool first = true;
    for (const auto& f : a.factors) {
        if (!s.empty() || !first) s += "*";
        if (first && unit && a.coef < 0) s = "-";
        first = false;
        const std::string e = "^(" + fmt_exact(f.exp) + ")";
        switch (f.kind) {
            case FactorKind::Lin:
                if (f.p0 == 0.0 && f.p1 == 1.0) {
                    s += f.exp == 1.0 ? std::string("t") : "t" + e;
                } else {
                    s += "(" + fmt_exact(f.p0) + (f.p1 > 0 ? "+t)" : "-t)") + e;
                }
                break;
            case FactorKind::Quad:
                s += "(" + fmt_exact(f.p0);
                if (f.p1 != 0.0) s += (f.p1 > 0 ? "+" : "-") + fmt_exact(std::abs(f.p1)) + "*t";
                s += std::string(f.p2 > 0 ? "+" : "-") + "t^2)" + e;
                break;
            case FactorKind::Log: {
                std::string arg = "t";
                if (f.p2 > 0) arg = "t-" + fmt_exact(f.p2);
                if (f.p2 < 0) arg = "t+" + fmt_exact(-f.p2);
                s += "(" + fmt_exact(f.p0) + (f.p1 > 0 ? "+" : "-") + "log(" + arg + "))" + e;
                break;
            }
        }
    }
    return s;
}

inline std::string to_string(const Sum& s) {
    if (s.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i && s[i].coef < 0) {
            Atom pos = s[i];
            pos.coef = -pos.coef;
            out += " - " + to_string(pos);
            continue;
        }
        if (i) out += " + ";
        out += to_string(s[i]);
    }
    return out;
}

}  // namespace hardy
