#pragma once

// Functions on (0, inf) given by finitely many disjoint pieces [lo, hi), each
// a Sum of atoms plus optional numeric terms. Zero off the pieces.

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hardy/atom.hpp"
#include "hardy/quadrature.hpp"

namespace hardy {

/// Opaque callable term used when a result leaves the atom families.
struct NumericTerm {
    std::function<double(double)> fn;
    std::string label = "numeric";
};

struct Piece {
    double lo = 0.0;
    double hi = kInf;
    Sum atoms;
    std::vector<std::shared_ptr<const NumericTerm>> numeric;

    bool exact() const { return numeric.empty(); }
    double eval(double t) const {
        double v = hardy::eval(atoms, t);
        for (const auto& n : numeric) v += n->fn(t);
        return v;
    }
    double eval_near(double x0, double side, double d) const {
        double v = 0.0;
        for (const auto& a : atoms) v += a.eval_near(x0, side, d);
        for (const auto& n : numeric) v += n->fn(x0 + side * d);
        return v;
    }
    bool is_zero() const { return atoms.empty() && numeric.empty(); }
    bool is_constant() const {
        return numeric.empty() && std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.is_constant(); });
    }
    double constant_value() const {
        double v = 0.0;
        for (const auto& a : atoms) v += a.coef;
        return v;
    }
};

/// Interior sample points of (lo, hi), clustered toward both ends.
inline std::vector<double> sample_points(double lo, double hi, int n_uniform = 64) {
    std::vector<double> xs;
    if (std::isinf(hi)) {
        const double base = lo > 0 ? lo : 1.0;
        for (int k = -40; k <= 0 && lo == 0.0; ++k) xs.push_back(std::ldexp(1.0, k));
        for (int k = 1; k <= 52; ++k) xs.push_back(lo + base * std::ldexp(1.0, -k));
        for (int k = 0; k <= 100; ++k) xs.push_back(lo + base * std::pow(2.0, k * 0.5));
    } else {
        const double w = hi - lo;
        for (int k = 1; k < n_uniform; ++k) xs.push_back(lo + w * k / n_uniform);
        for (int k = 6; k <= 60; k += 2) {
            const double d = std::ldexp(w, -k);
            xs.push_back(lo + d);
            xs.push_back(hi - d);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](double x) { return !(x > lo && x < hi); }), xs.end());
    return xs;
}

class PiecewiseFn {
public:
    PiecewiseFn() = default;
    explicit PiecewiseFn(std::vector<Piece> pieces) { assign(std::move(pieces)); }

    static PiecewiseFn indicator(double a, double b, double c = 1.0) {
        return PiecewiseFn({Piece{a, b, {constant_atom(c)}, {}}});
    }
    static PiecewiseFn single(double a, double b, Sum atoms) { return PiecewiseFn({Piece{a, b, std::move(atoms), {}}}); }

    const std::vector<Piece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }
    bool exact() const {
        return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.exact(); });
    }
    double support_end() const { return pieces_.empty() ? 0.0 : pieces_.back().hi; }

    /// Index of the piece containing x (right-continuous), or -1.
    int locate(double x) const {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x, [](double v, const Piece& p) { return v < p.lo; });
        if (it == pieces_.begin()) return -1;
        --it;
        if (x >= it->lo && x < it->hi) return static_cast<int>(it - pieces_.begin());
        return -1;
    }

    double eval(double x) const {
        if (!(x > 0.0)) throw DomainError("evaluation point must be positive, got " + fmt12(x));
        const int i = locate(x);
        return i < 0 ? 0.0 : pieces_[i].eval(x);
    }
    double operator()(double x) const { return eval(x); }

    PiecewiseFn plus(const PiecewiseFn& o) const {
        std::vector<Piece> all = pieces_;
        all.insert(all.end(), o.pieces_.begin(), o.pieces_.end());
        return PiecewiseFn(std::move(all));
    }
    PiecewiseFn scaled(double c) const {
        if (c == 0.0) return {};
        std::vector<Piece> ps = pieces_;
        for (auto& p : ps) {
            p.atoms = scale(p.atoms, c);
            if (!p.numeric.empty()) {
                auto old = p.numeric;
                p.numeric = {std::make_shared<NumericTerm>(NumericTerm{
                    [old, c](double t) {
                        double v = 0.0;
                        for (const auto& n : old) v += n->fn(t);
                        return c * v;
                    },
                    "scaled"})};
            }
        }
        return PiecewiseFn(std::move(ps));
    }
    /// Pointwise product with an atom sum w defined on all of (0, inf).
    PiecewiseFn times(const Sum& w) const {
        std::vector<Piece> ps = pieces_;
        for (auto& p : ps) {
            p.atoms = multiply(p.atoms, w);
            if (!p.numeric.empty()) {
                auto old = p.numeric;
                p.numeric = {std::make_shared<NumericTerm>(NumericTerm{
                    [old, w](double t) {
                        double v = 0.0;
                        for (const auto& n : old) v += n->fn(t);
                        return v * hardy::eval(w, t);
                    },
                    "product"})};
            }
        }
        return PiecewiseFn(std::move(ps));
    }
    /// Pointwise product of two piecewise functions.
    PiecewiseFn times(const PiecewiseFn& o) const {
        std::vector<Piece> out;
        for (const auto& p : pieces_) {
            for (const auto& q : o.pieces_) {
                const double lo = std::max(p.lo, q.lo), hi = std::min(p.hi, q.hi);
                if (!(lo < hi)) continue;
                Piece r{lo, hi, {}, {}};
                if (p.exact() && q.exact()) {
                    r.atoms = multiply(p.atoms, q.atoms);
                } else {
                    r.numeric.push_back(std::make_shared<NumericTerm>(
                        NumericTerm{[p, q](double t) { return p.eval(t) * q.eval(t); }, "product"}));
                }
                out.push_back(std::move(r));
            }
        }
        return PiecewiseFn(std::move(out));
    }
    /// x -> f(c + k x) for k > 0 (dilation/translation), restricted to x > 0.
    PiecewiseFn substituted(double c, double k) const {
        std::vector<Piece> ps;
        for (const auto& p : pieces_) {
            double lo = (p.lo - c) / k, hi = std::isinf(p.hi) ? kInf : (p.hi - c) / k;
            lo = std::max(lo, 0.0);
            if (!(lo < hi)) continue;
            Piece r{lo, hi, substitute(p.atoms, c, k), {}};
            if (!p.numeric.empty()) {
                auto old = p.numeric;
                r.numeric.push_back(std::make_shared<NumericTerm>(NumericTerm{
                    [old, c, k](double t) {
                        double v = 0.0;
                        for (const auto& n : old) v += n->fn(c + k * t);
                        return v;
                    },
                    "substituted"}));
            }
            ps.push_back(std::move(r));
        }
        return PiecewiseFn(std::move(ps));
    }
    /// |f|^p, symbolic where each piece keeps a constant sign.
    PiecewiseFn abs_pow(double p) const;
    PiecewiseFn abs() const { return abs_pow(1.0); }

    PiecewiseFn derivative() const {
        std::vector<Piece> ps;
        for (const auto& p : pieces_) {
            if (!p.exact()) throw DomainError("derivative of a numeric piece is not available");
            ps.push_back(Piece{p.lo, p.hi, hardy::derivative(p.atoms), {}});
        }
        return PiecewiseFn(std::move(ps));
    }

    std::string to_string() const {
        if (pieces_.empty()) return "0";
        std::string out;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& p = pieces_[i];
            if (i) out += " + ";
            std::string body = p.atoms.empty() ? std::string() : hardy::to_string(p.atoms);
            for (const auto& n : p.numeric) body += (p.atoms.empty() ? "<" : " + <") + n->label + ">";
            out += body + " on (" + fmt_exact(p.lo) + "," + fmt_exact(p.hi) + ")";
        }
        return out;
    }

private:
    void assign(std::vector<Piece> in) {
        // Overlapping pieces are summed on a common refinement.
        std::set<double> cuts;
        for (const auto& p : in) {
            if (!(p.lo < p.hi) || p.lo < 0.0) throw DomainError("piece needs 0 <= lo < hi");
            cuts.insert(p.lo);
            cuts.insert(p.hi);
        }
        std::vector<double> c(cuts.begin(), cuts.end());
        std::vector<Piece> out;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            Piece r{c[i], c[i + 1], {}, {}};
            int covering = 0;
            const Piece* only = nullptr;
            for (const auto& p : in) {
                if (p.lo <= c[i] && p.hi >= c[i + 1]) {
                    ++covering;
                    only = &p;
                    r.atoms.insert(r.atoms.end(), p.atoms.begin(), p.atoms.end());
                    r.numeric.insert(r.numeric.end(), p.numeric.begin(), p.numeric.end());
                }
            }
            if (covering == 0) continue;
            r.atoms = covering == 1 ? only->atoms : simplify(r.atoms);
            if (r.is_zero()) continue;
            out.push_back(std::move(r));
        }
        pieces_ = std::move(out);
    }

    std::vector<Piece> pieces_;
};

/// Roots of a piece's value inside (lo, hi) located from sign changes on samples.
inline std::vector<double> piece_roots(const Piece& p) {
    std::vector<double> roots;
    const auto xs = sample_points(p.lo, p.hi, 256);
    double xp = 0.0, vp = 0.0;
    bool have = false;
    for (double x : xs) {
        const double v = p.eval(x);
        if (!std::isfinite(v)) {
            have = false;
            continue;
        }
        if (have && ((vp < 0 && v > 0) || (vp > 0 && v < 0))) {
            roots.push_back(quad::find_root([&](double t) { return p.eval(t); }, xp, x, 1e-14 * std::max(1.0, x)));
        }
        xp = x;
        vp = v;
        have = true;
    }
    return roots;
}

inline int piece_sign(const Piece& p) {
    int sign = 0;
    for (double x : sample_points(p.lo, p.hi, 32)) {
        const double v = p.eval(x);
        if (v > 0) sign |= 1;
        if (v < 0) sign |= 2;
    }
    return sign == 1 ? 1 : sign == 2 ? -1 : sign == 0 ? 0 : 2;
}

inline PiecewiseFn PiecewiseFn::abs_pow(double pw) const {
    std::vector<Piece> out;
    for (const auto& p : pieces_) {
        std::vector<double> cuts{p.lo};
        for (double r : piece_roots(p)) cuts.push_back(r);
        cuts.push_back(p.hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (!(cuts[i] < cuts[i + 1])) continue;
            Piece q{cuts[i], cuts[i + 1], p.atoms, p.numeric};
            const int sg = piece_sign(q);
            if (sg == 0) continue;
            if (q.exact() && q.atoms.size() == 1 && (sg == 1 || sg == -1)) {
                Atom a = q.atoms[0];
                a.coef *= sg;
                bool ok = a.coef > 0;
                // Factor bases must stay positive for the symbolic power.
                for (const auto& f : a.factors) {
                    const double mid = std::isinf(q.hi) ? q.lo + 1.0 : 0.5 * (q.lo + q.hi);
                    if (!(f.base(mid) > 0)) ok = false;
                }
                if (ok) {
                    q.atoms = {pow_atom(a, pw)};
                    out.push_back(std::move(q));
                    continue;
                }
            }
            if (q.exact() && pw == 1.0 && (sg == 1 || sg == -1)) {
                q.atoms = scale(q.atoms, sg);
                out.push_back(std::move(q));
                continue;
            }
            Piece src = q;
            q.atoms.clear();
            q.numeric = {std::make_shared<NumericTerm>(
                NumericTerm{[src, pw](double t) { return std::pow(std::abs(src.eval(t)), pw); }, "abs_pow"})};
            out.push_back(std::move(q));
        }
    }
    return PiecewiseFn(std::move(out));
}

}  // namespace hardy
