#pragma once

// Distribution functions and decreasing rearrangements. |f| is split into
// monotone segments (roots, then turning points); the distribution function
// sums the level-set lengths of the segments, inverting each one in closed
// form when possible and by bisection otherwise.

#include <map>
#include <memory>
#include <optional>

#include "hardy/integrate.hpp"

namespace hardy {

namespace rearrange_detail {

// Limit of a piece's value at endpoint e approached from `side`.
inline double piece_limit(const Piece& p, double e, double side) {
    if (p.exact()) {
        double v = 0.0;
        bool pos_inf = false, neg_inf = false;
        for (const auto& a : p.atoms) {
            double av = std::isinf(e) ? a.eval(kInf) : a.eval(e);
            if (!std::isfinite(av)) {
                const Order o = std::isinf(e) ? a.order_at_infinity() : a.order_at(e);
                const bool vanishes = std::isinf(e) ? (o.power < 0.0 || (o.power == 0.0 && o.log_power < 0.0))
                                                    : (o.power > 0.0 || (o.power == 0.0 && o.log_power < 0.0));
                if (vanishes) {
                    av = 0.0;
                } else {
                    const double s = integrate_detail::atom_sign_near(a, e, side);
                    (s > 0 ? pos_inf : neg_inf) = true;
                    continue;
                }
            }
            v += av;
        }
        if (pos_inf && !neg_inf) return kInf;
        if (neg_inf && !pos_inf) return -kInf;
        if (!pos_inf && !neg_inf && std::isfinite(v)) return v;
    }
    // Numeric estimate from two nearby points.
    if (std::isinf(e)) {
        const double base = std::max(1.0, p.lo);
        const double v1 = p.eval(base * 1e13), v2 = p.eval(base * 1e15);
        if (std::abs(v2) > 10.0 * std::abs(v1) && std::abs(v2) > 1.0) return v2 > 0 ? kInf : -kInf;
        // Algebraic decay between the two samples means the limit is 0.
        if (v1 != 0.0 && v2 / v1 > 0.0 && std::log(std::abs(v2 / v1)) / std::log(100.0) < -0.05) return 0.0;
        return v2;
    }
    const double scale = std::isinf(p.hi) ? std::max(1.0, p.lo) : (p.hi - p.lo);
    const double v1 = p.eval_near(e, side, scale * 1e-12), v2 = p.eval_near(e, side, scale * 1e-15);
    if (!std::isfinite(v2)) return v2;
    if (std::abs(v2) > 10.0 * std::abs(v1) && std::abs(v2) > 1.0) return v2 > 0 ? kInf : -kInf;
    return v2;
}

}  // namespace rearrange_detail

/// Interval of monotonicity of |f| with its end limits.
struct MonoSeg {
    double lo = 0.0, hi = 0.0;
    double v_lo = 0.0, v_hi = 0.0;  // limits of |f| at lo+ and hi-
    double sign = 1.0;              // sign of f on the segment
    std::shared_ptr<const Piece> piece;

    bool flat() const { return v_lo == v_hi; }
    bool increasing() const { return v_hi > v_lo; }
    double length() const { return hi - lo; }
    double abs_at(double x) const { return sign * piece->eval(x); }
    double abs_near(double x0, double side, double d) const { return sign * piece->eval_near(x0, side, d); }
};

namespace rearrange_detail {

// x in the segment with |f|(x) = s, for s strictly between the end limits;
// dist_out receives |x - anchor| where the anchor is the end with larger |f|.
inline double invert_segment(const MonoSeg& g, double s, double* dist_out = nullptr) {
    const Piece& p = *g.piece;
    // Closed forms: c0 + c1 * (a + b t)^gamma.
    if (p.exact() && p.atoms.size() <= 2) {
        double c0 = 0.0;
        const Atom* pw = nullptr;
        bool ok = true;
        for (const auto& a : p.atoms) {
            if (a.is_constant()) {
                c0 += a.coef;
            } else if (!pw && a.factors.size() == 1 && a.factors[0].kind == FactorKind::Lin) {
                pw = &a;
            } else {
                ok = false;
            }
        }
        if (ok && pw) {
            const Factor& f = pw->factors[0];
            const double y = g.sign * s;  // value of f
            const double base = std::pow((y - c0) / pw->coef, 1.0 / f.exp);
            const double x = (base - f.p0) / f.p1;
            if (std::isfinite(x) && x >= g.lo && x <= g.hi) {
                if (dist_out) {
                    // Distance from the anchor without cancellation when the anchor is the zero of the base.
                    const double anchor = g.increasing() ? g.hi : g.lo;
                    *dist_out = std::isfinite(anchor) && f.p0 + f.p1 * anchor == 0.0 ? std::abs(base / f.p1)
                                                                                      : std::abs(x - anchor);
                }
                return x;
            }
        }
    }
    // Bisection on the log-distance from the end where |f| is larger.
    const bool inc = g.increasing();
    if (std::isinf(g.hi)) {
        // Parametrize by x - lo on a log scale.
        double dlo = std::ldexp(1.0, -1060), dhi = std::max(1.0, g.lo);
        auto val = [&](double d) { return g.abs_near(g.lo, 1.0, d); };
        if (inc) {
            while (val(dhi) <= s && dhi < 1e300) dhi *= 16.0;
        } else {
            while (val(dhi) > s && dhi < 1e300) dhi *= 16.0;
        }
        for (int it = 0; it < 400; ++it) {
            const double m = std::sqrt(dlo) * std::sqrt(dhi);
            if (!(m > dlo && m < dhi)) break;
            const bool above = val(m) > s;
            if (above == inc) {
                dhi = m;
            } else {
                dlo = m;
            }
            if (dhi - dlo <= 1e-16 * dhi) break;
        }
        if (dist_out) *dist_out = 0.5 * (dlo + dhi);
        return g.lo + 0.5 * (dlo + dhi);
    }
    const double anchor = inc ? g.hi : g.lo;
    const double side = inc ? -1.0 : 1.0;
    const double len = g.length();
    double dlo = std::ldexp(len, -1000);  // |f| > s near the anchor
    double dhi = len;                     // |f| <= s at the far end
    auto val = [&](double d) { return g.abs_near(anchor, side, d); };
    for (int it = 0; it < 400; ++it) {
        const double m = std::sqrt(dlo) * std::sqrt(dhi);
        const double mid = (m > dlo && m < dhi && dhi > 4.0 * dlo) ? m : 0.5 * (dlo + dhi);
        if (!(mid > dlo && mid < dhi)) break;
        if (val(mid) > s) {
            dlo = mid;
        } else {
            dhi = mid;
        }
        if (dhi - dlo <= 4e-16 * dhi) break;
    }
    const double d = 0.5 * (dlo + dhi);
    if (dist_out) *dist_out = d;
    return anchor + side * d;
}

inline std::vector<MonoSeg> decompose(const PiecewiseFn& f) {
    std::vector<MonoSeg> segs;
    for (const auto& p0 : f.pieces()) {
        auto p = std::make_shared<const Piece>(p0);
        std::vector<double> cuts{p->lo};
        for (double r : piece_roots(*p)) cuts.push_back(r);
        cuts.push_back(p->hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            if (!(a < b)) continue;
            Piece sub{a, b, p->atoms, p->numeric};
            const int sg = piece_sign(sub);
            if (sg == 0) continue;
            const double sign = sg < 0 ? -1.0 : 1.0;
            const bool a_root = i > 0, b_root = i + 2 < cuts.size();
            auto absf = [&](double x) { return sign * p->eval(x); };
            double va = a_root ? 0.0 : sign * piece_limit(*p, a, 1.0);
            double vb = b_root ? 0.0 : sign * piece_limit(*p, b, -1.0);
            if (p->is_constant()) {
                segs.push_back({a, b, std::abs(p->constant_value()), std::abs(p->constant_value()), sign, p});
                continue;
            }
            // Turning points of |f| from samples.
            std::vector<std::pair<double, double>> turns;
            const auto xs = sample_points(a, b, 256);
            std::vector<double> vs;
            for (double x : xs) vs.push_back(absf(x));
            int dir = 0;
            for (std::size_t j = 1; j < xs.size(); ++j) {
                const double dv = vs[j] - vs[j - 1];
                if (std::abs(dv) <= 1e-13 * std::max(std::abs(vs[j]), std::abs(vs[j - 1]))) continue;
                const int nd = dv > 0 ? 1 : -1;
                if (dir != 0 && nd != dir) {
                    // Extremum between xs[j-2] and xs[j].
                    const double l = xs[j >= 2 ? j - 2 : 0], r = xs[j];
                    auto [xm, ym] = dir > 0 ? quad::golden_max(absf, l, r)
                                            : quad::golden_max([&](double x) { return -absf(x); }, l, r);
                    turns.push_back({xm, dir > 0 ? ym : -ym});
                }
                dir = nd;
            }
            double prev_x = a, prev_v = va;
            for (const auto& [tx, tv] : turns) {
                if (!(tx > prev_x && tx < b)) continue;
                segs.push_back({prev_x, tx, prev_v, tv, sign, p});
                prev_x = tx;
                prev_v = tv;
            }
            segs.push_back({prev_x, b, prev_v, vb, sign, p});
        }
    }
    return segs;
}

}  // namespace rearrange_detail

/// Distribution function s -> |{|f| > s}| of a piecewise function.
class DistFn {
public:
    DistFn() = default;
    explicit DistFn(const PiecewiseFn& f) : segs_(rearrange_detail::decompose(f)) {
        for (const auto& g : segs_) {
            sup_ = std::max({sup_, g.v_lo, g.v_hi});
            if (std::isinf(g.hi)) tail_level_ = std::max(tail_level_, g.v_hi);
        }
    }

    /// lambda(s) for s >= 0; +inf when the level set has infinite measure.
    double operator()(double s) const {
        double total = 0.0;
        for (const auto& g : segs_) total += seg_measure(g, s);
        return total;
    }

    /// {|f| > s} as sorted disjoint intervals.
    std::vector<std::pair<double, double>> level_set(double s) const {
        std::vector<std::pair<double, double>> out;
        for (const auto& g : segs_) {
            auto iv = seg_interval(g, s);
            if (!iv) continue;
            if (!out.empty() && out.back().second >= iv->first) {
                out.back().second = std::max(out.back().second, iv->second);
            } else {
                out.push_back(*iv);
            }
        }
        return out;
    }

    /// Levels at which lambda may jump or change formula.
    std::vector<double> breakpoints() const {
        std::vector<double> b;
        for (const auto& g : segs_) {
            for (double v : {g.v_lo, g.v_hi})
                if (v > 0 && std::isfinite(v)) b.push_back(v);
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    double sup() const { return sup_; }
    /// lambda(s) = inf for every s below this level.
    double tail_level() const { return tail_level_; }
    double support_measure() const { return (*this)(0.0); }
    const std::vector<MonoSeg>& segments() const { return segs_; }

private:
    static std::optional<std::pair<double, double>> seg_interval(const MonoSeg& g, double s) {
        if (g.flat()) {
            if (g.v_lo > s) return std::make_pair(g.lo, g.hi);
            return std::nullopt;
        }
        if (g.increasing()) {
            if (s >= g.v_hi) return std::nullopt;
            if (s <= g.v_lo) return std::make_pair(g.lo, g.hi);
            return std::make_pair(rearrange_detail::invert_segment(g, s), g.hi);
        }
        if (s >= g.v_lo) return std::nullopt;
        if (s <= g.v_hi) return std::make_pair(g.lo, g.hi);
        return std::make_pair(g.lo, rearrange_detail::invert_segment(g, s));
    }
    static double seg_measure(const MonoSeg& g, double s) {
        if (!g.flat() && s < (g.increasing() ? g.v_hi : g.v_lo) && s > (g.increasing() ? g.v_lo : g.v_hi)) {
            if (g.increasing() && std::isinf(g.hi)) return kInf;
            double d = 0.0;
            rearrange_detail::invert_segment(g, s, &d);
            return d;
        }
        auto iv = seg_interval(g, s);
        return iv ? iv->second - iv->first : 0.0;
    }

    std::vector<MonoSeg> segs_;
    double sup_ = 0.0;
    double tail_level_ = 0.0;
};

inline DistFn distribution(const PiecewiseFn& f) { return DistFn(f); }

struct RearrangedFn {
    PiecewiseFn fn;
    bool exact = false;
    DistFn dist;
};

namespace rearrange_detail {

// |f| is non-increasing on a support that starts at 0 with no gaps.
inline bool decreasing_from_zero(const PiecewiseFn& f, const DistFn& d) {
    const auto& ps = f.pieces();
    if (ps.empty() || ps.front().lo != 0.0) return false;
    for (std::size_t i = 1; i < ps.size(); ++i)
        if (ps[i].lo != ps[i - 1].hi) return false;
    const auto& segs = d.segments();
    double sign = 0.0;
    double span = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].increasing()) return false;
        if (sign == 0.0) sign = segs[i].sign;
        if (segs[i].sign != sign) return false;
        if (i > 0 && segs[i].v_lo > segs[i - 1].v_hi * (1.0 + 1e-12)) return false;
        span += segs[i].length();
    }
    // Roots inside the support would leave zero-measure gaps only; reject real gaps.
    return std::isinf(span) || std::abs(span - ps.back().hi) <= 1e-12 * ps.back().hi;
}

}  // namespace rearrange_detail

/// Decreasing rearrangement f*(s) = inf{t >= 0 : lambda_f(t) <= s}.
inline RearrangedFn rearrangement(const PiecewiseFn& f) {
    RearrangedFn out;
    out.dist = DistFn(f);
    const DistFn& d = out.dist;
    if (f.is_zero() || d.sup() == 0.0) {
        out.exact = true;
        return out;
    }
    const auto& ps = f.pieces();
    // Step functions.
    if (std::all_of(ps.begin(), ps.end(), [](const Piece& p) { return p.is_constant(); })) {
        std::vector<std::pair<double, double>> vals;  // |value|, length
        for (const auto& p : ps) vals.push_back({std::abs(p.constant_value()), p.hi - p.lo});
        std::stable_sort(vals.begin(), vals.end(), [](auto& a, auto& b) { return a.first > b.first; });
        std::vector<Piece> out_ps;
        double at = 0.0;
        for (const auto& [v, len] : vals) {
            if (v == 0.0) continue;
            const double end = at + len;
            if (!out_ps.empty() && out_ps.back().atoms[0].coef == v) {
                out_ps.back().hi = end;
            } else {
                out_ps.push_back(Piece{at, end, {constant_atom(v)}, {}});
            }
            at = end;
            if (std::isinf(at)) break;
        }
        out.fn = PiecewiseFn(std::move(out_ps));
        out.exact = true;
        return out;
    }
    // Constant rearrangement when the largest level is reached on a set of infinite measure.
    if (std::isfinite(d.sup()) && d.tail_level() >= d.sup()) {
        out.fn = PiecewiseFn::indicator(0.0, kInf, d.sup());
        out.exact = true;
        return out;
    }
    if (f.exact() && rearrange_detail::decreasing_from_zero(f, d)) {
        out.fn = d.segments().front().sign < 0 ? f.scaled(-1.0) : f;
        out.exact = true;
        return out;
    }
    if (f.exact() && ps.size() == 1 && d.segments().size() == 1) {
        const MonoSeg& g = d.segments().front();
        const Piece& p = ps.front();
        const double len = p.hi - p.lo;
        if (!g.increasing()) {
            Piece q{0.0, len, scale(substitute(p.atoms, p.lo, 1.0), g.sign), {}};
            out.fn = PiecewiseFn({q});
            out.exact = true;
            return out;
        }
        if (std::isfinite(p.hi)) {
            Piece q{0.0, len, scale(substitute(p.atoms, p.hi, -1.0), g.sign), {}};
            out.fn = PiecewiseFn({q});
            out.exact = true;
            return out;
        }
    }
    // Numeric generalized inverse.
    auto dist = std::make_shared<const DistFn>(d);
    const double support = d.support_measure();
    auto fstar = [dist](double t) {
        const DistFn& D = *dist;
        double lo = D.tail_level();  // lambda = inf below
        double hi = D.sup();
        if (D(lo) <= t) return lo;
        if (std::isinf(hi)) {
            hi = std::max(1.0, 2.0 * lo);
            while (D(hi) > t && hi < 1e300) hi *= 16.0;
        }
        // lambda(lo) > t >= lambda(hi): bisect (log scale when the range is wide).
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (lo + hi);
            if (lo > 0 && hi > 4.0 * lo) m = std::sqrt(lo) * std::sqrt(hi);
            if (lo == 0.0) m = hi / 256.0;
            if (!(m > lo && m < hi)) break;
            if (D(m) > t) {
                lo = m;
            } else {
                hi = m;
            }
            if (hi - lo <= 1e-15 * hi) break;
        }
        return hi;
    };
    // Split where f* may kink or jump: s = lambda(v) for the breakpoint levels v.
    const auto term = std::make_shared<NumericTerm>(NumericTerm{fstar, "rearrangement"});
    std::vector<double> cuts{0.0};
    for (double v : d.breakpoints()) {
        const double s = d(v);
        if (s > 0 && s < support) cuts.push_back(s);
    }
    cuts.push_back(support);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<Piece> qs;
    for (std::size_t i = 1; i < cuts.size(); ++i) qs.push_back(Piece{cuts[i - 1], cuts[i], {}, {term}});
    out.fn = PiecewiseFn(std::move(qs));
    out.exact = false;
    return out;
}

/// |lambda_f(s) - lambda_g(s)| <= tol (relative to max(1, lambda)) at every level of the grid.
inline bool check_equimeasurable(const PiecewiseFn& f, const PiecewiseFn& g, const std::vector<double>& levels,
                                 double tol = 1e-6) {
    const DistFn df(f), dg(g);
    for (double s : levels) {
        const double a = df(s), b = dg(s);
        if (std::isinf(a) || std::isinf(b)) {
            if (a != b) return false;
            continue;
        }
        if (std::abs(a - b) > tol * std::max(1.0, std::max(a, b))) return false;
    }
    return true;
}

/// n log-spaced levels in [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
    return g;
}

}  // namespace hardy
