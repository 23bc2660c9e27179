#pragma once

// The Hardy operator Sf(x) = (1/x) int_0^x f and the level-set identity
// lambda_{Sf}(t) = (1/t) int_{Sf > t} f for f >= 0.

#include "hardy/rearrange.hpp"

namespace hardy {

namespace hardy_detail {

// Cumulative integral of one piece from its left end, evaluated from cached
// checkpoints so each call integrates over a short range only.
class CumulativePiece {
public:
    CumulativePiece(const Piece& p, double tol) : piece_(std::make_shared<const PiecewiseFn>(std::vector<Piece>{p})) {
        const double lo = p.lo;
        if (std::isinf(p.hi)) {
            const double base = std::max(1.0, lo);
            for (int k = 0; k <= 120; ++k) marks_.push_back(lo + base * (std::pow(2.0, k * 0.5) - 1.0));
        } else {
            for (int k = 0; k <= 64; ++k) marks_.push_back(lo + (p.hi - lo) * k / 64.0);
            marks_.back() = p.hi;
        }
        marks_.erase(std::unique(marks_.begin(), marks_.end()), marks_.end());
        cum_.push_back(0.0);
        for (std::size_t i = 1; i < marks_.size(); ++i) {
            const auto r = integrate(*piece_, marks_[i - 1], marks_[i], tol);
            if (!r.finite()) {
                marks_.resize(i);
                break;
            }
            cum_.push_back(cum_.back() + r.value);
        }
        tol_ = tol;
    }

    double operator()(double x) const {
        auto it = std::upper_bound(marks_.begin(), marks_.end(), x);
        const std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - marks_.begin()) - 1));
        const double from = marks_[i];
        if (x <= from) return cum_[i];
        const auto r = integrate(*piece_, from, x, tol_);
        return r.finite() ? cum_[i] + r.value : kInf;
    }

private:
    std::shared_ptr<const PiecewiseFn> piece_;
    std::vector<double> marks_;
    std::vector<double> cum_;
    double tol_ = kDefaultTol;
};

inline double probe_hi(const Piece& p) { return std::isinf(p.hi) ? p.lo + 1.0 : p.hi; }

}  // namespace hardy_detail

/// Sf as a piecewise function; closed form where the antiderivative is an atom sum.
inline PiecewiseFn hardy_transform(const PiecewiseFn& f, double tol = 1e-12) {
    std::vector<Piece> out;
    double cum = 0.0;  // int_0^pos f
    double pos = 0.0;
    const Atom inv_t = power_atom(1.0, -1.0);
    for (const auto& p : f.pieces()) {
        if (p.lo > pos && cum != 0.0) out.push_back(Piece{pos, p.lo, {power_atom(cum, -1.0)}, {}});
        const double mid_ref = std::isinf(p.hi) ? p.lo + 1.0 : 0.5 * (p.lo + p.hi);
        bool done = false;
        if (p.exact()) {
            auto F = antiderivative(p.atoms, mid_ref);
            if (F && F->atans.empty()) {
                const double at_lo = integrate_detail::antideriv_limit(*F, p.lo);
                if (std::isfinite(at_lo)) {
                    Sum s = multiply(F->atoms, Sum{inv_t});
                    const double k = cum - at_lo;
                    if (k != 0.0) s = add(s, Sum{power_atom(k, -1.0)});
                    // Near 0 the closed form is a difference of O(1/x) terms; below the
                    // point where cancellation exceeds 1e4 use the cumulative form.
                    double split = p.lo;
                    if (p.lo == 0.0) {
                        const double x0 = 1e-8 * std::min(std::isinf(p.hi) ? 1.0 : p.hi, 1.0);
                        double mag = 0.0;
                        for (const auto& a : s) mag += std::abs(a.eval(x0));
                        const double val = std::abs(eval(s, x0));
                        const double ratio = val > 0 ? mag / val : kInf;
                        if (ratio > 1e4) split = std::min(0.5 * hardy_detail::probe_hi(p), x0 * std::min(ratio, 1e300) / 1e4);
                    }
                    if (split > p.lo) {
                        auto cp = std::make_shared<const hardy_detail::CumulativePiece>(
                            Piece{p.lo, split, p.atoms, p.numeric}, tol);
                        out.push_back(Piece{p.lo, split, {},
                                            {std::make_shared<NumericTerm>(NumericTerm{
                                                [cp](double x) { return (*cp)(x) / x; }, "hardy"})}});
                    }
                    out.push_back(Piece{split, p.hi, s, {}});
                    done = true;
                }
            }
        }
        if (!done) {
            const auto head = integrate(PiecewiseFn({p}), p.lo, p.lo + 0.5 * (hardy_detail::probe_hi(p) - p.lo), 1e-10);
            if (!head.finite()) throw DomainError("function is not locally integrable at " + fmt12(p.lo));
            auto cp = std::make_shared<const hardy_detail::CumulativePiece>(p, tol);
            const double c0 = cum;
            out.push_back(Piece{p.lo, p.hi, {},
                                {std::make_shared<NumericTerm>(NumericTerm{
                                    [cp, c0](double x) { return (c0 + (*cp)(x)) / x; }, "hardy"})}});
        }
        if (std::isinf(p.hi)) {
            pos = kInf;
            break;
        }
        const auto whole = integrate(PiecewiseFn({p}), p.lo, p.hi, 1e-12);
        if (!whole.finite()) throw DomainError("function is not locally integrable at " + fmt12(whole.divergent_at));
        cum += whole.value;
        pos = p.hi;
    }
    if (std::isfinite(pos) && cum != 0.0) out.push_back(Piece{pos, kInf, {power_atom(cum, -1.0)}, {}});
    return PiecewiseFn(std::move(out));
}

/// (1/t) int_{Sf > t} f for f >= 0.
inline double levelset_distribution(const PiecewiseFn& f, double t) {
    if (!(t > 0)) throw DomainError("level must be positive");
    const PiecewiseFn sf = hardy_transform(f);
    const DistFn d(sf);
    if (d.tail_level() > t) throw DomainError("{Sf > t} has infinite measure: Sf stays above " + fmt12(t) + " at infinity");
    double total = 0.0;
    for (const auto& [a, b] : d.level_set(t)) {
        const auto r = integrate(f, a, b);
        if (!r.finite()) return kInf;
        total += r.value;
    }
    return total / t;
}

}  // namespace hardy
