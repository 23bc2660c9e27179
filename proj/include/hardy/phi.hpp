#pragma once

// Increasing concave phi with phi(0) = 0 and an optional jump phi(0+),
// together with theta_phi(y) = int_y^inf phi'(t)/t dt.

#include <memory>
#include <string>

#include "hardy/integrate.hpp"
#include "hardy/parse.hpp"

namespace hardy {

class ConcavePhi {
public:
    enum class Kind { Power, Min1t, Custom };

    /// phi(t) = jump + t^r, 0 < r <= 1.
    static ConcavePhi power(double r, double jump = 0.0) {
        if (!(r > 0.0 && r <= 1.0)) throw DomainError("power exponent must lie in (0, 1]");
        ConcavePhi p;
        p.kind_ = Kind::Power;
        p.r_ = r;
        p.jump_ = jump;
        p.name_ = r == 0.5 ? "sqrt" : r == 1.0 ? "linear" : "pow:" + fmt12(r);
        return p;
    }
    /// phi(t) = jump + min{1, t}.
    static ConcavePhi min1t(double jump = 0.0) {
        ConcavePhi p;
        p.kind_ = Kind::Min1t;
        p.jump_ = jump;
        p.name_ = "min1t";
        return p;
    }
    /// phi given on (0, inf) by a parsed function with phi(0+) = 0 plus the jump.
    static ConcavePhi custom(const PiecewiseFn& f, double jump = 0.0, std::string name = "custom") {
        if (!f.exact()) throw DomainError("custom phi must be given by atoms");
        ConcavePhi p;
        p.kind_ = Kind::Custom;
        p.jump_ = jump;
        p.fn_ = std::make_shared<const PiecewiseFn>(f);
        p.dfn_ = std::make_shared<const PiecewiseFn>(f.derivative());
        p.name_ = std::move(name);
        p.validate();
        return p;
    }

    /// "sqrt", "linear", "min1t", "pow:1/3", "pow:0.25", or a function text;
    /// an optional ";jump=c" suffix sets phi(0+).
    static ConcavePhi parse(std::string text) {
        double jump = 0.0;
        if (auto k = text.find(";jump="); k != std::string::npos) {
            jump = std::stod(text.substr(k + 6));
            text = text.substr(0, k);
        }
        if (text == "sqrt") return power(0.5, jump);
        if (text == "linear" || text == "t") return power(1.0, jump);
        if (text == "min1t") return min1t(jump);
        if (text.rfind("pow:", 0) == 0) {
            const Sum e = parse_expression(text.substr(4));
            if (e.size() > 1 || (e.size() == 1 && !e[0].is_constant())) throw ParseError("pow exponent must be constant", 4);
            return power(e.empty() ? 0.0 : e[0].coef, jump);
        }
        return custom(hardy::parse(text), jump, text);
    }

    Kind kind() const { return kind_; }
    double exponent() const { return r_; }
    double jump() const { return jump_; }
    const std::string& name() const { return name_; }

    /// phi(t) for t > 0 (includes the jump); phi(0) = 0.
    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        return jump_ + base(t);
    }
    /// phi(t) - phi(0+).
    double base(double t) const {
        switch (kind_) {
            case Kind::Power: return std::isinf(t) ? (r_ > 0 ? kInf : 1.0) : std::pow(t, r_);
            case Kind::Min1t: return std::min(1.0, t);
            case Kind::Custom: return std::isinf(t) ? limit_at_infinity() : fn_->eval(t);
        }
        return 0.0;
    }
    double derivative(double t) const {
        switch (kind_) {
            case Kind::Power: return r_ * std::pow(t, r_ - 1.0);
            case Kind::Min1t: return t < 1.0 ? 1.0 : 0.0;
            case Kind::Custom: return dfn_->eval(t);
        }
        return 0.0;
    }
    /// phi' as a piecewise function on (0, inf).
    PiecewiseFn derivative_fn() const {
        switch (kind_) {
            case Kind::Power: return PiecewiseFn::single(0.0, kInf, {power_atom(r_, r_ - 1.0)});
            case Kind::Min1t: return PiecewiseFn::indicator(0.0, 1.0);
            case Kind::Custom: return *dfn_;
        }
        return {};
    }

    /// theta(y) = int_y^inf phi'(t)/t dt; +inf when divergent.
    double theta(double y) const {
        if (!(y > 0)) throw DomainError("theta needs y > 0");
        switch (kind_) {
            case Kind::Power: return r_ >= 1.0 ? kInf : r_ / (1.0 - r_) * std::pow(y, r_ - 1.0);
            case Kind::Min1t: return y < 1.0 ? -std::log(y) : 0.0;
            case Kind::Custom: {
                const auto r = integrate(dfn_->times(Sum{power_atom(1.0, -1.0)}), y, kInf);
                return r.extended();
            }
        }
        return kInf;
    }
    /// theta as a piecewise function (numeric for custom phi).
    PiecewiseFn theta_fn() const {
        switch (kind_) {
            case Kind::Power:
                if (r_ >= 1.0) throw DomainError("theta is infinite for phi(t) = t");
                return PiecewiseFn::single(0.0, kInf, {power_atom(r_ / (1.0 - r_), r_ - 1.0)});
            case Kind::Min1t: return PiecewiseFn::single(0.0, 1.0, {normalize(Atom{1.0, {loglin(0.0, -1.0, 0.0, 1.0)}})});
            case Kind::Custom: {
                auto self = std::make_shared<const ConcavePhi>(*this);
                return PiecewiseFn({Piece{0.0, kInf, {}, {std::make_shared<NumericTerm>(NumericTerm{
                                                         [self](double y) { return self->theta(y); }, "theta"})}}});
            }
        }
        return {};
    }

    double limit_at_infinity() const {
        switch (kind_) {
            case Kind::Power: return kInf;
            case Kind::Min1t: return 1.0;
            case Kind::Custom: {
                const auto& ps = fn_->pieces();
                if (ps.empty() || std::isfinite(ps.back().hi)) return 0.0;
                return rearrange_limit(ps.back());
            }
        }
        return kInf;
    }

private:
    static double rearrange_limit(const Piece& p) {
        const double v1 = p.eval(1e12), v2 = p.eval(1e15);
        if (v2 > 1.001 * v1) return kInf;
        return v2;
    }
    void validate() const {
        double prev_d = kInf, prev_v = 0.0;
        for (double t : {1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0, 1e4, 1e6}) {
            const double v = fn_->eval(t), d = dfn_->eval(t);
            if (v < prev_v - 1e-12 || d < -1e-12 || d > prev_d * (1.0 + 1e-9) + 1e-12)
                throw DomainError("phi must be increasing and concave");
            prev_v = v;
            prev_d = d;
        }
        if (std::abs(fn_->eval(1e-12)) > 1e-3) throw DomainError("phi(0+) must be 0 (use the jump)");
    }

    Kind kind_ = Kind::Power;
    double r_ = 0.5;
    double jump_ = 0.0;
    std::shared_ptr<const PiecewiseFn> fn_;
    std::shared_ptr<const PiecewiseFn> dfn_;
    std::string name_;
};

}  // namespace hardy
