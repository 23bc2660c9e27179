#pragma once

// Recursive-descent parser for the function mini-language:
//
//   fn      := piece ('+' piece)*
//   piece   := 'chi' interval | expr 'on' interval
//   interval:= ('('|'[') num ',' (num|'inf') (')'|']')
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          exponent must be constant
//   primary := number | 't' | 'e' | 'pi' | '(' expr ')' | 'log' '(' expr ')'
//            | 'logrecip' '(' expr ')' | 'tshift' '(' expr ',' expr ')'

#include <cctype>
#include <cstdlib>
#include <map>
#include <string>
#include <string_view>

#include "hardy/piecewise.hpp"

namespace hardy {

namespace parse_detail {

inline bool is_constant_sum(const Sum& s) {
    return std::all_of(s.begin(), s.end(), [](const Atom& a) { return a.is_constant(); });
}
inline double constant_value(const Sum& s) {
    double v = 0.0;
    for (const auto& a : s) v += a.coef;
    return v;
}

// Polynomial coefficients (degree <= 2) when every atom is c * prod Lin^n with
// non-negative integer n.
inline std::optional<std::vector<double>> as_polynomial(const Sum& s) {
    std::vector<double> total{0.0};
    auto mul = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> r(a.size() + b.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
        return r;
    };
    for (const auto& a : s) {
        std::vector<double> poly{a.coef};
        for (const auto& f : a.factors) {
            if (f.kind == FactorKind::Log || f.exp < 0 || f.exp != std::floor(f.exp) || f.exp > 4) return std::nullopt;
            std::vector<double> base = f.kind == FactorKind::Lin ? std::vector<double>{f.p0, f.p1}
                                                                 : std::vector<double>{f.p0, f.p1, f.p2};
            for (int k = 0; k < static_cast<int>(f.exp); ++k) poly = mul(poly, base);
        }
        if (poly.size() > total.size()) total.resize(poly.size(), 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) total[i] += poly[i];
    }
    while (total.size() > 1 && total.back() == 0.0) total.pop_back();
    if (total.size() > 3) return std::nullopt;
    return total;
}

}  // namespace parse_detail

/// Raises a sum to a constant power, collapsing it into a single factor when
/// it is a polynomial of degree <= 2 or affine in one logarithm.
inline Sum pow_sum(const Sum& s0, double r, std::size_t pos = 0) {
    const Sum s = simplify(s0);
    if (s.empty()) {
        if (r > 0) return {};
        throw ParseError("zero raised to a non-positive power", pos);
    }
    if (s.size() == 1) {
        try {
            return {pow_atom(s[0], r)};
        } catch (const DomainError& e) {
            throw ParseError(e.what(), pos);
        }
    }
    if (r == 1.0) return s;
    if (auto poly = parse_detail::as_polynomial(s)) {
        const auto& c = *poly;
        Atom a{1.0, {c.size() == 3 ? quadratic(c[0], c[1], c[2], r) : lin(c[0], c.size() > 1 ? c[1] : 0.0, r)}};
        return {normalize(a)};
    }
    // constant + sum of c_i * (A_i + B_i log|t - s|)^1 with a common shift.
    {
        double cst = 0.0, A = 0.0, B = 0.0;
        std::optional<double> shift;
        bool ok = true;
        for (const auto& a : s) {
            if (a.is_constant()) {
                cst += a.coef;
                continue;
            }
            if (a.factors.size() != 1 || a.factors[0].kind != FactorKind::Log || a.factors[0].exp != 1.0) {
                ok = false;
                break;
            }
            const auto& f = a.factors[0];
            if (shift && *shift != f.p2) {
                ok = false;
                break;
            }
            shift = f.p2;
            A += a.coef * f.p0;
            B += a.coef * f.p1;
        }
        if (ok && shift) return {normalize(Atom{1.0, {loglin(cst + A, B, *shift, r)}})};
    }
    if (r >= 0 && r == std::floor(r) && r <= 16) {
        Sum out{constant_atom(1.0)};
        for (int k = 0; k < static_cast<int>(r); ++k) out = multiply(out, s);
        return out;
    }
    throw ParseError("unsupported power of a sum", pos);
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    PiecewiseFn parse_function() {
        std::vector<Piece> pieces;
        pieces.push_back(parse_piece());
        skip();
        while (peek() == '+') {
            ++i_;
            pieces.push_back(parse_piece());
            skip();
        }
        if (i_ != s_.size()) throw ParseError("unexpected trailing input", i_);
        return PiecewiseFn(std::move(pieces));
    }

    Sum parse_expression_only() {
        Sum e = parse_expr();
        skip();
        if (i_ != s_.size()) throw ParseError("unexpected trailing input", i_);
        return e;
    }

private:
    Piece parse_piece() {
        skip();
        if (match_word("chi")) {
            auto [lo, hi] = parse_interval();
            return Piece{lo, hi, {constant_atom(1.0)}, {}};
        }
        Sum e = parse_expr();
        skip();
        if (!match_word("on")) throw ParseError("expected 'on'", i_);
        auto [lo, hi] = parse_interval();
        return Piece{lo, hi, e, {}};
    }

    std::pair<double, double> parse_interval() {
        skip();
        if (peek() != '(' && peek() != '[') throw ParseError("expected interval", i_);
        ++i_;
        const double lo = parse_number_or_inf();
        skip();
        expect(',');
        const double hi = parse_number_or_inf();
        skip();
        if (peek() != ')' && peek() != ']') throw ParseError("expected ')'", i_);
        ++i_;
        if (!(lo >= 0.0) || !(lo < hi)) throw ParseError("interval needs 0 <= lo < hi", i_);
        return {lo, hi};
    }

    double parse_number_or_inf() {
        skip();
        if (match_word("inf")) return kInf;
        const std::size_t start = i_;
        Sum e = parse_expr();
        if (!parse_detail::is_constant_sum(e)) throw ParseError("interval bound must be constant", start);
        return parse_detail::constant_value(e);
    }

    Sum parse_expr() {
        Sum acc = parse_term();
        for (;;) {
            skip();
            const char c = peek();
            if (c == '+') {
                ++i_;
                acc = add(acc, parse_term());
            } else if (c == '-') {
                ++i_;
                acc = add(acc, scale(parse_term(), -1.0));
            } else {
                return acc;
            }
        }
    }

    Sum parse_term() {
        Sum acc = parse_unary();
        for (;;) {
            skip();
            const char c = peek();
            if (c == '*') {
                ++i_;
                acc = multiply(acc, parse_unary());
            } else if (c == '/') {
                const std::size_t pos = i_++;
                acc = multiply(acc, pow_sum(parse_unary(), -1.0, pos));
            } else {
                return acc;
            }
        }
    }

    Sum parse_unary() {
        skip();
        if (peek() == '-') {
            ++i_;
            return scale(parse_unary(), -1.0);
        }
        if (peek() == '+') {
            ++i_;
            return parse_unary();
        }
        return parse_power();
    }

    Sum parse_power() {
        Sum base = parse_primary();
        skip();
        if (peek() == '^') {
            const std::size_t pos = i_++;
            Sum ex = parse_unary();
            if (!parse_detail::is_constant_sum(ex)) throw ParseError("exponent must be constant", pos);
            return pow_sum(base, parse_detail::constant_value(ex), pos);
        }
        return base;
    }

    Sum parse_primary() {
        skip();
        const std::size_t pos = i_;
        const char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const std::string tmp(s_.substr(i_));
            const double v = std::strtod(tmp.c_str(), &end);
            const std::size_t used = static_cast<std::size_t>(end - tmp.c_str());
            if (used == 0) throw ParseError("bad number", pos);
            i_ += used;
            return v == 0.0 ? Sum{} : Sum{constant_atom(v)};
        }
        if (c == '(') {
            ++i_;
            Sum e = parse_expr();
            skip();
            expect(')');
            return e;
        }
        if (match_word("logrecip")) {
            skip();
            expect('(');
            Sum b = parse_expr();
            skip();
            expect(')');
            if (!parse_detail::is_constant_sum(b)) throw ParseError("logrecip parameter must be constant", pos);
            return {log_recip_atom(parse_detail::constant_value(b))};
        }
        if (match_word("log")) {
            skip();
            expect('(');
            Sum arg = parse_expr();
            skip();
            expect(')');
            return log_of(arg, pos);
        }
        if (match_word("tshift")) {
            skip();
            expect('(');
            Sum sh = parse_expr();
            skip();
            expect(',');
            Sum e = parse_expr();
            skip();
            expect(')');
            if (!parse_detail::is_constant_sum(sh)) throw ParseError("tshift amount must be constant", pos);
            return substitute(e, -parse_detail::constant_value(sh), 1.0);
        }
        if (match_word("pi")) return {constant_atom(kPi)};
        if (match_word("t")) return {power_atom(1.0, 1.0)};
        if (match_word("e")) return {constant_atom(kE)};
        throw ParseError("unexpected token", pos);
    }

    // log of c * (linear)^k, or of a positive constant.
    Sum log_of(const Sum& arg0, std::size_t pos) {
        Sum arg = simplify(arg0);
        if (arg.size() > 1) arg = pow_sum(arg, 1.0, pos);
        if (arg.size() > 1) {
            if (auto poly = parse_detail::as_polynomial(arg); poly && poly->size() == 2) {
                arg = {normalize(Atom{1.0, {lin((*poly)[0], (*poly)[1], 1.0)}})};
            }
        }
        if (arg.size() != 1) throw ParseError("unsupported log argument", pos);
        const Atom& a = arg[0];
        if (!(a.coef > 0)) throw ParseError("log of a non-positive value", pos);
        Sum out;
        if (a.coef != 1.0) out.push_back(constant_atom(std::log(a.coef)));
        if (a.factors.size() > 1 || (a.factors.size() == 1 && a.factors[0].kind != FactorKind::Lin))
            throw ParseError("unsupported log argument", pos);
        if (a.factors.size() == 1) {
            const Factor& f = a.factors[0];
            // f.p0 + f.p1 t with |f.p1| == 1 vanishes at s = -f.p0 / f.p1.
            out.push_back(normalize(Atom{f.exp, {loglin(0.0, 1.0, -f.p0 / f.p1 + 0.0, 1.0)}}));
        }
        return simplify(out);
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
    void expect(char c) {
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", i_);
        ++i_;
    }
    bool match_word(std::string_view w) {
        skip();
        if (s_.substr(i_, w.size()) != w) return false;
        const std::size_t j = i_ + w.size();
        if (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) return false;
        i_ = j;
        return true;
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

/// Parses a piecewise function; throws ParseError with the byte position.
inline PiecewiseFn parse(std::string_view text) { return Parser(text).parse_function(); }

/// Parses a bare expression in t (no 'on' interval).
inline Sum parse_expression(std::string_view text) { return Parser(text).parse_expression_only(); }

}  // namespace hardy
