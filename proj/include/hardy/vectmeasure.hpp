#pragma once

// The set function nu(A) = S chi_A on finite unions of intervals, its norms,
// the Lambda_phi tail bound and strong-additivity probes.

#include <future>
#include <string>
#include <vector>

#include "hardy/lorentz.hpp"

namespace hardy {

/// Finite disjoint union of intervals [a_i, b_i); the last may be unbounded.
class BorelSet {
public:
    BorelSet() = default;
    explicit BorelSet(std::vector<std::pair<double, double>> iv) {
        std::sort(iv.begin(), iv.end());
        for (const auto& [a, b] : iv) {
            if (!(a >= 0.0) || !(a <= b)) throw DomainError("interval needs 0 <= a <= b");
            if (a == b) continue;
            if (!iv_.empty() && a <= iv_.back().second) {
                if (a < iv_.back().second) throw DomainError("intervals must be disjoint");
                iv_.back().second = b;  // adjacent pieces merge
                continue;
            }
            iv_.push_back({a, b});
        }
    }

    /// "[1,2)+[3,4)", "[3,inf)", "empty"; brackets may be ( [ ) ] as the endpoints are null.
    static BorelSet parse(const std::string& text) {
        std::vector<std::pair<double, double>> iv;
        std::size_t i = 0;
        auto skip = [&] {
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        };
        skip();
        if (text.substr(i) == "empty" || i == text.size()) return BorelSet{};
        auto number = [&]() {
            skip();
            std::size_t j = i;
            while (j < text.size() && text[j] != ',' && text[j] != ')' && text[j] != ']') ++j;
            std::string tok = text.substr(i, j - i);
            while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
            const std::size_t at = i;
            i = j;
            if (tok == "inf") return kInf;
            try {
                const Sum e = parse_expression(tok);
                if (e.empty()) return 0.0;
                if (e.size() == 1 && e[0].is_constant()) return e[0].coef;
            } catch (const ParseError&) {
            }
            throw ParseError("expected an interval endpoint", at);
        };
        while (true) {
            skip();
            if (i >= text.size() || (text[i] != '[' && text[i] != '(')) throw ParseError("expected '[' or '('", i);
            ++i;
            const double a = number();
            if (i >= text.size() || text[i] != ',') throw ParseError("expected ','", i);
            ++i;
            const double b = number();
            if (i >= text.size() || (text[i] != ')' && text[i] != ']')) throw ParseError("expected ')' or ']'", i);
            ++i;
            iv.push_back({a, b});
            skip();
            if (i == text.size()) break;
            if (text[i] != '+') throw ParseError("expected '+'", i);
            ++i;
        }
        return BorelSet(std::move(iv));
    }

    const std::vector<std::pair<double, double>>& intervals() const { return iv_; }
    bool empty() const { return iv_.empty(); }
    double epsilon() const { return iv_.empty() ? kInf : iv_.front().first; }
    double measure() const {
        double m = 0.0;
        for (const auto& [a, b] : iv_) m += b - a;
        return m;
    }
    /// Member of the delta-ring: finite measure and bounded away from 0.
    bool in_R() const { return empty() || (epsilon() > 0.0 && std::isfinite(measure())); }

    BorelSet unite(const BorelSet& o) const {
        auto v = iv_;
        v.insert(v.end(), o.iv_.begin(), o.iv_.end());
        return BorelSet(std::move(v));
    }
    PiecewiseFn indicator() const {
        std::vector<Piece> ps;
        for (const auto& [a, b] : iv_) ps.push_back(Piece{a, b, {constant_atom(1.0)}, {}});
        return PiecewiseFn(std::move(ps));
    }
    std::string to_string() const {
        if (iv_.empty()) return "empty";
        std::string s;
        for (const auto& [a, b] : iv_) s += (s.empty() ? "[" : "+[") + fmt12(a) + "," + fmt12(b) + ")";
        return s;
    }

private:
    std::vector<std::pair<double, double>> iv_;
};

/// nu(A)(x) = |A cap [0,x]| / x.
inline PiecewiseFn nu(const BorelSet& A) {
    if (A.empty()) return {};
    return hardy_transform(A.indicator());
}

struct NuNorm {
    double value = 0.0;
    double tail_bound = kInf;  // Lambda_phi only: phi(0+) |A| / eps + int_0^|A| theta
    bool within_bound = true;
};

inline NuNorm nu_norm(const SpaceDescriptor& X, const BorelSet& A, double tol = 1e-9) {
    NuNorm r;
    r.value = norm(X, nu(A), tol);
    if (X.tag == SpaceDescriptor::Tag::LambdaPhi && !A.empty()) {
        const ConcavePhi& phi = *X.phi;
        const double m = A.measure();
        const double head = phi.jump() > 0 ? phi.jump() * m / A.epsilon() : 0.0;
        r.tail_bound = head + (std::isfinite(m) ? theta_integral(phi, m) : kInf);
        r.within_bound = r.value <= r.tail_bound * (1.0 + 1e-9) + 1e-12;
    }
    return r;
}

enum class AdditivityTrend { Vanishing, BoundedAway, Undetermined };

inline const char* to_string(AdditivityTrend t) {
    switch (t) {
        case AdditivityTrend::Vanishing: return "vanishing";
        case AdditivityTrend::BoundedAway: return "bounded-away-from-0";
        case AdditivityTrend::Undetermined: return "undetermined";
    }
    return "?";
}

struct ProbeResult {
    std::vector<double> norms;        // k = 1..K
    std::vector<double> tail_bounds;  // Lambda_phi only
    AdditivityTrend trend = AdditivityTrend::Undetermined;
};

/// A_j for j = 1..K: "dyadic" [2^(j-1), 2^j), "unit" [j, j+1), "geometric" [j, j + 2^-j).
inline std::vector<BorelSet> generate_sets(const std::string& generator, int K) {
    if (K < 1) throw DomainError("K must be positive");
    std::vector<BorelSet> out;
    for (int j = 1; j <= K; ++j) {
        if (generator == "dyadic") {
            out.emplace_back(std::vector<std::pair<double, double>>{{std::ldexp(1.0, j - 1), std::ldexp(1.0, j)}});
        } else if (generator == "unit") {
            out.emplace_back(std::vector<std::pair<double, double>>{{double(j), double(j + 1)}});
        } else if (generator == "geometric") {
            out.emplace_back(std::vector<std::pair<double, double>>{{double(j), j + std::ldexp(1.0, -j)}});
        } else {
            throw ParseError("unknown generator '" + generator + "'", 0);
        }
    }
    return out;
}

/// ||nu(A_k u ... u A_K)||_X for k = 1..K with a trend classification read
/// off the first half, where truncation at K has little effect.
inline ProbeResult strong_additivity_probe(const SpaceDescriptor& X, const std::vector<BorelSet>& sets,
                                           double tol = 1e-9) {
    const int K = static_cast<int>(sets.size());
    std::vector<BorelSet> unions(K);
    for (int k = K - 1; k >= 0; --k) unions[k] = k == K - 1 ? sets[k] : sets[k].unite(unions[k + 1]);
    std::vector<std::future<NuNorm>> jobs;
    for (int k = 0; k < K; ++k)
        jobs.push_back(std::async(std::launch::async, [&, k] { return nu_norm(X, unions[k], tol); }));
    ProbeResult r;
    for (auto& j : jobs) {
        const NuNorm n = j.get();
        r.norms.push_back(n.value);
        if (X.tag == SpaceDescriptor::Tag::LambdaPhi) r.tail_bounds.push_back(n.tail_bound);
    }
    if (K < 4) return r;
    const int half = (K + 1) / 2;
    double hi = 0.0, lo = kInf;
    for (int k = 0; k < half; ++k) {
        hi = std::max(hi, r.norms[k]);
        lo = std::min(lo, r.norms[k]);
    }
    if (hi == 0.0 || r.norms[half - 1] <= 0.1 * r.norms[0]) {
        r.trend = AdditivityTrend::Vanishing;
    } else if (lo >= 0.25 * hi) {
        r.trend = AdditivityTrend::BoundedAway;
    }
    return r;
}

inline ProbeResult strong_additivity_probe(const SpaceDescriptor& X, const std::string& generator, int K,
                                           double tol = 1e-9) {
    return strong_additivity_probe(X, generate_sets(generator, K), tol);
}

}  // namespace hardy
