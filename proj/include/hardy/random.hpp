#pragma once

// Seeded random piecewise-atom functions for property checks.

#include <random>

#include "hardy/piecewise.hpp"

namespace hardy {

struct RandomFnOptions {
    int max_pieces = 3;
    double max_end = 8.0;
    bool allow_negative = false;
    bool allow_tail = true;  // last piece may extend to inf with an integrable tail
};

inline PiecewiseFn random_function(std::mt19937& rng, const RandomFnOptions& opt = {}) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
    const int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(opt.max_pieces));
    std::vector<double> cuts;
    for (int i = 0; i <= n; ++i) cuts.push_back(std::round(uni(0.0, opt.max_end) * 64.0) / 64.0);
    std::sort(cuts.begin(), cuts.end());
    if (U(rng) < 0.5) cuts.front() = 0.0;
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.size() < 2) cuts = {0.0, 1.0};
    const bool tail = opt.allow_tail && U(rng) < 0.3;
    std::vector<Piece> ps;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double c = uni(0.2, 3.0) * (opt.allow_negative && U(rng) < 0.4 ? -1.0 : 1.0);
        Sum atoms;
        switch (rng() % 6) {
            case 0: atoms = {constant_atom(c)}; break;
            case 1: atoms = {power_atom(c, uni(-0.45, 1.5))}; break;
            case 2: atoms = {affine_atom(c, 1.0, 1.0, uni(-2.0, 1.0))}; break;
            case 3: atoms = {affine_atom(c, hi, -1.0, uni(-0.45, 1.0))}; break;
            case 4: atoms = {affine_atom(c, 0.0 - lo, 1.0, uni(-0.45, 1.0))}; break;
            default: atoms = simplify({constant_atom(c), power_atom(uni(0.1, 1.0) * (c > 0 ? 1.0 : -1.0), 1.0)}); break;
        }
        ps.push_back(Piece{lo, hi, atoms, {}});
    }
    if (tail) {
        const double lo = cuts.back();
        const double c = uni(0.2, 3.0) * (opt.allow_negative && U(rng) < 0.4 ? -1.0 : 1.0);
        ps.push_back(Piece{lo, kInf, {affine_atom(c, 1.0, 1.0, uni(-3.0, -1.1))}, {}});
    }
    return PiecewiseFn(std::move(ps));
}

}  // namespace hardy
