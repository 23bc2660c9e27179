#pragma once

// Numerical kernels: Gauss-Kronrod quadrature with adaptive bisection,
// geometric window ladders for improper endpoints, bracketed root finding
// and golden-section search.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "hardy/common.hpp"

namespace hardy::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

}  // namespace detail

/// Single Gauss-Kronrod 21-point panel on [a, b]; error is |K21 - G10|.
template <class F>
QuadResult gk21(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * detail::kWgk[10];
    double resg = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = half * detail::kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        resk += detail::kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += detail::kWg[j / 2] * (f1 + f2);
    }
    QuadResult r;
    r.value = resk * half;
    r.error = std::abs((resk - resg) * half);
    if (!std::isfinite(r.value)) r.converged = false;
    return r;
}

/// Adaptive bisection driven by the largest local error estimate.
/// Stops when the summed error is below max(abs_tol, rel_tol*|value|).
template <class F>
QuadResult adaptive(F&& f, double a, double b, double abs_tol, double rel_tol = 1e-13,
                    int max_panels = 4000) {
    struct Panel {
        double a, b;
        QuadResult r;
        bool operator<(const Panel& o) const { return r.error < o.r.error; }
    };
    if (a == b) return {};
    std::priority_queue<Panel> heap;
    Panel first{a, b, gk21(f, a, b)};
    double total = first.r.value;
    double err = first.r.error;
    heap.push(first);
    int panels = 1;
    auto done = [&] {
        const double floor = 50.0 * kEps * std::abs(total);
        return err <= std::max({abs_tol, rel_tol * std::abs(total), floor});
    };
    while (!done() && panels < max_panels) {
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
            // Panel can no longer be split; keep its contribution as is.
            heap.push(p);
            break;
        }
        Panel left{p.a, mid, gk21(f, p.a, mid)};
        Panel right{mid, p.b, gk21(f, mid, p.b)};
        total += left.r.value + right.r.value - p.r.value;
        err += left.r.error + right.r.error - p.r.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Re-sum to limit cancellation drift from the running updates.
    double sum = 0.0, esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().r.value;
        esum += heap.top().r.error;
        heap.pop();
    }
    QuadResult out{sum, esum, true};
    const double floor = 50.0 * kEps * std::abs(sum);
    out.converged = std::isfinite(sum) && esum <= std::max({abs_tol, rel_tol * std::abs(sum), floor});
    return out;
}

enum class Convergence { Converges, Diverges, Unknown };
enum class LadderStatus { Converged, Divergent, Inconclusive };

struct LadderResult {
    LadderStatus status = LadderStatus::Converged;
    double value = 0.0;
    double error = 0.0;
    int windows = 0;
};

/// Growth factor and streak length used to call an improper integral divergent
/// from its partial sums.
inline constexpr double kDivergenceGrowth = 1e-3;
inline constexpr int kDivergenceStreak = 8;

namespace detail {

// Sums window integrals w_k produced by `window(k)` until the tail is
// negligible, divergence is established, or the windows run out.
template <class Window>
LadderResult run_ladder(Window&& window, double tol, Convergence hint, int max_windows) {
    LadderResult res;
    if (hint == Convergence::Diverges) {
        res.status = LadderStatus::Divergent;
        res.value = kInf;
        return res;
    }
    std::vector<double> w;
    std::vector<double> partial;
    double sum = 0.0, qerr = 0.0;
    int growth_streak = 0;
    for (int k = 0; k < max_windows; ++k) {
        const double wtol = std::max(tol / (8.0 * (k + 1.0) * (k + 1.0)), 0.0);
        bool ok = true;
        const double wk = window(k, wtol, ok, qerr);
        if (!ok) break;  // windows exhausted (underflow / overflow of the abscissa)
        w.push_back(wk);
        const double prev = sum;
        sum += wk;
        partial.push_back(sum);
        res.windows = k + 1;
        if (!std::isfinite(sum)) {
            res.status = LadderStatus::Divergent;
            res.value = kInf;
            return res;
        }
        if (prev != 0.0 && std::abs(sum) >= std::abs(prev) * (1.0 + kDivergenceGrowth)) {
            ++growth_streak;
        } else {
            growth_streak = 0;
        }
        if (k < 4) continue;
        // Geometric tail test over the last three ratios.
        const std::size_t n = w.size();
        double ratio = 0.0;
        bool all_zero = true;
        for (std::size_t j = n - 3; j < n; ++j) {
            if (w[j] != 0.0) all_zero = false;
            if (w[j - 1] == 0.0) {
                ratio = w[j] == 0.0 ? std::max(ratio, 0.0) : 1.0;
            } else {
                ratio = std::max(ratio, std::abs(w[j] / w[j - 1]));
            }
        }
        if (all_zero) {
            res.value = sum;
            res.error = qerr;
            return res;
        }
        double tail = kInf;
        if (ratio < 0.995) {
            tail = std::abs(w.back()) * ratio / (1.0 - ratio);
        } else if (k >= 32) {
            // Algebraic decay w_k ~ A k^-beta: extrapolate the remaining sum.
            const double wh = w[n / 2];
            if (wh != 0.0 && w.back() != 0.0) {
                const double beta = -std::log(std::abs(w.back() / wh)) /
                                    std::log(static_cast<double>(n) / static_cast<double>(n / 2 + 1));
                if (beta > 1.3) {
                    tail = std::abs(w.back()) * (n + 0.5) / (beta - 1.0);
                } else if (beta <= 1.02 && hint == Convergence::Unknown &&
                           growth_streak >= kDivergenceStreak) {
                    res.status = LadderStatus::Divergent;
                    res.value = kInf;
                    return res;
                }
            }
        }
        if (tail + qerr <= tol) {
            const double sign = w.back() < 0 ? -1.0 : 1.0;
            res.value = sum + (ratio < 0.995 ? sign * tail : 0.0);
            res.error = qerr + (ratio < 0.995 ? 0.5 * tail : tail);
            return res;
        }
    }
    res.value = sum;
    res.error = kInf;
    res.status = LadderStatus::Inconclusive;
    return res;
}

}  // namespace detail

/// Integrates g(d) over (0, d0] on windows [d0 2^-(k+1), d0 2^-k].
template <class G>
LadderResult ladder_to_zero(G&& g, double d0, double tol, Convergence hint, int max_windows = 1100) {
    auto window = [&](int k, double wtol, bool& ok, double& qerr) {
        const double hi = std::ldexp(d0, -k);
        const double lo = std::ldexp(d0, -k - 1);
        if (!(lo > 0.0) || !(hi > lo)) {
            ok = false;
            return 0.0;
        }
        const auto r = adaptive(g, lo, hi, wtol, 1e-14, 200);
        qerr += r.error;
        return r.value;
    };
    return detail::run_ladder(window, tol, hint, max_windows);
}

/// Integrates g(x) over [x0, inf) on windows [x0 2^k, x0 2^(k+1)]; x0 > 0.
template <class G>
LadderResult ladder_to_infinity(G&& g, double x0, double tol, Convergence hint, int max_windows = 1100) {
    auto window = [&](int k, double wtol, bool& ok, double& qerr) {
        const double lo = std::ldexp(x0, k);
        const double hi = std::ldexp(x0, k + 1);
        if (!std::isfinite(hi)) {
            ok = false;
            return 0.0;
        }
        const auto r = adaptive(g, lo, hi, wtol, 1e-14, 200);
        qerr += r.error;
        return r.value;
    };
    return detail::run_ladder(window, tol, hint, max_windows);
}

/// Local power-law exponent of |g| near d -> 0 (g takes a distance to the
/// endpoint) or near x -> inf, read off two sample points.
struct OrderEstimate {
    double power = 0.0;
    bool valid = false;
};

template <class G>
OrderEstimate estimate_order_at_zero(G&& g, double scale) {
    const double d1 = scale * 1e-14, d2 = scale * 1e-12;
    const double g1 = std::abs(g(d1)), g2 = std::abs(g(d2));
    if (!std::isfinite(g1) || !std::isfinite(g2)) {
        if (std::isinf(g1)) return {-kInf, true};
        return {};
    }
    if (g1 == 0.0 && g2 == 0.0) return {kInf, true};
    if (g1 == 0.0 || g2 == 0.0) return {};
    return {std::log(g2 / g1) / std::log(d2 / d1), true};
}

template <class G>
OrderEstimate estimate_order_at_infinity(G&& g, double scale) {
    const double x1 = scale * 1e12, x2 = scale * 1e14;
    const double g1 = std::abs(g(x1)), g2 = std::abs(g(x2));
    if (!std::isfinite(g1) || !std::isfinite(g2)) return {};
    if (g1 == 0.0 && g2 == 0.0) return {-kInf, true};
    if (g1 == 0.0 || g2 == 0.0) return {};
    return {std::log(g2 / g1) / std::log(x2 / x1), true};
}

/// Bracketed root of a continuous f with f(a)*f(b) <= 0: bisection steps
/// interleaved with secant steps, until the bracket is below xtol.
template <class F>
double find_root(F&& f, double a, double b, double xtol, int max_iter = 400) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) throw InconclusiveError("root not bracketed");
    bool use_secant = false;
    for (int it = 0; it < max_iter && std::abs(b - a) > xtol; ++it) {
        double m = 0.5 * (a + b);
        if (use_secant && std::isfinite(fa) && std::isfinite(fb) && fb != fa) {
            const double s = b - fb * (b - a) / (fb - fa);
            if (s > std::min(a, b) && s < std::max(a, b)) m = s;
        }
        use_secant = !use_secant;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if (m == a && m == b) break;
    }
    return 0.5 * (a + b);
}

/// Maximum of a unimodal f on [a, b]; returns {argmax, max}.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 120) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters && std::abs(b - a) > 1e-15 * (std::abs(a) + std::abs(b)); ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace hardy::quad
