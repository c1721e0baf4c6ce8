#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace annuity {

struct RootConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_iter = 200;
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    double last_lo, last_hi;
    ConvergenceError(const std::string& msg, double lo, double hi)
        : std::runtime_error(msg), last_lo(lo), last_hi(hi) {}
};

// Bisection on a bracketed, strictly monotone f with a final secant polish.
// Deterministic for fixed inputs.
template <class F>
double find_root_monotone(F&& f, double lo, double hi, RootConfig cfg = {}) {
    if (cfg.abs_tol <= 0 || cfg.rel_tol <= 0 || cfg.max_iter < 1)
        throw std::invalid_argument("RootConfig: tolerances must be > 0 and max_iter >= 1");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw BracketError("find_root_monotone: no sign change on bracket");
    int it = 0;
    while (hi - lo > cfg.abs_tol + cfg.rel_tol * std::min(std::abs(lo), std::abs(hi))) {
        if (++it > cfg.max_iter)
            throw ConvergenceError("find_root_monotone: max_iter exceeded", lo, hi);
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at representable limit
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid; flo = fm;
        } else {
            hi = mid; fhi = fm;
        }
    }
    // Secant polish inside the final bracket.
    if (flo != fhi) {
        double s = lo - flo * (hi - lo) / (fhi - flo);
        if (s > lo && s < hi) return s;
    }
    return 0.5 * (lo + hi);
}

// Geometric doubling from lo until f changes sign.
template <class F>
std::pair<double, double> expand_bracket_up(F&& f, double lo = 1.0) {
    double flo = f(lo);
    double hi = 2.0 * lo;
    for (int k = 0; k < 64; ++k) {
        if ((f(hi) > 0) != (flo > 0)) return {lo, hi};
        hi *= 2.0;
    }
    throw BracketError("expand_bracket_up: no sign change by 2^64 (invalid parameters?)");
}

// Inverts a strictly decreasing dual derivative: finds y in [y_lo, y_hi]
// with psi_hat_y(y) = w.  The caller must clamp w into range first.
template <class F>
double invert_dual_derivative(F&& psi_hat_y, double w, double y_lo, double y_hi,
                              RootConfig cfg = {}) {
    double top = psi_hat_y(y_lo), bot = psi_hat_y(y_hi);
    if (w > top || w < bot)
        throw std::domain_error("invert_dual_derivative: w outside dual derivative range");
    if (w == top) return y_lo;
    if (w == bot) return y_hi;
    return find_root_monotone([&](double y) { return psi_hat_y(y) - w; }, y_lo, y_hi, cfg);
}

}  // namespace annuity
