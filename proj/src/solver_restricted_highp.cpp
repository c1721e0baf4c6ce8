#include "annuity/solver_restricted_highp.hpp"

#include "annuity/rootfind.hpp"

#include <cmath>

namespace annuity {

double solve_x_high(const ModelParams& params, const DerivedConstants& consts) {
    const double b1 = consts.b1, b2 = consts.b2;
    double ratio = params.lambda_o / (params.r + params.lambda_o);
    auto residual = [&](double x) {
        double den = b1 - b2;
        double f = b1 * (1.0 - b2) / den * std::pow(x, b1 - 1.0) +
                   b2 * (b1 - 1.0) / den * std::pow(x, b2 - 1.0);
        return ratio * f - 1.0;
    };
    auto [lo, hi] = expand_bracket_up(residual, 1.0);
    return find_root_monotone(residual, lo, hi);
}

double p_star_high(const ModelParams& params, const DerivedConstants& consts, double x) {
    const double b2 = consts.b2;
    return 1.0 / b2 -
           (1.0 - b2) / b2 * (params.lambda_o / params.r) * (std::pow(x, consts.b1 - 1.0) - 1.0);
}

double k_exponent_high(const ModelParams& params, const DerivedConstants& consts, double x) {
    double pstar = p_star_high(params, consts, x);
    if (params.p < pstar - 1e-12)
        throw RegimeError("k_exponent_high: p < p*, the low-p solver applies");
    double co = params.lambda_o / (params.r * (params.r + params.lambda_o));
    double xb1 = std::pow(x, consts.b1 - 1.0);
    double num = -consts.b2 / (1.0 - consts.b2) * (1.0 - params.p) / (params.r + params.lambda_o) +
                 co * xb1 - 1.0 / params.r;
    double den = co * xb1 - 1.0 / params.r;
    return num / den;
}

double y0_at_zero_high(const ModelParams& params, const DerivedConstants& consts, double x) {
    double ratio = params.lambda_o / (params.r + params.lambda_o);
    double inv = (params.c / params.r) * (-(1.0 - consts.b2) / consts.b2) *
                 (1.0 - ratio * std::pow(x, consts.b1 - 1.0));
    return 1.0 / inv;
}

RestrictedHighSolution::RestrictedHighSolution(const ModelParams& p, const DerivedConstants& k)
    : params_(p), consts_(k) {
    x_ = solve_x_high(p, k);
    p_star_ = p_star_high(p, k, x_);
    k_exp_ = k_exponent_high(p, k, x_);
    y0_at_zero_ = y0_at_zero_high(p, k, x_);
}

RestrictedHighSolution RestrictedHighSolution::solve(const ModelParams& params) {
    return RestrictedHighSolution(params, derive_constants(params));
}

void RestrictedHighSolution::require_in_domain(double a) const {
    if (!(a >= 0.0 && a < params_.c))
        throw std::domain_error("RestrictedHighSolution: a outside [0, c)");
}

double RestrictedHighSolution::safe_level(double a) const {
    return safe_level_restricted(consts_, params_.c, a);
}

double RestrictedHighSolution::y0(double a) const {
    require_in_domain(a);
    return std::pow(params_.c / (params_.c - a), k_exp_) * y0_at_zero_;
}

std::pair<double, double> RestrictedHighSolution::coefficients(double a) const {
    double ys = y_s(a);
    double co = params_.lambda_o / (params_.r * (params_.r + params_.lambda_o));
    double scale = co * (params_.c - a);
    double den = consts_.b1 - consts_.b2;
    double d1 = -(1.0 - consts_.b2) / den * scale * std::pow(ys, 1.0 - consts_.b1);
    double d2 = -(consts_.b1 - 1.0) / den * scale * std::pow(ys, 1.0 - consts_.b2);
    return {d1, d2};
}

DualSection RestrictedHighSolution::dual_section(double a) const {
    auto [d1, d2] = coefficients(a);
    return {d1, d2, (params_.c - a) / params_.r, consts_.b1, consts_.b2};
}

RestrictedHighSolution::Eval RestrictedHighSolution::psi_eval(double w, double a) const {
    if (!(a >= 0.0)) throw std::domain_error("psi: a must be >= 0");
    // At a >= c the consumption is covered by annuity income and ruin is impossible.
    if (a >= params_.c * (1.0 - 1e-9)) return {0.0, false};
    double ws = safe_level(a);
    double tol = 1e-9 * (1.0 + ws);
    if (w < -tol || w > ws + tol)
        throw std::domain_error("psi: w outside [0, safe level]");
    bool clamped = (w < 0.0 || w > ws);
    if (w >= ws) return {0.0, clamped};
    DualSection ds = dual_section(a);
    double ylo = y_s(a), yhi = y0(a);
    double wc = std::min(std::max(w, ds.slope(yhi)), ds.slope(ylo));
    double ystar = invert_dual_derivative([&](double y) { return ds.slope(y); }, wc, ylo, yhi);
    double v = ds.primal(ystar, wc);
    return {std::min(std::max(v, 0.0), 1.0), clamped};
}

double RestrictedHighSolution::pi_from_dual(double y, double a) const {
    DualSection ds = dual_section(a);
    return -(params_.mu - params_.r) / (params_.sigma * params_.sigma) * y * ds.curvature(y);
}

double RestrictedHighSolution::pi_star(double w, double a) const {
    require_in_domain(a);
    double ws = safe_level(a);
    if (!(w >= 0.0 && w < ws))
        throw std::domain_error("pi_star: strategy undefined outside [0, safe level)");
    DualSection ds = dual_section(a);
    double ylo = y_s(a), yhi = y0(a);
    double wc = std::min(std::max(w, ds.slope(yhi)), ds.slope(ylo));
    double ystar = invert_dual_derivative([&](double y) { return ds.slope(y); }, wc, ylo, yhi);
    return pi_from_dual(ystar, a);
}

}  // namespace annuity
