#include "annuity/solver_unrestricted.hpp"

#include <cmath>

namespace annuity {

namespace {

// F(x) = B1(1-B2)/(B1-B2) x^{B1-1} + B2(B1-1)/(B1-B2) x^{B2-1}; F(1) = 1.
double big_f(const DerivedConstants& k, double x) {
    double den = k.b1 - k.b2;
    return k.b1 * (1.0 - k.b2) / den * std::pow(x, k.b1 - 1.0) +
           k.b2 * (k.b1 - 1.0) / den * std::pow(x, k.b2 - 1.0);
}

// G(x) = (1-B2)/(B1-B2) x^{B1-1} + (B1-1)/(B1-B2) x^{B2-1}.
double big_g(const DerivedConstants& k, double x) {
    double den = k.b1 - k.b2;
    return (1.0 - k.b2) / den * std::pow(x, k.b1 - 1.0) +
           (k.b1 - 1.0) / den * std::pow(x, k.b2 - 1.0);
}

}  // namespace

double UnrestrictedSolution::x_equation_residual(const ModelParams& params,
                                                 const DerivedConstants& consts, double x,
                                                 double a) {
    double lin = (params.c - a) / params.r;
    double ws = safe_level_unrestricted(params, consts, a);
    double surrender = (1.0 - params.p) * a / (params.r + params.lambda_o);
    return big_f(consts, x) * (ws - lin) + lin + surrender;
}

double solve_x_unrestricted(const ModelParams& params, const DerivedConstants& consts) {
    auto residual = [&](double x) {
        return UnrestrictedSolution::x_equation_residual(params, consts, x, 0.0);
    };
    auto [lo, hi] = expand_bracket_up(residual, 1.0);
    return find_root_monotone(residual, lo, hi);
}

UnrestrictedSolution::UnrestrictedSolution(const ModelParams& p, const DerivedConstants& k,
                                           double x)
    : params_(p), consts_(k), x_(x), a_max_(a_max_unrestricted(p, k)) {}

UnrestrictedSolution UnrestrictedSolution::solve(const ModelParams& params) {
    DerivedConstants consts = derive_constants(params);
    double x = solve_x_unrestricted(params, consts);
    return UnrestrictedSolution(params, consts, x);
}

void UnrestrictedSolution::require_in_domain(double a) const {
    if (!(a >= 0.0 && a <= a_max_ + 1e-12 * params_.c))
        throw std::domain_error("UnrestrictedSolution: a outside [0, a_max]");
}

double UnrestrictedSolution::safe_level(double a) const {
    return safe_level_unrestricted(params_, consts_, a);
}

double UnrestrictedSolution::ruin_level(double a) const {
    return ruin_level_unrestricted(params_, consts_, a);
}

double UnrestrictedSolution::y_underbar(double a) const {
    require_in_domain(a);
    double lin = (params_.c - a) / params_.r;
    double ws = safe_level(a);
    double inv = lin + (1.0 - params_.p) * a / (params_.r + params_.lambda_o) +
                 (ws - lin) * big_g(consts_, x_);
    return 1.0 / inv;
}

std::pair<double, double> UnrestrictedSolution::coefficients(double a) const {
    double ys = y_s(a);
    double lin = (params_.c - a) / params_.r;
    double gap = safe_level(a) - lin;  // negative: w_s(a) < (c-a)/r
    double den = consts_.b1 - consts_.b2;
    double d1 = (1.0 - consts_.b2) / den * std::pow(ys, 1.0 - consts_.b1) * gap;
    double d2 = (consts_.b1 - 1.0) / den * std::pow(ys, 1.0 - consts_.b2) * gap;
    return {d1, d2};
}

DualSection UnrestrictedSolution::dual_section(double a) const {
    auto [d1, d2] = coefficients(a);
    return {d1, d2, (params_.c - a) / params_.r, consts_.b1, consts_.b2};
}

UnrestrictedSolution::Eval UnrestrictedSolution::psi_eval(double w, double a) const {
    require_in_domain(a);
    double ws = safe_level(a), wu = ruin_level(a);
    if (w >= ws) return {0.0, w > ws};
    if (w <= wu) return {1.0, w < wu};
    DualSection ds = dual_section(a);
    double ylo = y_s(a), yhi = y_underbar(a);
    double top = ds.slope(ylo), bot = ds.slope(yhi);
    double wc = std::min(std::max(w, bot), top);
    double ystar = invert_dual_derivative([&](double y) { return ds.slope(y); }, wc, ylo, yhi);
    double v = ds.primal(ystar, wc);
    return {std::min(std::max(v, 0.0), 1.0), false};
}

double UnrestrictedSolution::pi_from_dual(double y, double a) const {
    DualSection ds = dual_section(a);
    return -(params_.mu - params_.r) / (params_.sigma * params_.sigma) * y * ds.curvature(y);
}

double UnrestrictedSolution::pi_star(double w, double a) const {
    require_in_domain(a);
    double ws = safe_level(a), wu = ruin_level(a);
    if (!(w > wu && w < ws))
        throw std::domain_error("pi_star: strategy undefined at or beyond the boundaries");
    DualSection ds = dual_section(a);
    double ylo = y_s(a), yhi = y_underbar(a);
    double wc = std::min(std::max(w, ds.slope(yhi)), ds.slope(ylo));
    double ystar = invert_dual_derivative([&](double y) { return ds.slope(y); }, wc, ylo, yhi);
    return pi_from_dual(ystar, a);
}

double UnrestrictedSolution::solve_x_at(double a) const {
    require_in_domain(a);
    auto residual = [&](double x) { return x_equation_residual(params_, consts_, x, a); };
    auto [lo, hi] = expand_bracket_up(residual, 1.0);
    return find_root_monotone(residual, lo, hi);
}

}  // namespace annuity
