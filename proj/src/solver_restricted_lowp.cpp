#include "annuity/solver_restricted_lowp.hpp"

#include "annuity/rootfind.hpp"

#include <cmath>
#include <sstream>

namespace annuity {

double solve_x_low(const ModelParams& params, const DerivedConstants& consts) {
    const double b1 = consts.b1, b2 = consts.b2;
    double co = params.lambda_o / (params.r * (params.r + params.lambda_o));
    double rhs = 1.0 / params.r - (1.0 - params.p) / (params.r + params.lambda_o);
    auto residual = [&](double x) {
        double den = b1 - b2;
        double g = (1.0 - b2) / den * std::pow(x, b1 - 1.0) +
                   (b1 - 1.0) / den * std::pow(x, b2 - 1.0);
        return co * g - rhs;
    };
    auto [lo, hi] = expand_bracket_up(residual, 1.0);
    return find_root_monotone(residual, lo, hi);
}

namespace {

struct OdeTerms {
    double t1, t2;      // bracketed combinations recurring in the alpha system
    double e1, e2;      // 1 - x^{1-B1}, 1 - x^{1-B2}
};

OdeTerms ode_terms(const ModelParams& params, const DerivedConstants& consts, double x) {
    const double b1 = consts.b1, b2 = consts.b2;
    double co = params.lambda_o / (params.r * (params.r + params.lambda_o));
    OdeTerms t;
    t.e1 = 1.0 - std::pow(x, 1.0 - b1);
    t.e2 = 1.0 - std::pow(x, 1.0 - b2);
    t.t1 = co * (b1 - 1.0) * b2 / (b1 - b2) * (std::pow(x, b2 - b1) - 1.0) + t.e1 / params.r;
    t.t2 = co * b1 * (1.0 - b2) / (b1 - b2) * (std::pow(x, b1 - b2) - 1.0) + t.e2 / params.r;
    return t;
}

}  // namespace

std::array<double, 4> ode_alphas(const ModelParams& params, const DerivedConstants& consts,
                                 double x) {
    const double b1 = consts.b1, b2 = consts.b2;
    OdeTerms t = ode_terms(params, consts, x);
    double a1 = -((b1 - 1.0) * t.e2 + (1.0 - b2) * t.e1) / params.r;
    double a2 = (b1 - 1.0) * t.t1 + (1.0 - b2) * t.t2;
    double a3 = b1 - b2;
    double a4 = -((b1 - 1.0) * t.t1 * t.e2 + (1.0 - b2) * t.t2 * t.e1) / params.r;
    return {a1, a2, a3, a4};
}

static double slope_root(const std::array<double, 4>& al, double sign) {
    double diff = al[1] - al[0];
    double disc = diff * diff + 4.0 * al[2] * al[3];
    if (disc < 0.0) {
        std::ostringstream os;
        os << "purchase_slope_b: negative discriminant " << disc
           << " (outside the solvable parameter region)";
        throw std::runtime_error(os.str());
    }
    return (diff + sign * std::sqrt(disc)) / (2.0 * al[2]);
}

double purchase_slope_b(const std::array<double, 4>& alphas) { return slope_root(alphas, 1.0); }

double purchase_slope_b_minus_root(const std::array<double, 4>& alphas) {
    return slope_root(alphas, -1.0);
}

double k_exponent_low(const ModelParams& params, const DerivedConstants& consts, double x,
                      double b) {
    OdeTerms t = ode_terms(params, consts, x);
    double num = t.t2 - b;
    double den = (1.0 - consts.b1) * (-b + t.e2 / params.r);
    return num / den;
}

RestrictedLowSolution::RestrictedLowSolution(const ModelParams& p, const DerivedConstants& k)
    : params_(p), consts_(k) {
    double x_high = solve_x_high(p, k);
    p_star_ = p_star_high(p, k, x_high);
    if (p.p >= p_star_ - 1e-12)
        throw RegimeError("RestrictedLowSolution: p >= p*, the high-p solver applies");
    x_ = solve_x_low(p, k);
    alphas_ = ode_alphas(p, k, x_);
    b_ = purchase_slope_b(alphas_);
    k_exp_ = k_exponent_low(p, k, x_, b_);

    const double b1 = k.b1, b2 = k.b2;
    OdeTerms t = ode_terms(p, k, x_);
    double inv = p.c / b1 * std::pow(x_, b1 - 1.0) / (std::pow(x_, b1 - b2) - 1.0) *
                     (-b_ + t.e2 / p.r) +
                 p.c / b2 * std::pow(x_, b2 - 1.0) / (std::pow(x_, b2 - b1) - 1.0) *
                     (-b_ + t.e1 / p.r) +
                 p.c / p.r;
    y0_at_zero_ = 1.0 / inv;
}

RestrictedLowSolution RestrictedLowSolution::solve(const ModelParams& params) {
    return RestrictedLowSolution(params, derive_constants(params));
}

void RestrictedLowSolution::require_in_domain(double a) const {
    if (!(a >= 0.0 && a < params_.c))
        throw std::domain_error("RestrictedLowSolution: a outside [0, c)");
}

double RestrictedLowSolution::safe_level(double a) const {
    return safe_level_restricted(consts_, params_.c, a);
}

double RestrictedLowSolution::purchase_boundary(double a) const {
    require_in_domain(a);
    return b_ * (params_.c - a);
}

bool RestrictedLowSolution::in_region_d1(double w, double a) const {
    double wb = purchase_boundary(a);
    return w <= wb + 1e-12 * (1.0 + std::abs(wb));
}

double RestrictedLowSolution::y0(double a) const {
    require_in_domain(a);
    return std::pow(params_.c / (params_.c - a), k_exp_) * y0_at_zero_;
}

std::pair<double, double> RestrictedLowSolution::coefficients(double a) const {
    const double b1 = consts_.b1, b2 = consts_.b2;
    double yb = y_b(a);
    double lin = (params_.c - a) / params_.r;
    double wb = purchase_boundary(a);
    double x1 = std::pow(x_, 1.0 - b2), x2 = std::pow(x_, 1.0 - b1);
    double d1 = 1.0 / b1 * std::pow(yb, 1.0 - b1) / (std::pow(x_, b1 - b2) - 1.0) *
                (-wb + lin * (1.0 - x1));
    double d2 = 1.0 / b2 * std::pow(yb, 1.0 - b2) / (std::pow(x_, b2 - b1) - 1.0) *
                (-wb + lin * (1.0 - x2));
    return {d1, d2};
}

DualSection RestrictedLowSolution::dual_section(double a) const {
    auto [d1, d2] = coefficients(a);
    return {d1, d2, (params_.c - a) / params_.r, consts_.b1, consts_.b2};
}

RestrictedLowSolution::Jump RestrictedLowSolution::jump_purchase(double w, double a) const {
    require_in_domain(a);
    if (in_region_d1(w, a)) return {0.0, {w, a}};
    double denom = consts_.a_bar - b_;
    if (!(denom > 1e-10 * consts_.a_bar))
        throw RegimeError("jump_purchase: a_bar - b degenerate (p at p*)");
    double da = (w - b_ * (params_.c - a)) / denom;
    return {da, {w - consts_.a_bar * da, a + da}};
}

RestrictedLowSolution::Eval RestrictedLowSolution::psi_eval(double w, double a) const {
    if (!(a >= 0.0)) throw std::domain_error("psi: a must be >= 0");
    if (a >= params_.c * (1.0 - 1e-9)) return {0.0, false};
    double ws = safe_level(a);
    double tol = 1e-9 * (1.0 + ws);
    if (w < -tol || w > ws + tol)
        throw std::domain_error("psi: w outside [0, safe level]");
    bool clamped = (w < 0.0 || w > ws);
    w = std::min(std::max(w, 0.0), ws);
    if (!in_region_d1(w, a)) {
        // Purchase down to the boundary, then evaluate there.
        Jump j = jump_purchase(w, a);
        if (j.post.a >= params_.c * (1.0 - 1e-9)) return {0.0, clamped};
        Eval inner = psi_eval(std::min(j.post.w, purchase_boundary(j.post.a)), j.post.a);
        return {inner.value, clamped || inner.clamped};
    }
    DualSection ds = dual_section(a);
    double ylo = y_b(a), yhi = y0(a);
    double wc = std::min(std::max(w, ds.slope(yhi)), ds.slope(ylo));
    double ystar = invert_dual_derivative([&](double y) { return ds.slope(y); }, wc, ylo, yhi);
    double v = ds.primal(ystar, wc);
    return {std::min(std::max(v, 0.0), 1.0), clamped};
}

double RestrictedLowSolution::pi_from_dual(double y, double a) const {
    DualSection ds = dual_section(a);
    return -(params_.mu - params_.r) / (params_.sigma * params_.sigma) * y * ds.curvature(y);
}

double RestrictedLowSolution::pi_star(double w, double a) const {
    require_in_domain(a);
    if (!in_region_d1(w, a)) {
        std::ostringstream os;
        os << "pi_star: state in the purchase region; buy delta_a = " << jump_purchase(w, a).delta_a
           << " first";
        throw RegimeError(os.str());
    }
    if (!(w >= 0.0))
        throw std::domain_error("pi_star: w must be >= 0");
    DualSection ds = dual_section(a);
    double ylo = y_b(a), yhi = y0(a);
    double wc = std::min(std::max(w, ds.slope(yhi)), ds.slope(ylo));
    double ystar = invert_dual_derivative([&](double y) { return ds.slope(y); }, wc, ylo, yhi);
    return pi_from_dual(ystar, a);
}

}  // namespace annuity
