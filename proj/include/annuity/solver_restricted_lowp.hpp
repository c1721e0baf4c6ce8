#pragma once

#include "annuity/dual.hpp"
#include "annuity/model.hpp"
#include "annuity/solver_restricted_highp.hpp"

#include <array>
#include <utility>

namespace annuity {

// Closed-form solution with the borrowing restriction when p < p*.
// Below the purchase boundary w_b(a) = b*(c-a) the dual representation holds
// (region D1); above it the individual buys annuity income down to the
// boundary (region D2), which the jump mapping encodes.
class RestrictedLowSolution {
public:
    static RestrictedLowSolution solve(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    const DerivedConstants& consts() const { return consts_; }

    double x() const { return x_; }
    double b() const { return b_; }
    double k_exp() const { return k_exp_; }
    double p_star() const { return p_star_; }
    double y0_at_zero() const { return y0_at_zero_; }
    std::array<double, 4> alphas() const { return alphas_; }

    double safe_level(double a) const;
    double purchase_boundary(double a) const;  // w_b(a) = b*(c-a)
    bool in_region_d1(double w, double a) const;

    double y0(double a) const;
    double y_b(double a) const { return y0(a) / x_; }
    std::pair<double, double> coefficients(double a) const;
    DualSection dual_section(double a) const;

    struct Jump {
        double delta_a;        // annuity income purchased (0 in D1)
        PortfolioState post;   // state after the purchase
    };
    Jump jump_purchase(double w, double a) const;

    struct Eval {
        double value;
        bool clamped;
    };
    Eval psi_eval(double w, double a) const;
    double psi(double w, double a) const { return psi_eval(w, a).value; }

    // Defined on the interior of D1 only; in D2 throws RegimeError carrying
    // the required purchase.
    double pi_star(double w, double a) const;
    double pi_from_dual(double y, double a) const;

private:
    RestrictedLowSolution(const ModelParams& p, const DerivedConstants& k);
    void require_in_domain(double a) const;

    ModelParams params_;
    DerivedConstants consts_;
    double x_;
    double p_star_;
    std::array<double, 4> alphas_;
    double b_;
    double k_exp_;
    double y0_at_zero_;
};

double solve_x_low(const ModelParams& params, const DerivedConstants& consts);
std::array<double, 4> ode_alphas(const ModelParams& params, const DerivedConstants& consts,
                                 double x);
// "+" root of the alpha quadratic.  The "-" root is exposed for tests.
double purchase_slope_b(const std::array<double, 4>& alphas);
double purchase_slope_b_minus_root(const std::array<double, 4>& alphas);
double k_exponent_low(const ModelParams& params, const DerivedConstants& consts, double x,
                      double b);

}  // namespace annuity
