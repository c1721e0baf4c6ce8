#pragma once

#include "annuity/dual.hpp"
#include "annuity/model.hpp"
#include "annuity/rootfind.hpp"

namespace annuity {

// Closed-form solution when borrowing against the annuity is allowed.
// The dual boundary ratio x = y_underbar/y_s is a constant independent of a;
// the coefficients D1(a), D2(a) and boundaries follow from it.
class UnrestrictedSolution {
public:
    static UnrestrictedSolution solve(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    const DerivedConstants& consts() const { return consts_; }

    double x() const { return x_; }
    double a_max() const { return a_max_; }
    double safe_level(double a) const;
    double ruin_level(double a) const;

    double y_underbar(double a) const;
    double y_s(double a) const { return y_underbar(a) / x_; }
    // (d1, d2), both strictly negative.
    std::pair<double, double> coefficients(double a) const;
    DualSection dual_section(double a) const;

    struct Eval {
        double value;
        bool clamped;  // w fell outside [ruin_level, safe_level] and was clamped
    };
    Eval psi_eval(double w, double a) const;
    double psi(double w, double a) const { return psi_eval(w, a).value; }

    // Throws std::domain_error at or beyond the boundaries.
    double pi_star(double w, double a) const;
    // Dual-variable form, well defined at the interval endpoints.
    double pi_from_dual(double y, double a) const;

    // Residual of the x-equation at a general income level (debug / drift check).
    static double x_equation_residual(const ModelParams& params, const DerivedConstants& consts,
                                      double x, double a);
    // Debug re-solve of x at income level a; the result must not depend on a.
    double solve_x_at(double a) const;

private:
    UnrestrictedSolution(const ModelParams& p, const DerivedConstants& k, double x);
    void require_in_domain(double a) const;

    ModelParams params_;
    DerivedConstants consts_;
    double x_;
    double a_max_;
};

double solve_x_unrestricted(const ModelParams& params, const DerivedConstants& consts);

}  // namespace annuity
