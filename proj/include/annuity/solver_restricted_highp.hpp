#pragma once

#include "annuity/dual.hpp"
#include "annuity/model.hpp"

#include <utility>

namespace annuity {

struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

// Closed-form solution with the borrowing restriction w >= 0 when the
// surrender charge satisfies p >= p*.  Dual boundaries y0(a) (at w=0) and
// y_s(a) with p-independent ratio x = y0/y_s.
class RestrictedHighSolution {
public:
    static RestrictedHighSolution solve(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    const DerivedConstants& consts() const { return consts_; }

    double x() const { return x_; }
    double k_exp() const { return k_exp_; }
    double p_star() const { return p_star_; }
    double y0_at_zero() const { return y0_at_zero_; }

    double safe_level(double a) const;
    double y0(double a) const;
    double y_s(double a) const { return y0(a) / x_; }
    std::pair<double, double> coefficients(double a) const;
    DualSection dual_section(double a) const;

    struct Eval {
        double value;
        bool clamped;
    };
    Eval psi_eval(double w, double a) const;
    double psi(double w, double a) const { return psi_eval(w, a).value; }

    double pi_star(double w, double a) const;
    double pi_from_dual(double y, double a) const;

private:
    RestrictedHighSolution(const ModelParams& p, const DerivedConstants& k);
    void require_in_domain(double a) const;

    ModelParams params_;
    DerivedConstants consts_;
    double x_;
    double p_star_;
    double k_exp_;
    double y0_at_zero_;
};

// Free-function pieces, usable without the p >= p* gate (x, p*, y0(0) have no p).
double solve_x_high(const ModelParams& params, const DerivedConstants& consts);
double p_star_high(const ModelParams& params, const DerivedConstants& consts, double x);
// Throws RegimeError when params.p < p* (the low-p solver applies there).
double k_exponent_high(const ModelParams& params, const DerivedConstants& consts, double x);
double y0_at_zero_high(const ModelParams& params, const DerivedConstants& consts, double x);

}  // namespace annuity
