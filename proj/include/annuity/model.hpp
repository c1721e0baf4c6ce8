#pragma once

#include <stdexcept>
#include <string>

namespace annuity {

// Market and preference primitives.  Rates are per year, sigma per sqrt(year),
// c in wealth units per year, p a dimensionless surrender-charge fraction.
struct ModelParams {
    double r = 0.02;
    double mu = 0.06;
    double sigma = 0.20;
    double lambda_s = 0.04;
    double lambda_o = 0.04;
    double c = 1.0;
    double p = 0.5;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

// Constants computed once from ModelParams and shared by every formula.
struct DerivedConstants {
    double a_bar;  // annuity price per $1/yr of income, 1/(r+lambda_o)
    double m;      // half squared Sharpe ratio
    double b1;     // larger dual exponent, > 1
    double b2;     // smaller dual exponent, < 0
};

struct PortfolioState {
    double w;  // liquid wealth
    double a;  // annuity income rate
};

DerivedConstants derive_constants(const ModelParams& params);

// Region geometry.
double a_max_unrestricted(const ModelParams& params, const DerivedConstants& consts);
double safe_level_unrestricted(const ModelParams& params, const DerivedConstants& consts, double a);
double ruin_level_unrestricted(const ModelParams& params, const DerivedConstants& consts, double a);
double safe_level_restricted(const DerivedConstants& consts, double c, double a);

}  // namespace annuity
