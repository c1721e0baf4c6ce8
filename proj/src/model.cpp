#include "annuity/model.hpp"

#include <cmath>

namespace annuity {

void ModelParams::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("ModelParams: " + what); };
    if (!(r >= 0.0)) fail("r must satisfy r >= 0");
    if (!(mu > r)) fail("mu must satisfy mu > r");
    if (!(sigma > 0.0)) fail("sigma must satisfy sigma > 0");
    if (!(lambda_s > 0.0)) fail("lambda_s must satisfy lambda_s > 0");
    if (!(lambda_o > 0.0)) fail("lambda_o must satisfy lambda_o > 0");
    if (!(c >= 0.0)) fail("c must satisfy c >= 0");
    if (!(p > 0.0 && p <= 1.0)) fail("p must satisfy 0 < p <= 1");
}

DerivedConstants derive_constants(const ModelParams& params) {
    params.validate();
    DerivedConstants k;
    k.a_bar = 1.0 / (params.r + params.lambda_o);
    double sharpe = (params.mu - params.r) / params.sigma;
    k.m = 0.5 * sharpe * sharpe;
    double q = params.r - params.lambda_s + k.m;
    double disc = std::sqrt(q * q + 4.0 * k.m * params.lambda_s);
    k.b1 = (q + disc) / (2.0 * k.m);
    k.b2 = (q - disc) / (2.0 * k.m);
    return k;
}

double a_max_unrestricted(const ModelParams& params, const DerivedConstants&) {
    return params.c * (params.r + params.lambda_o) / (params.p * params.r + params.lambda_o);
}

double safe_level_unrestricted(const ModelParams& params, const DerivedConstants& consts,
                               double a) {
    double amax = a_max_unrestricted(params, consts);
    if (!(a >= 0.0 && a <= amax + 1e-12 * params.c))
        throw std::domain_error("safe_level_unrestricted: a outside [0, a_max]");
    return params.p * params.c / (params.p * params.r + params.lambda_o) -
           a / (params.r + params.lambda_o);
}

double ruin_level_unrestricted(const ModelParams& params, const DerivedConstants& consts,
                               double a) {
    if (!(a >= 0.0)) throw std::domain_error("ruin_level_unrestricted: a must be >= 0");
    return -(1.0 - params.p) * consts.a_bar * a;
}

double safe_level_restricted(const DerivedConstants& consts, double c, double a) {
    if (!(a >= 0.0 && a < c))
        throw std::domain_error("safe_level_restricted: a outside [0, c)");
    return (c - a) * consts.a_bar;
}

}  // namespace annuity
