#pragma once

#include "annuity/solver_restricted_highp.hpp"
#include "annuity/solver_restricted_lowp.hpp"
#include "annuity/solver_unrestricted.hpp"

#include <variant>

namespace annuity {

enum class Regime {
    unrestricted,
    restricted_high_p,
    restricted_low_p,
};

const char* regime_name(Regime r);

// p >= p* - 1e-12 selects the high-p solver; additionally any p within 1e-8
// of p* is served by the high-p solver (the jump formula degenerates there).
Regime classify(const ModelParams& params, bool restricted);

// Regime-tagged solved object with a uniform evaluation surface.
class RegimeSolution {
public:
    static RegimeSolution solve(const ModelParams& params, bool restricted);

    Regime regime() const { return regime_; }
    const ModelParams& params() const;
    const DerivedConstants& consts() const;

    double psi(double w, double a) const;
    double pi_star(double w, double a) const;
    double safe_level(double a) const;
    // Lower end of the w-interval at income level a (ruin boundary or 0).
    double lower_level(double a) const;
    // Upper end of the admissible a-range (a_max unrestricted, c restricted).
    double a_limit() const;

    const UnrestrictedSolution& unrestricted() const;
    const RestrictedHighSolution& restricted_high() const;
    const RestrictedLowSolution& restricted_low() const;

private:
    using Variant =
        std::variant<UnrestrictedSolution, RestrictedHighSolution, RestrictedLowSolution>;
    RegimeSolution(Regime r, Variant v) : regime_(r), sol_(std::move(v)) {}

    Regime regime_;
    Variant sol_;
};

}  // namespace annuity
