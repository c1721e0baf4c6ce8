#include "annuity/regime.hpp"

namespace annuity {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::unrestricted: return "unrestricted";
        case Regime::restricted_high_p: return "restricted: p >= p*";
        case Regime::restricted_low_p: return "restricted: p < p*";
    }
    return "?";
}

Regime classify(const ModelParams& params, bool restricted) {
    params.validate();
    if (!restricted) return Regime::unrestricted;
    DerivedConstants consts = derive_constants(params);
    double x = solve_x_high(params, consts);
    double pstar = p_star_high(params, consts, x);
    if (params.p >= pstar - 1e-12 || std::abs(params.p - pstar) < 1e-8)
        return Regime::restricted_high_p;
    return Regime::restricted_low_p;
}

RegimeSolution RegimeSolution::solve(const ModelParams& params, bool restricted) {
    Regime r = classify(params, restricted);
    switch (r) {
        case Regime::unrestricted:
            return RegimeSolution(r, UnrestrictedSolution::solve(params));
        case Regime::restricted_high_p:
            return RegimeSolution(r, RestrictedHighSolution::solve(params));
        case Regime::restricted_low_p:
        default:
            return RegimeSolution(r, RestrictedLowSolution::solve(params));
    }
}

const ModelParams& RegimeSolution::params() const {
    return std::visit([](const auto& s) -> const ModelParams& { return s.params(); }, sol_);
}

const DerivedConstants& RegimeSolution::consts() const {
    return std::visit([](const auto& s) -> const DerivedConstants& { return s.consts(); }, sol_);
}

double RegimeSolution::psi(double w, double a) const {
    return std::visit([&](const auto& s) { return s.psi(w, a); }, sol_);
}

double RegimeSolution::pi_star(double w, double a) const {
    return std::visit([&](const auto& s) { return s.pi_star(w, a); }, sol_);
}

double RegimeSolution::safe_level(double a) const {
    return std::visit([&](const auto& s) { return s.safe_level(a); }, sol_);
}

double RegimeSolution::lower_level(double a) const {
    if (regime_ == Regime::unrestricted) return unrestricted().ruin_level(a);
    return 0.0;
}

double RegimeSolution::a_limit() const {
    if (regime_ == Regime::unrestricted) return unrestricted().a_max();
    return params().c;
}

const UnrestrictedSolution& RegimeSolution::unrestricted() const {
    return std::get<UnrestrictedSolution>(sol_);
}

const RestrictedHighSolution& RegimeSolution::restricted_high() const {
    return std::get<RestrictedHighSolution>(sol_);
}

const RestrictedLowSolution& RegimeSolution::restricted_low() const {
    return std::get<RestrictedLowSolution>(sol_);
}

}  // namespace annuity
