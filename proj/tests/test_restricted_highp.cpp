#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "annuity/solver_restricted_highp.hpp"

#include <cmath>

using namespace annuity;

// Golden values below were frozen from an independent Python prototype run
// before this implementation.

static ModelParams base(double p = 0.5) { return {0.02, 0.06, 0.20, 0.04, 0.04, 1.0, p}; }

TEST_CASE("x equation, p-independence and sanity bound") {
    ModelParams mp = base();
    DerivedConstants k = derive_constants(mp);
    double x = solve_x_high(mp, k);
    CHECK(x == doctest::Approx(1.8244661035504368).epsilon(1e-10));

    // residual of the defining equation
    double den = k.b1 - k.b2;
    double f = k.b1 * (1.0 - k.b2) / den * std::pow(x, k.b1 - 1.0) +
               k.b2 * (k.b1 - 1.0) / den * std::pow(x, k.b2 - 1.0);
    CHECK(std::abs(mp.lambda_o / (mp.r + mp.lambda_o) * f - 1.0) < 1e-10);

    // the equation has no p in it
    ModelParams mp2 = base(0.3), mp3 = base(0.9);
    CHECK(solve_x_high(mp2, k) == x);
    CHECK(solve_x_high(mp3, k) == x);

    // bound that makes y0(0) positive
    CHECK(std::pow(x, k.b1 - 1.0) < (mp.r + mp.lambda_o) / mp.lambda_o);
}

TEST_CASE("critical surrender charge") {
    ModelParams mp = base();
    DerivedConstants k = derive_constants(mp);
    double x = solve_x_high(mp, k);
    double pstar = p_star_high(mp, k, x);
    CHECK(pstar == doctest::Approx(0.2585037948418313).epsilon(1e-10));
    CHECK(pstar > 0.0);
    CHECK(pstar < 1.0);

    // K vanishes exactly at p*
    ModelParams at = base(pstar);
    CHECK(std::abs(k_exponent_high(at, k, x)) < 1e-10);
    ModelParams one = base(1.0);
    CHECK(k_exponent_high(one, k, x) > 0.0);
}

TEST_CASE("exponent K: regime gate, monotonicity, golden values") {
    DerivedConstants k = derive_constants(base());
    double x = solve_x_high(base(), k);
    CHECK_THROWS_AS(k_exponent_high(base(0.1), k, x), RegimeError);
    double k05 = k_exponent_high(base(0.5), k, x);
    double k075 = k_exponent_high(base(0.75), k, x);
    double k1 = k_exponent_high(base(1.0), k, x);
    CHECK(k05 == doctest::Approx(0.32568771556511905).epsilon(1e-10));
    CHECK(k075 == doctest::Approx(0.662843857782559).epsilon(1e-10));
    CHECK(k1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k05 < k075);
    CHECK(k075 < k1);
}

TEST_CASE("y0(0): golden value, positivity, p-independence, alternate formula") {
    ModelParams mp = base();
    DerivedConstants k = derive_constants(mp);
    double x = solve_x_high(mp, k);
    double y00 = y0_at_zero_high(mp, k, x);
    CHECK(y00 > 0.0);
    CHECK(y00 == doctest::Approx(0.08091747413218574).epsilon(1e-10));
    CHECK(y0_at_zero_high(base(0.3), k, x) == y00);
    CHECK(y0_at_zero_high(base(1.0), k, x) == y00);

    // unsimplified five-term form as an independent cross-check
    double ratio = mp.lambda_o / (mp.r + mp.lambda_o);
    double den = k.b1 - k.b2;
    double inv_alt = mp.c / mp.r *
                     (1.0 - ratio * (1.0 - k.b2) / den * std::pow(x, k.b1 - 1.0) -
                      ratio * (k.b1 - 1.0) / den * std::pow(x, k.b2 - 1.0));
    CHECK(1.0 / inv_alt == doctest::Approx(y00).epsilon(1e-12));
}

TEST_CASE("psi: boundary data and golden interior values") {
    RestrictedHighSolution sol = RestrictedHighSolution::solve(base());
    CHECK(std::abs(sol.psi(0.0, 0.0) - 1.0) < 1e-10);
    for (double a : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        CHECK(std::abs(sol.psi(sol.safe_level(a), a)) < 1e-10);
    }
    CHECK(sol.psi(5.0, 0.25) == doctest::Approx(0.4326895511855559).epsilon(1e-10));
    CHECK(sol.psi(0.0, 0.75) == doctest::Approx(0.39266622919413674).epsilon(1e-10));
    // with income, surrender at w=0 rescues: strictly below 1
    CHECK(sol.psi(0.0, 0.75) < 1.0);
    // beyond the wedge is an error; ruin impossible once a covers c
    CHECK_THROWS_AS(sol.psi(-0.5, 0.2), std::domain_error);
    CHECK_THROWS_AS(sol.psi(sol.safe_level(0.2) + 0.5, 0.2), std::domain_error);
    CHECK(sol.psi(3.0, 1.0) == 0.0);

    SUBCASE("the quarter-rescue scenario at the critical charge") {
        double pstar = sol.p_star();
        RestrictedHighSolution crit = RestrictedHighSolution::solve(base(pstar));
        CHECK(crit.psi(0.0, 0.75) == doctest::Approx(0.25).epsilon(0.03 / 0.25));
    }
}

TEST_CASE("psi increases with the surrender charge") {
    double prev = -1.0;
    for (double p : {0.3, 0.5, 0.75, 0.95, 1.0}) {
        RestrictedHighSolution sol = RestrictedHighSolution::solve(base(p));
        double v = sol.psi(0.0, 0.75);
        CHECK(v >= prev - 1e-10);
        prev = v;
    }
    CHECK(prev > 0.9);  // approaches certain ruin as surrender becomes worthless
}

TEST_CASE("investment amount is independent of p") {
    double ref = 0.0;
    for (double p : {0.3, 0.5, 0.75, 1.0}) {
        RestrictedHighSolution sol = RestrictedHighSolution::solve(base(p));
        double pi = sol.pi_star(5.0, 0.25);
        if (ref == 0.0) {
            ref = pi;
            CHECK(pi == doctest::Approx(19.8776474058629).epsilon(1e-9));
        } else {
            CHECK(std::abs(pi - ref) < 1e-8);
        }
    }
}

TEST_CASE("investment amount: positivity, FD self-consistency, boundary error") {
    ModelParams mp = base();
    RestrictedHighSolution sol = RestrictedHighSolution::solve(mp);
    for (int i = 0; i < 5; ++i) {
        double a = 0.18 * i;
        for (int j = 0; j < 5; ++j) {
            double w = (0.05 + 0.2 * j) * sol.safe_level(a);
            CHECK(sol.pi_star(w, a) > 0.0);
        }
    }
    CHECK_THROWS_AS(sol.pi_star(sol.safe_level(0.3), 0.3), std::domain_error);

    double a = 0.25, w = 5.0;
    double h = 1e-4 * sol.safe_level(a);
    double pw = (sol.psi(w + h, a) - sol.psi(w - h, a)) / (2.0 * h);
    double pww = (sol.psi(w + h, a) - 2.0 * sol.psi(w, a) + sol.psi(w - h, a)) / (h * h);
    double fd_pi = -(mp.mu - mp.r) / (mp.sigma * mp.sigma) * pw / pww;
    CHECK(sol.pi_star(w, a) == doctest::Approx(fd_pi).epsilon(1e-4));
}

TEST_CASE("Neumann condition binds at w=0") {
    ModelParams mp = base();
    RestrictedHighSolution sol = RestrictedHighSolution::solve(mp);
    DerivedConstants k = sol.consts();
    for (double a : {0.2, 0.4, 0.6}) {
        double h = 1e-4 * sol.safe_level(a);
        double pw0 = (-3.0 * sol.psi(0.0, a) + 4.0 * sol.psi(h, a) - sol.psi(2.0 * h, a)) /
                     (2.0 * h);
        double ha = 1e-4;
        double pa0 = (sol.psi(0.0, a + ha) - sol.psi(0.0, a - ha)) / (2.0 * ha);
        CHECK(std::abs((1.0 - mp.p) * k.a_bar * pw0 - pa0) < 1e-4);
    }
}

TEST_CASE("auxiliary g decreases for z >= 1") {
    ModelParams mp = base();
    DerivedConstants k = derive_constants(mp);
    RestrictedHighSolution sol = RestrictedHighSolution::solve(mp);
    double K = sol.k_exp();
    double den = k.b1 - k.b2;
    auto g = [&](double z) {
        return -K * (k.b1 - 1.0) * (1.0 - k.b2) / den *
                   (std::pow(z, k.b1 - 1.0) - std::pow(z, k.b2 - 1.0)) -
               ((1.0 - k.b2) / den * std::pow(z, k.b1 - 1.0) +
                (k.b1 - 1.0) / den * std::pow(z, k.b2 - 1.0));
    };
    double prev = g(1.0);
    for (int i = 1; i <= 40; ++i) {
        double z = 1.0 + (sol.x() - 1.0) * i / 40.0;
        CHECK(g(z) <= prev + 1e-14);
        prev = g(z);
    }
}

TEST_CASE("dual boundaries and blow-up near full coverage") {
    RestrictedHighSolution sol = RestrictedHighSolution::solve(base());
    CHECK(sol.k_exp() > 0.0);
    CHECK(sol.y0(0.999) > 5.0 * sol.y0(0.0));
    for (double a : {0.0, 0.5, 0.9}) {
        DualSection ds = sol.dual_section(a);
        double ys = sol.y_s(a), y0 = sol.y0(a);
        CHECK(ys < y0);
        CHECK(std::abs(ds.slope(ys) - sol.safe_level(a)) < 1e-9);
        CHECK(std::abs(ds.slope(y0)) < 1e-9);
        for (int i = 0; i <= 30; ++i) {
            double y = ys + (y0 - ys) * i / 30.0;
            CHECK(ds.curvature(y) < 0.0);
        }
        // psi stays inside [0,1] across the wedge
        for (int i = 0; i <= 10; ++i) {
            double v = sol.psi(sol.safe_level(a) * i / 10.0, a);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}
