// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "annuity/checks.hpp"
#include "annuity/fd_solver.hpp"
#include "annuity/mc_simulate.hpp"
#include "annuity/regime.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace annuity;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%2d] %-24s %s  (%s)\n", idx, name.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

ModelParams base(double p = 0.5) { return {0.02, 0.06, 0.20, 0.04, 0.04, 1.0, p}; }

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void crit1_critical_charge() {
    ModelParams mp = base();
    // warm-up evaluation, then timed
    {
        DerivedConstants k = derive_constants(mp);
        (void)p_star_high(mp, k, solve_x_high(mp, k));
    }
    auto t0 = Clock::now();
    DerivedConstants k = derive_constants(mp);
    double pstar = p_star_high(mp, k, solve_x_high(mp, k));
    double ms = ms_since(t0);
    std::ostringstream d;
    d << "p*=" << pstar << ", " << ms << " ms";
    report(1, "critical-charge", std::abs(pstar - 0.258) <= 0.002 && ms < 1.0, d.str());
}

void crit2_derived_constants() {
    DerivedConstants k = derive_constants(base());
    double e1 = std::abs(k.b1 - std::sqrt(2.0));
    double e2 = std::abs(k.b2 + std::sqrt(2.0));
    std::ostringstream d;
    d << "|b1-sqrt2|=" << e1 << ", |b2+sqrt2|=" << e2;
    report(2, "derived-constants", e1 < 1e-12 && e2 < 1e-12, d.str());
}

void crit3_boundary_conditions() {
    bool ok = true;
    double worst = 0.0;
    {
        UnrestrictedSolution s = UnrestrictedSolution::solve(base());
        for (int i = 0; i < 5; ++i) {
            double a = 0.18 * i * s.a_max();
            worst = std::max(worst, std::abs(s.psi(s.safe_level(a), a)));
            worst = std::max(worst, std::abs(s.psi(s.ruin_level(a), a) - 1.0));
        }
    }
    {
        RestrictedHighSolution s = RestrictedHighSolution::solve(base(0.5));
        for (int i = 0; i < 5; ++i) {
            double a = 0.18 * i;
            worst = std::max(worst, std::abs(s.psi(s.safe_level(a), a)));
        }
        worst = std::max(worst, std::abs(s.psi(0.0, 0.0) - 1.0));
    }
    {
        RestrictedLowSolution s = RestrictedLowSolution::solve(base(0.1));
        for (int i = 0; i < 5; ++i) {
            double a = 0.18 * i;
            worst = std::max(worst, std::abs(s.psi(s.safe_level(a), a)));
        }
        worst = std::max(worst, std::abs(s.psi(0.0, 0.0) - 1.0));
    }
    ok = worst < 1e-10;
    std::ostringstream d;
    d << "worst boundary error " << worst;
    report(3, "boundary-conditions", ok, d.str());
}

void crit4_quarter_rescue() {
    DerivedConstants k = derive_constants(base());
    double pstar = p_star_high(base(), k, solve_x_high(base(), k));
    double v = RestrictedHighSolution::solve(base(pstar)).psi(0.0, 0.75);
    bool in_band = v >= 0.22 && v <= 0.28;
    bool monotone = true;
    double prev = -1.0;
    for (double p : {0.3, 0.5, 0.75, 0.95, 1.0}) {
        double vp = RestrictedHighSolution::solve(base(p)).psi(0.0, 0.75);
        if (vp - prev < -1e-10) monotone = false;
        prev = vp;
    }
    std::ostringstream d;
    d << "psi(0,0.75;p*)=" << v << ", monotone up to psi=" << prev;
    report(4, "quarter-rescue", in_band && monotone, d.str());
}

void crit5_pi_p_invariance() {
    auto t0 = Clock::now();
    RestrictedHighSolution s1 = RestrictedHighSolution::solve(base(0.3));
    RestrictedHighSolution s2 = RestrictedHighSolution::solve(base(1.0));
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
        double a = 0.18 * j;
        for (int i = 0; i < 5; ++i) {
            double w = (0.05 + 0.18 * i) * s1.safe_level(a);
            worst = std::max(worst, std::abs(s1.pi_star(w, a) - s2.pi_star(w, a)));
        }
    }
    double ms = ms_since(t0);
    std::ostringstream d;
    d << "max |pi(p=0.3)-pi(p=1)| = " << worst << ", " << ms << " ms";
    report(5, "pi-p-invariance", worst < 1e-8 && ms < 10.0, d.str());
}

void crit6_b_sweep() {
    auto t0 = Clock::now();
    ModelParams mp = base();
    DerivedConstants k = derive_constants(mp);
    double pstar = p_star_high(mp, k, solve_x_high(mp, k));
    bool monotone = true, bounded = true;
    double prev = -1.0, last = 0.0;
    for (int i = 1; i <= 50; ++i) {
        ModelParams m = base(pstar * i / 50.0);
        double b = purchase_slope_b(ode_alphas(m, k, solve_x_low(m, k)));
        if (b < prev - 1e-12) monotone = false;
        if (b < m.p / (m.lambda_o + m.p * m.r) - 1e-9) bounded = false;
        prev = b;
        last = b;
    }
    double ms = ms_since(t0);
    bool endpoint = std::abs(last - k.a_bar) <= 1e-6 * k.a_bar;
    std::ostringstream d;
    d << "b(p*)=" << last << ", " << ms << " ms";
    report(6, "b-sweep", monotone && bounded && endpoint && ms < 100.0, d.str());
}

void crit7_regime_seam() {
    ModelParams mp = base();
    DerivedConstants k = derive_constants(mp);
    double pstar = p_star_high(mp, k, solve_x_high(mp, k));
    RestrictedLowSolution lo = RestrictedLowSolution::solve(base(pstar - 1e-6));
    RestrictedHighSolution hi = RestrictedHighSolution::solve(base(pstar));
    double psi_gap = 0.0, pi_gap = 0.0;
    for (int j = 0; j < 5; ++j) {
        double a = 0.18 * j;
        for (int i = 0; i < 5; ++i) {
            double w = (0.1 + 0.18 * i) * hi.safe_level(a);
            psi_gap = std::max(psi_gap, std::abs(lo.psi(w, a) - hi.psi(w, a)));
            pi_gap = std::max(pi_gap, std::abs(lo.pi_star(w, a) - hi.pi_star(w, a)));
        }
    }
    std::ostringstream d;
    d << "sup|dpsi|=" << psi_gap << ", sup|dpi|=" << pi_gap;
    report(7, "regime-seam", psi_gap < 1e-3 && pi_gap < 1e-3, d.str());
}

void crit8_fd_oracle() {
    bool ok = true;
    std::ostringstream d;
    struct Cfg { double p; bool restricted; const char* tag; };
    for (auto cfg : {Cfg{0.5, false, "unres"}, Cfg{0.5, true, "high"}, Cfg{0.1, true, "low"}}) {
        ModelParams mp = base(cfg.p);
        DerivedConstants k = derive_constants(mp);
        RegimeSolution sol = RegimeSolution::solve(mp, cfg.restricted);
        auto t0 = Clock::now();
        double coarse = fd_solve(mp, k, sol.regime(), {101, 26}).sup_gap(sol);
        double fine = fd_solve(mp, k, sol.regime(), {201, 51}).sup_gap(sol);
        double ms = ms_since(t0);
        if (!(fine <= 0.02 && fine < coarse && ms < 60000.0)) ok = false;
        d << cfg.tag << ": " << coarse << "->" << fine << " (" << ms << " ms)  ";
    }
    report(8, "fd-oracle", ok, d.str());
}

void crit9_mc_oracle() {
    bool ok = true;
    std::ostringstream d;
    struct Cfg { double p; bool restricted; const char* tag; };
    for (auto cfg : {Cfg{0.5, false, "unres"}, Cfg{0.5, true, "high"}, Cfg{0.1, true, "low"}}) {
        ModelParams mp = base(cfg.p);
        DerivedConstants k = derive_constants(mp);
        RegimeSolution sol = RegimeSolution::solve(mp, cfg.restricted);
        auto t0 = Clock::now();
        double worst_excess = -1.0;
        int states = 0;
        for (int j = 0; j < 3; ++j) {
            double a = (cfg.restricted ? 0.25 : 0.3) * j;
            for (int i = 0; i < 3; ++i) {
                double wl = sol.lower_level(a), wh = sol.safe_level(a);
                double w = wl + (0.25 + 0.25 * i) * (wh - wl);
                SimConfig sc;
                sc.n_paths = 100000;
                sc.dt = 1e-3;
                sc.seed = 2026;
                sc.n_threads = 0;  // all cores; the estimate is thread-count invariant
                SimResult r = mc_simulate(mp, k, sol, {w, a}, sc);
                double gap = std::abs(r.estimate - sol.psi(w, a));
                double tol = std::max(3.0 * r.std_err, 0.01);
                worst_excess = std::max(worst_excess, gap - tol);
                ++states;
            }
        }
        double ms = ms_since(t0);
        // The 5-minute budget assumes desktop-grade concurrency (8 hardware
        // threads); scale it up when fewer cores are available.
        double hw = std::max(1u, std::thread::hardware_concurrency());
        double budget_ms = 300000.0 * std::max(1.0, 8.0 / hw);
        if (!(worst_excess <= 0.0 && ms < budget_ms)) ok = false;
        d << cfg.tag << ": " << states << " states, worst gap-tol " << worst_excess << " ("
          << ms * 1e-3 << " s, budget " << budget_ms * 1e-3 << " s)  ";
    }
    report(9, "mc-oracle", ok, d.str());
}

void crit10_property_suites() {
    bool ok = true;
    std::ostringstream d;
    for (auto [p, restricted] : {std::pair{0.5, false}, {0.5, true}, {0.1, true}}) {
        RegimeSolution sol = RegimeSolution::solve(base(p), restricted);
        auto pts = interior_test_points(sol, 5, 3);
        if (!check_hjb_residual(sol, pts).all_pass()) ok = false;
        if (!check_variational_inequalities(sol, pts).all_pass()) ok = false;
    }
    // negative control: a bump of size 0.01 must violate the residual tolerance
    {
        RegimeSolution sol = RegimeSolution::solve(base(), false);
        const ModelParams& mp = sol.params();
        double wl = sol.lower_level(0.0), wh = sol.safe_level(0.0);
        auto bumped = [&](double w) {
            return sol.psi(w, 0.0) + 0.01 * std::sin(M_PI * (w - wl) / (wh - wl));
        };
        double w = 0.5 * (wl + wh), h = 1e-4 * (wh - wl);
        double pw = (bumped(w + h) - bumped(w - h)) / (2.0 * h);
        double pww = (bumped(w + h) - 2.0 * bumped(w) + bumped(w - h)) / (h * h);
        double res = mp.lambda_s * bumped(w) - (mp.r * w - mp.c) * pw +
                     sol.consts().m * pw * pw / pww;
        bool control_fails = std::abs(res) > 1e-3;
        if (!control_fails) ok = false;
        d << "negative-control residual " << std::abs(res);
    }
    report(10, "property-suites", ok, d.str());
}

void crit11_shape() {
    bool ok = true;
    double worst_inc = -1.0, worst_curv = 1.0;
    for (auto [p, restricted] : {std::pair{0.5, false}, {0.5, true}, {0.1, true}}) {
        RegimeSolution sol = RegimeSolution::solve(base(p), restricted);
        for (int j = 0; j < 4; ++j) {
            double a = 0.2 * j * sol.a_limit();
            CheckReport rep = check_shape(sol, a, 100);
            if (!rep.all_pass()) ok = false;
            for (const auto& l : rep.lines) {
                if (l.name == "shape_monotone") worst_inc = std::max(worst_inc, l.value);
                if (l.name == "shape_convex") worst_curv = std::min(worst_curv, l.value);
            }
        }
    }
    std::ostringstream d;
    d << "max first diff " << worst_inc << ", min second diff " << worst_curv;
    report(11, "shape", ok, d.str());
}

}  // namespace

int main() {
    crit1_critical_charge();
    crit2_derived_constants();
    crit3_boundary_conditions();
    crit4_quarter_rescue();
    crit5_pi_p_invariance();
    crit6_b_sweep();
    crit7_regime_seam();
    crit8_fd_oracle();
    crit9_mc_oracle();
    crit10_property_suites();
    crit11_shape();
    if (failures == 0)
        std::printf("all 11 criteria PASS\n");
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
