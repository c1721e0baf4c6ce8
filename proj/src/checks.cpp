#include "annuity/checks.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace annuity {

namespace {

std::string loc(double w, double a) {
    std::ostringstream os;
    os << std::setprecision(6) << "w=" << w << ",a=" << a;
    return os.str();
}

struct Derivs {
    double psi, pw, pww, pa;
};

// Central differences of psi; h scales with the local interval lengths.
Derivs fd_derivs(const RegimeSolution& sol, double w, double a, bool one_sided_w = false) {
    double hw = 1e-4 * std::max(sol.safe_level(a) - sol.lower_level(a), 1e-8);
    double ha = 1e-4 * sol.a_limit();
    Derivs d;
    d.psi = sol.psi(w, a);
    if (one_sided_w) {
        double p1 = sol.psi(w + hw, a), p2 = sol.psi(w + 2 * hw, a);
        d.pw = (-3.0 * d.psi + 4.0 * p1 - p2) / (2.0 * hw);
        d.pww = (d.psi - 2.0 * p1 + p2) / (hw * hw);
    } else {
        double pp = sol.psi(w + hw, a), pm = sol.psi(w - hw, a);
        d.pw = (pp - pm) / (2.0 * hw);
        d.pww = (pp - 2.0 * d.psi + pm) / (hw * hw);
    }
    if (a - ha >= 0.0)
        d.pa = (sol.psi(w, a + ha) - sol.psi(w, a - ha)) / (2.0 * ha);
    else
        d.pa = (sol.psi(w, a + ha) - d.psi) / ha;
    return d;
}

}  // namespace

bool CheckReport::all_pass() const {
    for (const auto& l : lines)
        if (!l.skipped && !l.pass) return false;
    return true;
}

void CheckReport::print(std::ostream& os) const {
    for (const auto& l : lines) {
        os << "CHECK " << l.name << " " << l.location << " " << std::setprecision(10) << l.value
           << " " << l.threshold << " " << (l.skipped ? "SKIP" : (l.pass ? "PASS" : "FAIL"))
           << "\n";
    }
}

void CheckReport::append(const CheckReport& other) {
    lines.insert(lines.end(), other.lines.begin(), other.lines.end());
}

std::vector<PortfolioState> interior_test_points(const RegimeSolution& sol, int n_w, int n_a) {
    std::vector<PortfolioState> pts;
    double a_top = 0.9 * sol.a_limit();
    for (int j = 0; j < n_a; ++j) {
        double a = (n_a == 1) ? 0.0 : a_top * j / (n_a - 1);
        double wl = sol.lower_level(a), wh = sol.safe_level(a);
        for (int i = 0; i < n_w; ++i) {
            double f = 0.1 + 0.8 * ((n_w == 1) ? 0.5 : static_cast<double>(i) / (n_w - 1));
            pts.push_back({wl + f * (wh - wl), a});
        }
    }
    return pts;
}

CheckReport check_hjb_residual(const RegimeSolution& sol,
                               const std::vector<PortfolioState>& points) {
    CheckReport rep;
    const ModelParams& mp = sol.params();
    const double tol = 1e-4;
    for (const auto& pt : points) {
        double wl = sol.lower_level(pt.a), wh = sol.safe_level(pt.a);
        double margin = 1e-3 * (wh - wl);
        bool interior = pt.w > wl + margin && pt.w < wh - margin;
        if (interior && sol.regime() == Regime::restricted_low_p)
            interior = pt.w < sol.restricted_low().purchase_boundary(pt.a) - margin;
        if (!interior) {
            rep.lines.push_back({"hjb_residual", loc(pt.w, pt.a), 0.0, tol, true, true});
            continue;
        }
        Derivs d = fd_derivs(sol, pt.w, pt.a);
        double minimized = (d.pww > 0) ? -sol.consts().m * d.pw * d.pw / d.pww : 0.0;
        double res = mp.lambda_s * d.psi - (mp.r * pt.w - mp.c + pt.a) * d.pw - minimized;
        rep.lines.push_back({"hjb_residual", loc(pt.w, pt.a), std::abs(res), tol,
                             std::abs(res) < tol, false});
    }
    return rep;
}

CheckReport check_variational_inequalities(const RegimeSolution& sol,
                                           const std::vector<PortfolioState>& points) {
    CheckReport rep;
    const ModelParams& mp = sol.params();
    const double abar = sol.consts().a_bar;
    const double slack_tol = 1e-6;
    const double bind_tol = 1e-4;
    for (const auto& pt : points) {
        double wl = sol.lower_level(pt.a), wh = sol.safe_level(pt.a);
        double margin = 1e-3 * (wh - wl);
        if (!(pt.w > wl + margin && pt.w < wh - margin)) {
            rep.lines.push_back({"vi_buy", loc(pt.w, pt.a), 0.0, slack_tol, true, true});
            continue;
        }
        Derivs d = fd_derivs(sol, pt.w, pt.a);
        double s1 = abar * d.pw - d.pa;            // buy constraint, must be <= 0
        double s2 = d.pa - (1.0 - mp.p) * abar * d.pw;  // sell constraint, must be <= 0
        rep.lines.push_back({"vi_buy", loc(pt.w, pt.a), s1, slack_tol, s1 <= slack_tol, false});
        rep.lines.push_back({"vi_sell", loc(pt.w, pt.a), s2, slack_tol, s2 <= slack_tol, false});
        if (sol.regime() == Regime::restricted_low_p &&
            pt.w > sol.restricted_low().purchase_boundary(pt.a) + margin) {
            // Purchase region: the buy constraint binds.
            rep.lines.push_back({"vi_buy_binding", loc(pt.w, pt.a), std::abs(s1), bind_tol,
                                 std::abs(s1) < bind_tol, false});
        }
    }
    if (sol.regime() == Regime::restricted_high_p) {
        // Neumann condition at w=0: the sell constraint binds there.
        for (int j = 0; j < 5; ++j) {
            double a = 0.15 + 0.15 * j;  // fractions of a_limit below
            a *= sol.a_limit();
            Derivs d = fd_derivs(sol, 0.0, a, /*one_sided_w=*/true);
            double s2 = d.pa - (1.0 - mp.p) * abar * d.pw;
            rep.lines.push_back({"vi_sell_binding_w0", loc(0.0, a), std::abs(s2), bind_tol,
                                 std::abs(s2) < bind_tol, false});
        }
    }
    return rep;
}

CheckReport check_shape(const RegimeSolution& sol, double a, int n_points) {
    CheckReport rep;
    double wl = sol.lower_level(a), wh = sol.safe_level(a);
    std::vector<double> psi(n_points);
    double h = (wh - wl) / (n_points - 1);
    double out_of_range = 0.0;
    for (int i = 0; i < n_points; ++i) {
        psi[i] = sol.psi(wl + i * h, a);
        out_of_range = std::max({out_of_range, -psi[i], psi[i] - 1.0});
    }
    rep.lines.push_back({"shape_range", loc(wl, a), out_of_range, 0.0, out_of_range <= 0.0, false});

    double max_inc = -1.0, min_curv = 1.0;
    for (int i = 0; i + 1 < n_points; ++i) max_inc = std::max(max_inc, psi[i + 1] - psi[i]);
    for (int i = 1; i + 1 < n_points; ++i)
        min_curv = std::min(min_curv, psi[i + 1] - 2.0 * psi[i] + psi[i - 1]);
    rep.lines.push_back(
        {"shape_monotone", loc(wl, a), max_inc, 1e-12, max_inc <= 1e-12, false});
    rep.lines.push_back({"shape_convex", loc(wl, a), min_curv, -1e-8, min_curv >= -1e-8, false});

    double right = psi[n_points - 1];
    rep.lines.push_back({"shape_psi_at_safe", loc(wh, a), right, 1e-10, std::abs(right) < 1e-10,
                         false});
    bool left_is_one = (sol.regime() == Regime::unrestricted) || a == 0.0;
    if (left_is_one)
        rep.lines.push_back({"shape_psi_at_lower", loc(wl, a), psi[0], 1e-10,
                             std::abs(psi[0] - 1.0) < 1e-10, false});

    // Positivity of the investment amount on the diffusion region's interior.
    double wb = (sol.regime() == Regime::restricted_low_p)
                    ? sol.restricted_low().purchase_boundary(a)
                    : wh;
    double min_pi = 1e300;
    for (int i = 1; i < 20; ++i) {
        double w = wl + (wb - wl) * i / 20.0;
        min_pi = std::min(min_pi, sol.pi_star(w, a));
    }
    rep.lines.push_back({"shape_pi_positive", loc(wl, a), min_pi, 0.0, min_pi > 0.0, false});

    // Dual concavity along the y-interval.
    DualSection ds{};
    double ylo, yhi;
    switch (sol.regime()) {
        case Regime::unrestricted: {
            const auto& s = sol.unrestricted();
            ds = s.dual_section(a); ylo = s.y_s(a); yhi = s.y_underbar(a);
            break;
        }
        case Regime::restricted_high_p: {
            const auto& s = sol.restricted_high();
            ds = s.dual_section(a); ylo = s.y_s(a); yhi = s.y0(a);
            break;
        }
        default: {
            const auto& s = sol.restricted_low();
            ds = s.dual_section(a); ylo = s.y_b(a); yhi = s.y0(a);
            break;
        }
    }
    double max_curv = -1e300;
    for (int i = 0; i <= 50; ++i) {
        double y = ylo + (yhi - ylo) * i / 50.0;
        max_curv = std::max(max_curv, ds.curvature(y));
    }
    rep.lines.push_back({"shape_dual_concave", loc(wl, a), max_curv, 0.0, max_curv < 0.0, false});
    return rep;
}

}  // namespace annuity
