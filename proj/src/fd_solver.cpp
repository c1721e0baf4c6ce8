#include "annuity/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace annuity {

namespace {

constexpr double kPiCap = 200.0;

// Linear interpolation on an ascending grid with constant fill outside.
double interp(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& ys, double x, double left,
              double right) {
    const int n = static_cast<int>(xs.size());
    if (x <= xs(0)) return (x < xs(0)) ? left : ys(0);
    if (x >= xs(n - 1)) return (x > xs(n - 1)) ? right : ys(n - 1);
    int lo = 0, hi = n - 1;
    while (hi - lo > 1) {
        int mid = (lo + hi) / 2;
        (xs(mid) <= x ? lo : hi) = mid;
    }
    double t = (x - xs(lo)) / (xs(lo + 1) - xs(lo));
    return ys(lo) + t * (ys(lo + 1) - ys(lo));
}

void thomas(const Eigen::ArrayXd& lo, const Eigen::ArrayXd& di, const Eigen::ArrayXd& up,
            const Eigen::ArrayXd& rhs, Eigen::ArrayXd& out) {
    const int n = static_cast<int>(rhs.size());
    Eigen::ArrayXd cp(n), dp(n);
    cp(0) = up(0) / di(0);
    dp(0) = rhs(0) / di(0);
    for (int i = 1; i < n; ++i) {
        double den = di(i) - lo(i) * cp(i - 1);
        cp(i) = up(i) / den;
        dp(i) = (rhs(i) - lo(i) * dp(i - 1)) / den;
    }
    out(n - 1) = dp(n - 1);
    for (int i = n - 2; i >= 0; --i) out(i) = dp(i) - cp(i) * out(i + 1);
}

// One-row solve of lambda_s psi = (rw - c + a) psi_w + min_pi [...] with
// Dirichlet data, by policy iteration on pi with upwinded drift.
void row_solve(const ModelParams& mp, const Eigen::ArrayXd& wv, double psi_left, double psi_right,
               double a, Eigen::ArrayXd& psi, Eigen::ArrayXd& pi, int iters = 60) {
    const int n = static_cast<int>(wv.size());
    const double h = wv(1) - wv(0);
    const double excess = mp.mu - mp.r;
    psi = Eigen::ArrayXd::LinSpaced(n, psi_left, psi_right);
    Eigen::ArrayXd lo(n), di(n), up(n), rhs(n), next(n);
    for (int it = 0; it < iters; ++it) {
        lo(0) = 0; di(0) = 1; up(0) = 0; rhs(0) = psi_left;
        lo(n - 1) = 0; di(n - 1) = 1; up(n - 1) = 0; rhs(n - 1) = psi_right;
        for (int i = 1; i < n - 1; ++i) {
            double drift = mp.r * wv(i) + excess * pi(i) - mp.c + a;
            double q = 0.5 * mp.sigma * mp.sigma * pi(i) * pi(i) / (h * h);
            double dp = std::max(drift, 0.0) / h;
            double dm = std::max(-drift, 0.0) / h;
            lo(i) = -(q + dm);
            up(i) = -(q + dp);
            di(i) = mp.lambda_s + 2.0 * q + dp + dm;
            rhs(i) = 0.0;
        }
        thomas(lo, di, up, rhs, next);
        double dpsi = (next - psi).abs().maxCoeff();
        double dpi = 0.0;
        for (int i = 1; i < n - 1; ++i) {
            double pw = (next(i + 1) - next(i - 1)) / (2.0 * h);
            double pww = (next(i + 1) - 2.0 * next(i) + next(i - 1)) / (h * h);
            double cand;
            if (pww > 1e-12)
                cand = std::clamp(-excess / (mp.sigma * mp.sigma) * pw / pww, 0.0, kPiCap);
            else
                cand = (pw < 0.0) ? kPiCap : 0.0;
            dpi = std::max(dpi, std::abs(cand - pi(i)));
            pi(i) = cand;
        }
        psi = next;
        if (dpsi < 1e-12 && dpi < 1e-8) break;
    }
}

}  // namespace

double GridResult::sup_gap(const RegimeSolution& sol) const {
    double e = 0.0;
    for (size_t j = 0; j < a_values.size(); ++j)
        for (int i = 0; i < w_rows[j].size(); ++i)
            e = std::max(e, std::abs(psi_rows[j](i) - sol.psi(w_rows[j](i), a_values[j])));
    return e;
}

double GridResult::max_row_increase() const {
    double e = -1.0;
    for (const auto& row : psi_rows)
        for (int i = 0; i + 1 < row.size(); ++i) e = std::max(e, row(i + 1) - row(i));
    return e;
}

GridResult fd_solve(const ModelParams& params, const DerivedConstants& consts, Regime regime,
                    const GridConfig& grid) {
    params.validate();
    if (grid.n_w < 11 || grid.n_a < 3 || !(grid.grid_tol > 0))
        throw std::invalid_argument("GridConfig: need n_w >= 11, n_a >= 3, grid_tol > 0");

    const bool unres = (regime == Regime::unrestricted);
    const double abar = consts.a_bar;
    GridResult res;
    double da;
    if (unres) {
        double amax = a_max_unrestricted(params, consts) * (1.0 - 1e-9);
        da = amax / (grid.n_a - 1);
        for (int j = 0; j < grid.n_a; ++j) res.a_values.push_back(j * da);
    } else {
        // Rows stop one cell short of a = c, where the wedge degenerates.
        da = params.c / grid.n_a;
        for (int j = 0; j < grid.n_a; ++j) res.a_values.push_back(j * da);
    }
    for (int j = 0; j < grid.n_a; ++j) {
        double a = res.a_values[j];
        double w_lo = unres ? ruin_level_unrestricted(params, consts, a) : 0.0;
        double w_hi = unres ? safe_level_unrestricted(params, consts, a)
                            : safe_level_restricted(consts, params.c, a);
        res.w_rows.push_back(Eigen::ArrayXd::LinSpaced(grid.n_w, w_lo, w_hi));
        res.psi_rows.push_back(Eigen::ArrayXd::LinSpaced(grid.n_w, 1.0, 0.0));
        res.pi_rows.push_back(Eigen::ArrayXd::Constant(grid.n_w, 5.0));
    }

    Eigen::ArrayXd trial(grid.n_w);
    int it = 0;
    double delta = 0.0;
    for (it = 0; it < grid.policy_iters; ++it) {
        delta = 0.0;
        for (int j = 0; j < grid.n_a; ++j) {
            double a = res.a_values[j];
            double left;
            if (unres) {
                left = 1.0;
            } else if (j == 0) {
                left = 1.0;  // psi(0,0) = 1
            } else {
                // Surrender chain: at w=0 the individual sells da of income.
                left = interp(res.w_rows[j - 1], res.psi_rows[j - 1],
                              (1.0 - params.p) * abar * da, 1.0, 0.0);
            }
            row_solve(params, res.w_rows[j], left, 0.0, a, trial, res.pi_rows[j]);
            if (j + 1 < grid.n_a) {
                // Buy obstacle: one-node purchase along the annuity axis.
                for (int i = 0; i < grid.n_w; ++i) {
                    double tw = res.w_rows[j](i) - abar * da;
                    if (!unres && tw < 0.0) continue;  // purchase infeasible
                    double ob = interp(res.w_rows[j + 1], res.psi_rows[j + 1], tw, 1.0, 0.0);
                    trial(i) = std::min(trial(i), ob);
                }
            }
            if (j >= 1) {
                // Sell obstacle.
                for (int i = 0; i < grid.n_w; ++i) {
                    double tw = res.w_rows[j](i) + (1.0 - params.p) * abar * da;
                    double ob = interp(res.w_rows[j - 1], res.psi_rows[j - 1], tw, 1.0, 0.0);
                    trial(i) = std::min(trial(i), ob);
                }
            }
            trial(0) = left;
            trial(grid.n_w - 1) = 0.0;
            delta = std::max(delta, (trial - res.psi_rows[j]).abs().maxCoeff());
            res.psi_rows[j] = trial;
        }
        if (delta < grid.grid_tol) break;
    }
    if (delta >= grid.grid_tol) {
        std::ostringstream os;
        os << "fd_solve: no convergence within " << grid.policy_iters
           << " sweeps, final residual " << delta;
        throw std::runtime_error(os.str());
    }
    res.iterations = it + 1;
    res.final_delta = delta;
    for (const auto& row : res.pi_rows)
        res.pi_clip_hits += (row >= kPiCap - 1e-9).count();
    return res;
}

}  // namespace annuity
