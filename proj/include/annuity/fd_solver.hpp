#pragma once

#include "annuity/regime.hpp"

#include <Eigen/Dense>
#include <vector>

namespace annuity {

struct GridConfig {
    int n_w = 201;
    int n_a = 51;
    int policy_iters = 200;   // outer sweeps over the grid
    double grid_tol = 1e-9;   // sup-norm convergence tolerance
};

// Grid solution of the variational inequality by upwind policy iteration.
// Rows are indexed by annuity income; each row carries its own w-grid aligned
// to the regime's boundaries at that income level.
struct GridResult {
    std::vector<double> a_values;
    std::vector<Eigen::ArrayXd> w_rows;
    std::vector<Eigen::ArrayXd> psi_rows;
    std::vector<Eigen::ArrayXd> pi_rows;
    int iterations = 0;
    double final_delta = 0.0;
    long pi_clip_hits = 0;  // converged nodes sitting at the pi cap

    // Sup-norm gap against an analytic solution over all grid nodes.
    double sup_gap(const RegimeSolution& sol) const;
    // Largest positive first difference of psi along any row (monotone check).
    double max_row_increase() const;
};

GridResult fd_solve(const ModelParams& params, const DerivedConstants& consts, Regime regime,
                    const GridConfig& grid);

}  // namespace annuity
