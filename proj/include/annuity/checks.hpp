#pragma once

#include "annuity/regime.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace annuity {

struct CheckLine {
    std::string name;
    std::string location;  // "(w,a)" or a label; no embedded spaces
    double value;
    double threshold;
    bool pass;
    bool skipped = false;
};

struct CheckReport {
    std::vector<CheckLine> lines;
    bool all_pass() const;
    void print(std::ostream& os) const;
    void append(const CheckReport& other);
};

// Interior grid points for a regime (used by the checkers and the CLI).
std::vector<PortfolioState> interior_test_points(const RegimeSolution& sol, int n_w, int n_a);

// Residual of the HJB equation with the optimized investment term, by central
// differences of psi.  Points on or outside the boundary are flagged skipped.
CheckReport check_hjb_residual(const RegimeSolution& sol,
                               const std::vector<PortfolioState>& points);

// Both transaction gradient inequalities, with binding-branch checks where the
// regime dictates equality (purchase region, Neumann corner).
CheckReport check_variational_inequalities(const RegimeSolution& sol,
                                           const std::vector<PortfolioState>& points);

// psi in [0,1], non-increasing and convex along a w-line at fixed a; pi > 0
// at interior points; dual concavity along the y-interval.
CheckReport check_shape(const RegimeSolution& sol, double a, int n_points);

}  // namespace annuity
