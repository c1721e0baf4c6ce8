#pragma once

#include <cmath>

namespace annuity {

// The dual value function at a fixed annuity income level:
//   psi_hat(y) = d1*y^b1 + d2*y^b2 + lin*y
// with lin = (c-a)/r.  Concave in y on the relevant interval.
struct DualSection {
    double d1, d2, lin;
    double b1, b2;

    double value(double y) const {
        return d1 * std::pow(y, b1) + d2 * std::pow(y, b2) + lin * y;
    }
    double slope(double y) const {
        return d1 * b1 * std::pow(y, b1 - 1.0) + d2 * b2 * std::pow(y, b2 - 1.0) + lin;
    }
    double curvature(double y) const {
        return d1 * b1 * (b1 - 1.0) * std::pow(y, b1 - 2.0) +
               d2 * b2 * (b2 - 1.0) * std::pow(y, b2 - 2.0);
    }
    // Legendre transform back to the primal: psi = psi_hat(y) - w*y at y with slope(y)=w.
    double primal(double y, double w) const { return value(y) - w * y; }
};

}  // namespace annuity
