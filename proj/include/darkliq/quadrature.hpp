#pragma once

#include <cstddef>
#include <functional>

namespace darkliq::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;        ///< estimated absolute error
    std::size_t intervals = 0; ///< number of subintervals in the final partition
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
/// Bisects the interval with the largest error estimate until the summed
/// estimate is below max(abs_tol, rel_tol*|I|) or max_intervals is hit.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-12, double rel_tol = 1e-12,
                           std::size_t max_intervals = 512);

}  // namespace darkliq::numerics
