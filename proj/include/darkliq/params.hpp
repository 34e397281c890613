#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace darkliq {

/// Parameters of the constrained control problem
///   minimize E[ int_0^T lambda*xi^2 + gamma*|eta| + alpha*X^2 dt ],  X(T-) = 0,
/// where eta is applied at the arrival times of a Poisson process with
/// intensity theta.
struct ModelParams {
    double lambda = 1.0;  ///< quadratic weight on the continuous control
    double gamma = 1.0;   ///< absolute-value weight on the jump control
    double theta = 1.0;   ///< Poisson intensity (1/time)
    double alpha = 0.0;   ///< quadratic weight on the state

    /// Validating constructor; throws std::invalid_argument.
    static ModelParams make(double lambda, double gamma, double theta, double alpha) {
        ModelParams p{lambda, gamma, theta, alpha};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("lambda must be positive, got " + std::to_string(lambda));
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw std::invalid_argument("gamma must be positive, got " + std::to_string(gamma));
        if (!(theta > 0.0) || !std::isfinite(theta))
            throw std::invalid_argument("theta must be positive, got " + std::to_string(theta));
        if (!(alpha >= 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha must be nonnegative, got " + std::to_string(alpha));
    }

    /// sqrt(theta^2 + 4 alpha / lambda)
    double theta_tilde() const { return std::sqrt(theta * theta + 4.0 * alpha / lambda); }

    bool risk_neutral() const { return alpha == 0.0; }
};

}  // namespace darkliq
