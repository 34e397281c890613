#pragma once

#include "darkliq/params.hpp"

namespace darkliq {

/// Coefficients of the quasi-polynomial value function at time-to-go T for
/// interpolation index S in [0, T]:
///   w = c1*x^2 + c2*|x| + c3   along the no-jump trajectory |x| = x_bar(T, S).
struct CoefficientFrame {
    double T = 0.0;
    double S = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double x_bar = 0.0;
};

/// Partial derivatives in T at fixed S (the right-hand sides of the
/// coefficient initial value problems).
struct CoefficientRates {
    double dc1 = 0.0;
    double dc2 = 0.0;
    double dc3 = 0.0;
    double dx_bar = 0.0;
};

struct MuKappa {
    double mu = 0.0;
    double mu_minus_one = 0.0;  ///< mu - 1, computed without cancellation
    double kappa = 0.0;         ///< arcoth(mu)
};

// Without-dark-pool benchmark C0(T) = sqrt(lambda alpha) coth(sqrt(alpha/lambda) T);
// lambda / T when alpha = 0. All of these throw std::domain_error for T <= 0.
double c0(const ModelParams& p, double T);
/// 1 / C0(T); defined (as 0) at T = 0.
double inv_c0(const ModelParams& p, double T);
/// dC0/dT = alpha - C0^2 / lambda.
double c0_rate(const ModelParams& p, double T);

/// gamma = 0 benchmark: C(T) = (lambda theta~/2) coth(theta~ T/2) - lambda theta/2.
double c_nodp(const ModelParams& p, double T);

/// mu(S) = (2 C0(S) + theta lambda) / (theta~ lambda), kappa = arcoth(mu).
/// Requires S > 0 and alpha > 0.
MuKappa mu_kappa(const ModelParams& p, double S);

// Individual closed forms, valid for any alpha >= 0 and 0 <= S <= T.
// c3 is the only one needing quadrature.
double coeff_c1(const ModelParams& p, double T, double S);
double coeff_c2(const ModelParams& p, double T, double S);
double coeff_c3(const ModelParams& p, double T, double S);
double x_bar(const ModelParams& p, double T, double S);

/// All four coefficients for alpha > 0. S = 0 uses the dedicated limit formulas.
CoefficientFrame coeff_frame(const ModelParams& p, double T, double S);
/// All four coefficients for alpha = 0; x_bar = gamma T / (2 theta lambda).
CoefficientFrame coeff_frame_riskneutral(const ModelParams& p, double T, double S);
/// Dispatches on alpha.
CoefficientFrame frame(const ModelParams& p, double T, double S);

CoefficientRates coefficient_rates(const ModelParams& p, const CoefficientFrame& f);

}  // namespace darkliq
