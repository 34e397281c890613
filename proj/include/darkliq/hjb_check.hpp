#pragma once

#include "darkliq/params.hpp"

#include "json.hpp"

#include <cstddef>
#include <vector>

namespace darkliq {

/// h(T,x,xi,eta) = theta (w(T,x-eta) - w(T,x)) - w_x(T,x) xi + lambda xi^2 + gamma|eta| + alpha x^2
double hamiltonian(const ModelParams& p, double T, double x, double xi, double eta);

/// h at (xi*, eta*) in reduced form: the coefficient rates at S = g(T,x), or
/// (alpha - C0^2/lambda) x^2 in the stopping region.
double hamiltonian_at_optimum(const ModelParams& p, double T, double x);

struct HjbPoint {
    double T = 0.0;
    double x = 0.0;
    double dw_dT = 0.0;
    double residual = 0.0;     ///< |dw_dT - h(T,x,xi*,eta*)|
    double fd_residual = 0.0;  ///< |FD_T w - h(T,x,xi*,eta*)|, step 1e-6
    std::size_t minimizer_violations = 0;
};

struct HjbReport {
    std::vector<HjbPoint> points;
    double max_residual = 0.0;         ///< max residual / (1 + |dw_dT|)
    double max_fd_residual = 0.0;      ///< same scaling, finite-difference version
    std::size_t minimizer_violations = 0;
    bool passed = false;
};

inline constexpr double kResidualTol = 1e-6;
inline constexpr double kFdResidualTol = 1e-4;

/// 31 points on [0, 2 x_bar(T,0)] and their mirrors (0 once).
std::vector<double> default_x_grid(const ModelParams& p, double T);

/// Grid controls that beat (xi*, eta*) by more than 1e-10, or fail to exceed
/// h* by 1e-8 while farther than one grid step away.
std::size_t minimizer_scan(const ModelParams& p, double T, double x, const std::vector<double>& xi_grid,
                           const std::vector<double>& eta_grid);

/// 41 x 81 grids bracketing (xi*, eta*).
std::size_t minimizer_scan(const ModelParams& p, double T, double x);

/// Each T with default_x_grid(T) when x_grid is empty.
HjbReport residual_scan(const ModelParams& p, const std::vector<double>& T_grid,
                        const std::vector<double>& x_grid = {}, unsigned threads = 1);

nlohmann::json to_json(const HjbReport& r);

}  // namespace darkliq
