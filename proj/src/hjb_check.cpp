#include "darkliq/hjb_check.hpp"

#include "darkliq/coefficients.hpp"
#include "darkliq/control.hpp"
#include "darkliq/parallel.hpp"
#include "darkliq/value_surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace darkliq {
namespace {

constexpr double kBeatTol = 1e-10;
constexpr double kStrictTol = 1e-8;
constexpr double kFdStep = 1e-6;

double max_gap(const std::vector<double>& g) {
    std::vector<double> s(g);
    std::sort(s.begin(), s.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) gap = std::max(gap, s[i] - s[i - 1]);
    return gap;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

}  // namespace

double hamiltonian(const ModelParams& p, double T, double x, double xi, double eta) {
    if (!(T > 0.0)) throw std::domain_error("hamiltonian requires T > 0, got " + std::to_string(T));
    const ValuePoint here = value(p, T, x);
    const double w_jump = eta == 0.0 ? here.w : value(p, T, x - eta).w;
    return p.theta * (w_jump - here.w) - here.dw_dx * xi + p.lambda * xi * xi + p.gamma * std::abs(eta) +
           p.alpha * x * x;
}

double hamiltonian_at_optimum(const ModelParams& p, double T, double x) {
    if (!(T > 0.0)) throw std::domain_error("hamiltonian requires T > 0, got " + std::to_string(T));
    const double ax = std::abs(x);
    if (ax <= boundary(p, T)) {
        const double c = c0(p, T);
        return (p.alpha - c * c / p.lambda) * x * x;
    }
    const double S = g_index(p, T, x);
    const CoefficientFrame f = frame(p, T, S);
    const double lam = p.lambda, th = p.theta;
    return (p.alpha - f.c1 * f.c1 / lam - th * f.c1) * x * x + (p.gamma - f.c2 * (f.c1 / lam + th)) * ax -
           th * f.c3 - p.gamma * p.gamma / (4.0 * th * c0(p, T)) - f.c2 * f.c2 / (4.0 * lam);
}

std::vector<double> default_x_grid(const ModelParams& p, double T) {
    const std::vector<double> pos = linspace(0.0, 2.0 * x_bar(p, T, 0.0), 31);
    std::vector<double> grid;
    grid.reserve(61);
    for (std::size_t i = pos.size(); i-- > 1;) grid.push_back(-pos[i]);
    grid.insert(grid.end(), pos.begin(), pos.end());
    return grid;
}

std::size_t minimizer_scan(const ModelParams& p, double T, double x, const std::vector<double>& xi_grid,
                           const std::vector<double>& eta_grid) {
    const ControlAction opt = optimal_control(p, T, x);
    const ValuePoint here = value(p, T, x);
    const double h_star = hamiltonian(p, T, x, opt.xi, opt.eta);
    const double xi_res = max_gap(xi_grid);
    const double eta_res = max_gap(eta_grid);

    std::size_t violations = 0;
    for (double eta : eta_grid) {
        // eta-part does not depend on xi; evaluate w(x - eta) once per column
        const double w_jump = value(p, T, x - eta).w;
        const double eta_part = p.theta * (w_jump - here.w) + p.gamma * std::abs(eta);
        for (double xi : xi_grid) {
            const double h = eta_part - here.dw_dx * xi + p.lambda * xi * xi + p.alpha * x * x;
            const bool far = std::abs(xi - opt.xi) > xi_res || std::abs(eta - opt.eta) > eta_res;
            if (h < h_star - kBeatTol || (far && h - h_star <= kStrictTol)) ++violations;
        }
    }
    return violations;
}

std::size_t minimizer_scan(const ModelParams& p, double T, double x) {
    const ControlAction opt = optimal_control(p, T, x);
    const double spread = 0.5 * std::abs(opt.xi) + 0.1;
    const std::vector<double> xi_grid = linspace(opt.xi - spread, opt.xi + spread, 41);
    const double pad = 0.25 * std::abs(x) + 0.05;
    const std::vector<double> eta_grid = linspace(std::min(0.0, x) - pad, std::max(0.0, x) + pad, 81);
    return minimizer_scan(p, T, x, xi_grid, eta_grid);
}

HjbReport residual_scan(const ModelParams& p, const std::vector<double>& T_grid, const std::vector<double>& x_grid,
                        unsigned threads) {
    HjbReport rep;
    for (double T : T_grid) {
        if (!(T > kFdStep)) throw std::domain_error("residual_scan requires T > 1e-6, got " + std::to_string(T));
        const std::vector<double> xs = x_grid.empty() ? default_x_grid(p, T) : x_grid;
        for (double x : xs) rep.points.push_back({T, x});
    }

    parallel_for(rep.points.size(), threads, [&](std::size_t i) {
        HjbPoint& pt = rep.points[i];
        const ValuePoint v = value(p, pt.T, pt.x);
        const ControlAction a = optimal_control(p, pt.T, pt.x);
        const double h = hamiltonian(p, pt.T, pt.x, a.xi, a.eta);
        const double fd = (value(p, pt.T + kFdStep, pt.x).w - value(p, pt.T - kFdStep, pt.x).w) / (2.0 * kFdStep);
        pt.dw_dT = v.dw_dT;
        pt.residual = std::abs(v.dw_dT - h);
        pt.fd_residual = std::abs(fd - h);
        pt.minimizer_violations = minimizer_scan(p, pt.T, pt.x);
    });

    for (const auto& pt : rep.points) {
        const double scale = 1.0 + std::abs(pt.dw_dT);
        rep.max_residual = std::max(rep.max_residual, pt.residual / scale);
        rep.max_fd_residual = std::max(rep.max_fd_residual, pt.fd_residual / scale);
        rep.minimizer_violations += pt.minimizer_violations;
    }
    rep.passed = rep.max_residual <= kResidualTol && rep.max_fd_residual <= kFdResidualTol &&
                 rep.minimizer_violations == 0;
    return rep;
}

nlohmann::json to_json(const HjbReport& r) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& pt : r.points)
        pts.push_back({{"tau", pt.T},
                       {"x", pt.x},
                       {"dw_dtau", pt.dw_dT},
                       {"residual", pt.residual},
                       {"fd_residual", pt.fd_residual},
                       {"minimizer_violations", pt.minimizer_violations}});
    return {{"max_residual", r.max_residual},
            {"max_fd_residual", r.max_fd_residual},
            {"minimizer_violations", r.minimizer_violations},
            {"passed", r.passed},
            {"points", pts}};
}

}  // namespace darkliq
