#include "darkliq/control.hpp"

#include "darkliq/coefficients.hpp"
#include "darkliq/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace darkliq {
namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

void require_time_to_go(double tau) {
    if (!(tau >= kMinTimeToGo) || !std::isfinite(tau))
        throw std::domain_error("control requires time-to-go >= 1e-9, got " + std::to_string(tau));
}

}  // namespace

ControlAction optimal_control(const ModelParams& p, double tau, double y) {
    require_time_to_go(tau);
    const double ic = inv_c0(p, tau);
    const double beta = p.gamma * ic / (2.0 * p.theta);
    const double ay = std::abs(y);
    ControlAction a;
    if (ay <= beta) {
        a.xi = y / (p.lambda * ic);
        a.region = Region::Stopping;
        return a;
    }
    double S = 0.0;
    a.region = Region::Outer;
    if (ay < x_bar(p, tau, 0.0)) {
        S = g_index(p, tau, y);
        a.region = Region::Interpolation;
    }
    const double c1 = coeff_c1(p, tau, S);
    const double c2 = coeff_c2(p, tau, S);
    a.xi = (2.0 * c1 * y + sgn(y) * c2) / (2.0 * p.lambda);
    a.eta = sgn(y) * (ay - beta);
    return a;
}

ControlAction nodp_control(const ModelParams& p, double tau, double y) {
    if (!(tau > 0.0)) throw std::domain_error("control requires time-to-go > 0, got " + std::to_string(tau));
    ControlAction a;
    a.xi = c_nodp(p, tau) * y / p.lambda;
    a.eta = y;
    a.region = y == 0.0 ? Region::Stopping : Region::Outer;
    return a;
}

Strategy linear_control(double initial_state, double horizon) {
    if (!(horizon > 0.0)) throw std::domain_error("linear_control requires horizon > 0");
    const double rate = initial_state / horizon;
    return [rate](double, double) { return ControlAction{rate, 0.0, Region::Stopping}; };
}

Strategy optimal_strategy(const ModelParams& p) {
    return [p](double tau, double y) { return optimal_control(p, tau, y); };
}

Strategy nodp_strategy(const ModelParams& p) {
    return [p](double tau, double y) { return nodp_control(p, tau, y); };
}

double trajectory_bound(const ModelParams& p, double T, double x, double t) {
    if (!(T > 0.0) || !(t >= 0.0 && t < T))
        throw std::domain_error("trajectory_bound requires 0 <= t < T, got t=" + std::to_string(t));
    if (t == 0.0) return std::abs(x);
    auto rate = [&](double s) { return coeff_c1(p, T - s, 0.0) / p.lambda; };
    const auto r = numerics::integrate(rate, 0.0, t, 1e-13, 1e-13, 2048);
    return std::abs(x) * std::exp(-r.value);
}

double trajectory_bound_closed_form(const ModelParams& p, double T, double x, double t) {
    if (!(T > 0.0) || !(t >= 0.0 && t < T))
        throw std::domain_error("trajectory_bound requires 0 <= t < T, got t=" + std::to_string(t));
    const double tt = p.theta_tilde();
    const double a = 0.5 * tt * (T - t);
    const double b = 0.5 * tt * T;
    // sinh(a)/sinh(b) = e^{a-b} expm1(-2a)/expm1(-2b)
    return std::abs(x) * std::exp(0.5 * p.theta * t + a - b) * std::expm1(-2.0 * a) / std::expm1(-2.0 * b);
}

PathRecord deterministic_trajectory(const ModelParams& p, double T, double x, double dt,
                                    std::optional<double> forced_jump_time) {
    if (!(dt > 0.0) || !(dt < T)) throw std::domain_error("deterministic_trajectory requires 0 < dt < T");
    if (forced_jump_time && !(*forced_jump_time > 0.0 && *forced_jump_time < T - dt))
        throw std::domain_error("forced jump time must lie in (0, T - dt)");

    // (state, cost) with rates (-xi, lambda xi^2 + alpha x^2)
    auto rhs = [&](double t, double y, double& dy, double& dc) {
        const double xi = optimal_control(p, T - t, y).xi;
        dy = -xi;
        dc = p.lambda * xi * xi + p.alpha * y * y;
    };
    auto rk4 = [&](double t, double h, double& y, double& c) {
        double k1, k2, k3, k4, l1, l2, l3, l4;
        rhs(t, y, k1, l1);
        rhs(t + 0.5 * h, y + 0.5 * h * k1, k2, l2);
        rhs(t + 0.5 * h, y + 0.5 * h * k2, k3, l3);
        rhs(t + h, y + h * k3, k4, l4);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        c += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    };

    PathRecord rec;
    const double t_end = T - dt;
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    double t = 0.0, y = x, cost = 0.0;
    bool jumped = !forced_jump_time.has_value();
    auto push = [&](double xi) {
        rec.times.push_back(t);
        rec.states.push_back(y);
        rec.xi_applied.push_back(xi);
        rec.cumulative_cost.push_back(cost);
    };
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_next = std::min(static_cast<double>(k) * dt, t_end);
        if (!jumped && *forced_jump_time <= t_next) {
            push(optimal_control(p, T - t, y).xi);
            rk4(t, *forced_jump_time - t, y, cost);
            t = *forced_jump_time;
            const double eta = optimal_control(p, T - t, y).eta;
            y -= eta;
            cost += p.gamma / p.theta * std::abs(eta);
            rec.jump_times.push_back(t);
            rec.eta_applied.push_back(eta);
            jumped = true;
            if (t == t_next) continue;
        }
        push(optimal_control(p, T - t, y).xi);
        rk4(t, t_next - t, y, cost);
        t = t_next;
    }
    push(optimal_control(p, T - t, y).xi);
    rec.jump_cost = 0.0;
    for (double e : rec.eta_applied) rec.jump_cost += p.gamma / p.theta * std::abs(e);
    rec.running_cost = cost;
    rec.terminal_state = y;
    rec.closeout_state = y;
    return rec;
}

double crossing_time(const ModelParams& p, double T, const PathRecord& path) {
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        const double tau = T - path.times[k];
        if (tau > 0.0 && std::abs(path.states[k]) <= boundary(p, tau)) return path.times[k];
    }
    return -1.0;
}

}  // namespace darkliq
