#include "darkliq/simulator.hpp"

#include "darkliq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

namespace darkliq {
namespace {

struct StepResult {
    double x1 = 0.0;
    double xi = 0.0;  ///< rate recorded for the segment (rate at its start)
    double impact = 0.0;
    double inventory = 0.0;
    double eta_cost = 0.0;  ///< int gamma |eta| dt, continuous mode only
};

StepResult euler_step(const ModelParams& p, const Strategy& s, double tau, double x, double h) {
    const ControlAction a = s(tau, x);
    StepResult r;
    r.xi = a.xi;
    r.x1 = x - a.xi * h;
    r.impact = p.lambda * a.xi * a.xi * h;
    // exact for the linear segment
    r.inventory = h * (x * x + x * r.x1 + r.x1 * r.x1) / 3.0;
    r.eta_cost = p.gamma * std::abs(a.eta) * h;
    return r;
}

StepResult rk4_step(const ModelParams& p, const Strategy& s, double tau, double x, double h) {
    struct D {
        double dx, di, dv, de;
    };
    auto f = [&](double tt, double y, double* xi_out) {
        const ControlAction a = s(tt, y);
        if (xi_out) *xi_out = a.xi;
        return D{-a.xi, p.lambda * a.xi * a.xi, y * y, p.gamma * std::abs(a.eta)};
    };
    StepResult r;
    const D k1 = f(tau, x, &r.xi);
    const D k2 = f(tau - 0.5 * h, x + 0.5 * h * k1.dx, nullptr);
    const D k3 = f(tau - 0.5 * h, x + 0.5 * h * k2.dx, nullptr);
    const D k4 = f(tau - h, x + h * k3.dx, nullptr);
    auto comb = [&](double D::*m) { return h / 6.0 * (k1.*m + 2.0 * k2.*m + 2.0 * k3.*m + k4.*m); };
    r.x1 = x + comb(&D::dx);
    r.impact = comb(&D::di);
    r.inventory = comb(&D::dv);
    r.eta_cost = comb(&D::de);
    return r;
}

}  // namespace

void SimConfig::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
    if (!(dt > 0.0) || !(dt < horizon)) throw std::invalid_argument("dt must satisfy 0 < dt < horizon");
    if (!std::isfinite(initial_state)) throw std::invalid_argument("initial state must be finite");
    if (closeout_epsilon < 0.0 || !(epsilon() < horizon / 10.0))
        throw std::invalid_argument("closeout epsilon must lie in (0, horizon/10)");
    if (n_paths < 1) throw std::invalid_argument("n_paths must be positive");
}

std::vector<double> sample_jump_times(double theta, double horizon, std::mt19937_64& rng) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    std::exponential_distribution<double> gap(theta);
    std::vector<double> out;
    double t = gap(rng);
    while (t < horizon) {
        if (t > 0.0 && (out.empty() || t > out.back())) out.push_back(t);
        t += gap(rng);
    }
    return out;
}

PathRecord simulate_path(const ModelParams& p, const SimConfig& cfg, const Strategy& strategy, PathRng& rng,
                         bool record) {
    cfg.validate();
    const double T = cfg.horizon;
    const double eps = cfg.epsilon();
    const double tc = T - eps;
    const std::vector<double> arrivals = sample_jump_times(p.theta, T, rng.fills);

    PathRecord rec;
    double t = 0.0, x = cfg.initial_state;
    double impact = 0.0, inventory = 0.0, jump = 0.0;
    auto cost_now = [&] { return impact + p.alpha * inventory + jump; };
    auto push = [&](double xi) {
        if (!record) return;
        rec.times.push_back(t);
        rec.states.push_back(x);
        rec.xi_applied.push_back(xi);
        rec.cumulative_cost.push_back(cost_now());
    };

    std::size_t j = 0, k = 1;
    while (t < tc) {
        const double grid_next = std::min(static_cast<double>(k) * cfg.dt, tc);
        const bool fill = j < arrivals.size() && arrivals[j] < grid_next;
        const double end = fill ? arrivals[j] : grid_next;
        const double h = end - t;
        if (h > 0.0) {
            StepResult s;
            try {
                s = cfg.integrator == Integrator::RK4 ? rk4_step(p, strategy, T - t, x, h)
                                                      : euler_step(p, strategy, T - t, x, h);
            } catch (const std::exception& e) {
                throw std::runtime_error("strategy failed at t=" + std::to_string(t) + ", x=" + std::to_string(x) +
                                         ": " + e.what());
            }
            push(s.xi);
            if (s.xi * x < 0.0) ++rec.non_monotone_steps;
            impact += s.impact;
            inventory += s.inventory;
            if (cfg.jump_cost == JumpCostMode::Continuous) jump += s.eta_cost;
            x = s.x1;
            t = end;
        }
        if (fill) {
            const double eta = strategy(T - t, x).eta;
            x -= eta;
            if (cfg.jump_cost == JumpCostMode::PerFill) jump += p.gamma / p.theta * std::abs(eta);
            rec.jump_times.push_back(t);
            rec.eta_applied.push_back(eta);
            ++j;
        } else {
            ++k;
        }
    }

    // Closeout: linear ramp to zero over [tc, T], integrated exactly.
    rec.closeout_state = x;
    const double r = x / eps;
    push(r);
    impact += p.lambda * r * r * eps;
    inventory += x * x * eps / 3.0;
    for (; j < arrivals.size(); ++j) {
        rec.jump_times.push_back(arrivals[j]);
        rec.eta_applied.push_back(0.0);
    }
    t = T;
    x = 0.0;
    push(0.0);

    rec.impact_cost = impact;
    rec.inventory_integral = inventory;
    rec.jump_cost = jump;
    rec.running_cost = cost_now();
    rec.terminal_state = 0.0;
    return rec;
}

std::vector<double> path_costs(const ModelParams& p, const SimConfig& cfg, const Strategy& strategy) {
    cfg.validate();
    std::vector<double> costs(cfg.n_paths);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        try {
            costs[i] = simulate_path(p, cfg, strategy, rng, false).running_cost;
        } catch (const std::exception& e) {
            throw std::runtime_error("path " + std::to_string(i) + ": " + e.what());
        }
    });
    return costs;
}

CostEstimate summarize(const std::vector<double>& costs, std::uint64_t seed, double dt) {
    CostEstimate e;
    e.n_paths = costs.size();
    e.seed = seed;
    e.dt = dt;
    if (costs.empty()) return e;
    const double n = static_cast<double>(costs.size());
    e.mean = compensated_sum(costs) / n;
    if (costs.size() > 1) {
        std::vector<double> sq(costs.size());
        for (std::size_t i = 0; i < costs.size(); ++i) sq[i] = (costs[i] - e.mean) * (costs[i] - e.mean);
        e.std_error = std::sqrt(compensated_sum(sq) / (n - 1.0) / n);
    }
    return e;
}

CostEstimate estimate_cost(const ModelParams& p, const SimConfig& cfg, const Strategy& strategy) {
    if (cfg.n_paths < 2) throw std::invalid_argument("estimate_cost needs at least 2 paths");
    return summarize(path_costs(p, cfg, strategy), cfg.seed, cfg.dt);
}

TerminalSummary terminal_diagnostics(const ModelParams& p, const SimConfig& cfg,
                                     const std::vector<PathRecord>& records) {
    TerminalSummary s;
    s.n_paths = records.size();
    if (records.empty()) return s;
    double max_xi = 0.0;
    for (const auto& r : records) {
        s.max_closeout_state = std::max(s.max_closeout_state, std::abs(r.closeout_state));
        // the closeout ramp rate is excluded; it is not a strategy output
        for (std::size_t k = 0; k + 2 < r.xi_applied.size(); ++k) max_xi = std::max(max_xi, std::abs(r.xi_applied[k]));
    }
    s.bound = trajectory_bound(p, cfg.horizon, cfg.initial_state, cfg.horizon - cfg.epsilon());
    s.slack = 10.0 * cfg.dt * max_xi;
    s.within_bound = s.max_closeout_state <= s.bound + s.slack;
    return s;
}

nlohmann::json to_json(const CostEstimate& e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"n_paths", e.n_paths}, {"seed", e.seed}, {"dt", e.dt}};
}

nlohmann::json to_json(const TerminalSummary& s) {
    return {{"n_paths", s.n_paths},
            {"max_closeout_state", s.max_closeout_state},
            {"bound", s.bound},
            {"slack", s.slack},
            {"within_bound", s.within_bound}};
}

void write_path_csv(std::ostream& os, const PathRecord& r) {
    os << "t,x,xi,cumulative_cost\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t k = 0; k < r.times.size(); ++k)
        os << r.times[k] << ',' << r.states[k] << ',' << r.xi_applied[k] << ',' << r.cumulative_cost[k] << '\n';
}

void write_events_csv(std::ostream& os, const PathRecord& r) {
    os << "jump_time,eta\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t k = 0; k < r.jump_times.size(); ++k) os << r.jump_times[k] << ',' << r.eta_applied[k] << '\n';
}

}  // namespace darkliq
