#pragma once

#include "darkliq/params.hpp"
#include "darkliq/path_record.hpp"
#include "darkliq/value_surface.hpp"

#include <functional>
#include <optional>

namespace darkliq {

struct ControlAction {
    double xi = 0.0;   ///< continuous rate (state / time)
    double eta = 0.0;  ///< size taken at a fill
    Region region = Region::Stopping;
};

/// Feedback rule (time_to_go, state) -> action.
using Strategy = std::function<ControlAction(double time_to_go, double state)>;

/// Optimal feedback. Only C1 and C2 are evaluated, so it avoids the C3
/// quadrature that value() needs.
ControlAction optimal_control(const ModelParams& p, double time_to_go, double state);

/// gamma = 0 optimum: xi = C(tau) x / lambda, eta = x.
ControlAction nodp_control(const ModelParams& p, double time_to_go, double state);

/// Constant-rate liquidation x / T with no dark orders.
Strategy linear_control(double initial_state, double horizon);

Strategy optimal_strategy(const ModelParams& p);
Strategy nodp_strategy(const ModelParams& p);

/// |x| exp(-int_0^t C1(T-s,0)/lambda ds), integral by quadrature.
double trajectory_bound(const ModelParams& p, double T, double x, double t);
/// |x| e^{theta t/2} sinh(theta~(T-t)/2) / sinh(theta~ T/2).
double trajectory_bound_closed_form(const ModelParams& p, double T, double x, double t);

/// No-fill optimal path by RK4 on [0, T - dt]. With forced_jump_time set, a
/// fill is applied there at the optimal size.
PathRecord deterministic_trajectory(const ModelParams& p, double T, double x, double dt,
                                    std::optional<double> forced_jump_time = std::nullopt);

/// First recorded time with |x(t)| <= beta(T - t); negative if never.
double crossing_time(const ModelParams& p, double T, const PathRecord& path);

}  // namespace darkliq
