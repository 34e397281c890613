#pragma once

#include <cstddef>
#include <vector>

namespace darkliq {

/// One trajectory. times/states/xi_applied/cumulative_cost are parallel
/// arrays; entry k describes the segment [times[k], times[k+1]) on which the
/// rate xi_applied[k] was held. A fill time appears in `times` with the
/// post-jump state. The last entry is the horizon (xi 0, state 0 after closeout).
struct PathRecord {
    std::vector<double> times;
    std::vector<double> states;
    std::vector<double> xi_applied;
    std::vector<double> cumulative_cost;

    std::vector<double> jump_times;
    std::vector<double> eta_applied;

    double impact_cost = 0.0;         ///< int lambda xi^2 dt
    double inventory_integral = 0.0;  ///< int X^2 dt
    double jump_cost = 0.0;           ///< charge for eta, per the cost mode
    double running_cost = 0.0;        ///< impact + alpha * inventory + jump
    double terminal_state = 0.0;
    double closeout_state = 0.0;      ///< state when the closeout window opens
    std::size_t non_monotone_steps = 0;
};

}  // namespace darkliq
