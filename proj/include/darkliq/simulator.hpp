#pragma once

#include "darkliq/control.hpp"
#include "darkliq/params.hpp"
#include "darkliq/path_record.hpp"
#include "darkliq/rng.hpp"

#include "json.hpp"

#include <cstdint>
#include <ostream>
#include <random>
#include <vector>

namespace darkliq {

enum class JumpCostMode {
    PerFill,     ///< (gamma/theta)|eta| at each realized fill
    Continuous,  ///< gamma |eta(t)| dt along the path
};

enum class Integrator { Euler, RK4 };

struct SimConfig {
    double horizon = 1.0;
    double initial_state = 1.0;
    double dt = 1e-3;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 1;
    double closeout_epsilon = 0.0;  ///< 0 selects 1e-4 * horizon
    JumpCostMode jump_cost = JumpCostMode::PerFill;
    Integrator integrator = Integrator::Euler;
    unsigned threads = 1;

    double epsilon() const { return closeout_epsilon > 0.0 ? closeout_epsilon : 1e-4 * horizon; }
    void validate() const;
};

struct CostEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;
};

struct TerminalSummary {
    std::size_t n_paths = 0;
    double max_closeout_state = 0.0;  ///< max |X(T - eps)|
    double bound = 0.0;               ///< trajectory_bound at t = T - eps
    double slack = 0.0;               ///< 10 dt max|xi|
    bool within_bound = true;
};

/// Arrival times in (0, horizon) with exponential(theta) gaps.
std::vector<double> sample_jump_times(double theta, double horizon, std::mt19937_64& rng);

/// Event-driven path: fills at their exact arrival times, fixed steps of dt in
/// between, linear closeout on the last epsilon. With record = false only the
/// scalar cost fields are filled.
PathRecord simulate_path(const ModelParams& p, const SimConfig& cfg, const Strategy& strategy, PathRng& rng,
                         bool record = true);

/// Per-path running costs in path-index order (common random numbers across
/// strategies sharing a seed).
std::vector<double> path_costs(const ModelParams& p, const SimConfig& cfg, const Strategy& strategy);

CostEstimate summarize(const std::vector<double>& costs, std::uint64_t seed, double dt);

CostEstimate estimate_cost(const ModelParams& p, const SimConfig& cfg, const Strategy& strategy);

TerminalSummary terminal_diagnostics(const ModelParams& p, const SimConfig& cfg,
                                     const std::vector<PathRecord>& records);

nlohmann::json to_json(const CostEstimate& e);
nlohmann::json to_json(const TerminalSummary& s);

/// t,x,xi,cumulative_cost
void write_path_csv(std::ostream& os, const PathRecord& r);
/// jump_time,eta
void write_events_csv(std::ostream& os, const PathRecord& r);

}  // namespace darkliq
