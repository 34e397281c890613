#pragma once

#include "darkliq/params.hpp"
#include "darkliq/path_record.hpp"
#include "darkliq/simulator.hpp"

#include "json.hpp"

#include <ostream>
#include <random>
#include <vector>

namespace darkliq {

struct MarketParams {
    double Gamma = 1.0;        ///< price jump at a fill
    double sigma = 0.0;        ///< fundamental volatility
    double alpha_tilde = 0.0;  ///< risk aversion
    double lambda = 1.0;       ///< temporary impact
    double theta = 1.0;        ///< fill intensity
    double p0 = 100.0;         ///< initial price

    void validate() const;
};

/// (lambda, gamma = theta Gamma, theta, alpha = alpha_tilde sigma^2)
ModelParams to_model_params(const MarketParams& m);

struct PricePath {
    std::vector<double> times;
    std::vector<double> fundamental;  ///< P-bar, arithmetic Brownian motion
    std::vector<double> adjusted;     ///< P~ = P-bar + Gamma (pi1 - pi2)
    std::vector<double> left_limit;   ///< P~(t-)
    bool negative = false;            ///< P~ went below zero somewhere on the grid
};

/// Fundamental sampled on `times`; +Gamma steps at sell-side fills, -Gamma at
/// buy-side arrivals.
PricePath simulate_price(const MarketParams& m, const std::vector<double>& times, const std::vector<double>& sell,
                         const std::vector<double>& buy, std::mt19937_64& rng);

struct ProceedsRecord {
    double proceeds = 0.0;
    double impact_cost = 0.0;
    double adverse_selection_cost = 0.0;
    double risk_penalty = 0.0;
};

/// sum xi h (P~ - lambda xi) over segments + sum eta P~(t-) over fills.
/// Throws std::invalid_argument if the price grid differs from the path grid.
ProceedsRecord realized_proceeds(const MarketParams& m, const PathRecord& path, const PricePath& price);

struct MarketReport {
    std::size_t n_paths = 0;
    double mean_shortfall = 0.0;    ///< mean(x p0 - proceeds)
    double mean_explained = 0.0;    ///< mean(impact + adverse selection)
    double gap_mean = 0.0;          ///< paired mean of the two
    double gap_std_error = 0.0;
    double cost_mean = 0.0;         ///< mean(x p0 - proceeds + risk penalty)
    double cost_std_error = 0.0;
    double max_adverse_error = 0.0; ///< max |adverse - Gamma sum|eta||
    std::size_t negative_price_paths = 0;
    bool identity_holds = false;    ///< |gap_mean| <= 3 gap_std_error
};

/// Runs cfg.n_paths market paths; cfg.initial_state, horizon, dt and seed apply.
MarketReport market_identity(const MarketParams& m, const SimConfig& cfg, const Strategy& strategy);

nlohmann::json to_json(const MarketReport& r);

/// t,fundamental,adjusted,left_limit
void write_price_csv(std::ostream& os, const PricePath& p);

}  // namespace darkliq
