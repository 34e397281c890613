#include "darkliq/market.hpp"

#include "darkliq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace darkliq {

void MarketParams::validate() const {
    if (!(Gamma > 0.0)) throw std::invalid_argument("Gamma must be positive");
    if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
    if (!(alpha_tilde >= 0.0)) throw std::invalid_argument("alpha_tilde must be nonnegative");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
    if (!std::isfinite(p0)) throw std::invalid_argument("p0 must be finite");
}

ModelParams to_model_params(const MarketParams& m) {
    m.validate();
    return ModelParams::make(m.lambda, m.theta * m.Gamma, m.theta, m.alpha_tilde * m.sigma * m.sigma);
}

PricePath simulate_price(const MarketParams& m, const std::vector<double>& times, const std::vector<double>& sell,
                         const std::vector<double>& buy, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    PricePath out;
    out.times = times;
    out.fundamental.resize(times.size());
    out.adjusted.resize(times.size());
    out.left_limit.resize(times.size());
    double pbar = m.p0, prev = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        if (t > prev) pbar += m.sigma * std::sqrt(t - prev) * normal(rng);
        prev = t;
        auto count = [](const std::vector<double>& v, double s, bool inclusive) {
            return static_cast<double>(inclusive ? std::upper_bound(v.begin(), v.end(), s) - v.begin()
                                                 : std::lower_bound(v.begin(), v.end(), s) - v.begin());
        };
        out.fundamental[k] = pbar;
        out.adjusted[k] = pbar + m.Gamma * (count(sell, t, true) - count(buy, t, true));
        out.left_limit[k] = pbar + m.Gamma * (count(sell, t, false) - count(buy, t, false));
        if (out.adjusted[k] < 0.0 || out.left_limit[k] < 0.0) out.negative = true;
    }
    return out;
}

ProceedsRecord realized_proceeds(const MarketParams& m, const PathRecord& path, const PricePath& price) {
    if (price.times != path.times) throw std::invalid_argument("price grid does not match path grid");
    ProceedsRecord r;
    const std::size_t n = path.times.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double h = path.times[k + 1] - path.times[k];
        const double xi = path.xi_applied[k];
        r.proceeds += xi * h * (price.adjusted[k] - m.lambda * xi);
        r.impact_cost += m.lambda * xi * xi * h;
    }
    for (std::size_t j = 0; j < path.jump_times.size(); ++j) {
        const double eta = path.eta_applied[j];
        if (eta == 0.0) continue;
        const auto it = std::lower_bound(path.times.begin(), path.times.end(), path.jump_times[j]);
        if (it == path.times.end() || *it != path.jump_times[j])
            throw std::invalid_argument("fill time missing from the path grid");
        r.proceeds += eta * price.left_limit[static_cast<std::size_t>(it - path.times.begin())];
        r.adverse_selection_cost += m.Gamma * std::abs(eta);
    }
    r.risk_penalty = m.alpha_tilde * m.sigma * m.sigma * path.inventory_integral;
    return r;
}

MarketReport market_identity(const MarketParams& m, const SimConfig& cfg, const Strategy& strategy) {
    const ModelParams p = to_model_params(m);
    cfg.validate();
    const std::size_t n = cfg.n_paths;
    std::vector<double> shortfall(n), explained(n), gap(n), cost(n), adverse_err(n);
    std::vector<char> negative(n, 0);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        PathRng rng(cfg.seed, i);
        const PathRecord path = simulate_path(p, cfg, strategy, rng, true);
        const std::vector<double> buy = sample_jump_times(m.theta, cfg.horizon, rng.buy);
        const PricePath price = simulate_price(m, path.times, path.jump_times, buy, rng.price);
        const ProceedsRecord pr = realized_proceeds(m, path, price);
        double fills = 0.0;
        for (double e : path.eta_applied) fills += std::abs(e);
        shortfall[i] = cfg.initial_state * m.p0 - pr.proceeds;
        explained[i] = pr.impact_cost + pr.adverse_selection_cost;
        gap[i] = shortfall[i] - explained[i];
        cost[i] = shortfall[i] + pr.risk_penalty;
        adverse_err[i] = std::abs(pr.adverse_selection_cost - m.Gamma * fills);
        negative[i] = price.negative ? 1 : 0;
    });

    MarketReport r;
    r.n_paths = n;
    const double dn = static_cast<double>(n);
    r.mean_shortfall = compensated_sum(shortfall) / dn;
    r.mean_explained = compensated_sum(explained) / dn;
    const CostEstimate g = summarize(gap, cfg.seed, cfg.dt);
    const CostEstimate c = summarize(cost, cfg.seed, cfg.dt);
    r.gap_mean = g.mean;
    r.gap_std_error = g.std_error;
    r.cost_mean = c.mean;
    r.cost_std_error = c.std_error;
    r.max_adverse_error = *std::max_element(adverse_err.begin(), adverse_err.end());
    r.negative_price_paths = static_cast<std::size_t>(std::count(negative.begin(), negative.end(), 1));
    // roundoff floor for sigma = 0 runs, where every gap is exactly zero in theory
    const double floor = 1e-9 * std::max(1.0, std::abs(cfg.initial_state * m.p0));
    r.identity_holds = std::abs(r.gap_mean) <= 3.0 * r.gap_std_error + floor;
    return r;
}

nlohmann::json to_json(const MarketReport& r) {
    return {{"n_paths", r.n_paths},
            {"mean_shortfall", r.mean_shortfall},
            {"mean_explained", r.mean_explained},
            {"gap_mean", r.gap_mean},
            {"gap_std_error", r.gap_std_error},
            {"cost_mean", r.cost_mean},
            {"cost_std_error", r.cost_std_error},
            {"max_adverse_error", r.max_adverse_error},
            {"negative_price_paths", r.negative_price_paths},
            {"identity_holds", r.identity_holds}};
}

void write_price_csv(std::ostream& os, const PricePath& p) {
    os << "t,fundamental,adjusted,left_limit\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t k = 0; k < p.times.size(); ++k)
        os << p.times[k] << ',' << p.fundamental[k] << ',' << p.adjusted[k] << ',' << p.left_limit[k] << '\n';
}

}  // namespace darkliq
