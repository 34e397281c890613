// darkliq: command-line front end. Every subcommand can write a run manifest
// that `darkliq replay --manifest FILE` re-executes.

#include "darkliq/coefficients.hpp"
#include "darkliq/control.hpp"
#include "darkliq/hjb_check.hpp"
#include "darkliq/market.hpp"
#include "darkliq/simulator.hpp"
#include "darkliq/value_surface.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef DARKLIQ_VERSION
#define DARKLIQ_VERSION "0.0.0"
#endif

namespace {

using namespace darkliq;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheck = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFlags {
    double lambda = 2.5, gamma = 6.0, theta = 3.0, alpha = 4.0;
    void add(CLI::App* sub) {
        sub->add_option("--lambda", lambda, "quadratic cost weight")->capture_default_str();
        sub->add_option("--gamma", gamma, "absolute-value cost weight")->capture_default_str();
        sub->add_option("--theta", theta, "fill intensity")->capture_default_str();
        sub->add_option("--alpha", alpha, "state cost weight")->capture_default_str();
    }
    ModelParams params() const {
        try {
            return ModelParams::make(lambda, gamma, theta, alpha);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
    return os;
}

void write_json(const std::string& path, const json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

std::string fmt(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

json option_echo(const CLI::App* sub) {
    json j = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
        std::string key = opt->get_name();
        while (!key.empty() && key.front() == '-') key.erase(key.begin());
        const auto& res = opt->results();
        if (!res.empty())
            j[key] = res.size() == 1 ? json(res.front()) : json(res);
        else if (!opt->get_default_str().empty())
            j[key] = opt->get_default_str();
    }
    return j;
}

void write_manifest(const std::string& path, const CLI::App* sub, const std::vector<std::string>& argv,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& outputs) {
    json m;
    m["command"] = sub->get_name();
    m["params"] = option_echo(sub);
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["outputs"] = outputs;
    m["tool_version"] = DARKLIQ_VERSION;
    m["argv"] = argv;
    write_json(path, m);
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"Closed-form optimal liquidation with a dark pool"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // value
    ModelFlags vm;
    double v_T = 1.0, v_x = 0.0;
    bool v_json = false;
    int v_prec = 6;
    std::string v_manifest;
    auto* value_cmd = app.add_subcommand("value", "value function and derivatives at (T, x)");
    vm.add(value_cmd);
    value_cmd->add_option("--T", v_T, "time to go")->capture_default_str();
    value_cmd->add_option("--x", v_x, "state")->capture_default_str();
    value_cmd->add_flag("--json", v_json, "machine-readable output");
    value_cmd->add_option("--precision", v_prec, "significant digits in human output")
        ->check(CLI::Range(1, 17))
        ->capture_default_str();
    value_cmd->add_option("--manifest", v_manifest, "write a run manifest here");

    // trajectory
    ModelFlags tm;
    double t_T = 1.0, t_x = 1.2, t_dt = 1e-4;
    std::optional<double> t_jump;
    std::string t_out = "trajectory.csv", t_manifest;
    auto* traj_cmd = app.add_subcommand("trajectory", "no-fill optimal path with boundary series");
    tm.add(traj_cmd);
    traj_cmd->add_option("--T", t_T, "horizon")->capture_default_str();
    traj_cmd->add_option("--x", t_x, "initial state")->capture_default_str();
    traj_cmd->add_option("--dt", t_dt, "RK4 step")->capture_default_str();
    traj_cmd->add_option("--force-jump", t_jump, "apply a fill at this time");
    traj_cmd->add_option("--out", t_out, "CSV output")->capture_default_str();
    traj_cmd->add_option("--manifest", t_manifest, "manifest path (default OUT.manifest.json)");

    // montecarlo
    ModelFlags mm;
    double m_T = 1.0, m_x = 1.2, m_dt = 1e-3, m_eps = 0.0;
    std::size_t m_n = 1000;
    std::uint64_t m_seed = 1;
    unsigned m_threads = 1;
    std::string m_strategy = "optimal", m_cost = "per-fill", m_integrator = "euler";
    std::string m_out = "cost.json", m_record, m_manifest;
    auto* mc_cmd = app.add_subcommand("montecarlo", "estimate the expected cost of a strategy");
    mm.add(mc_cmd);
    mc_cmd->add_option("--T", m_T, "horizon")->capture_default_str();
    mc_cmd->add_option("--x", m_x, "initial state")->capture_default_str();
    mc_cmd->add_option("--n", m_n, "number of paths")->capture_default_str();
    mc_cmd->add_option("--dt", m_dt, "time step")->capture_default_str();
    mc_cmd->add_option("--seed", m_seed, "base seed")->capture_default_str();
    mc_cmd->add_option("--closeout-epsilon", m_eps, "closeout window (0: 1e-4 T)")->capture_default_str();
    mc_cmd->add_option("--strategy", m_strategy, "optimal|linear|nodp")
        ->check(CLI::IsMember({"optimal", "linear", "nodp"}))
        ->capture_default_str();
    mc_cmd->add_option("--cost-mode", m_cost, "per-fill|continuous")
        ->check(CLI::IsMember({"per-fill", "continuous"}))
        ->capture_default_str();
    mc_cmd->add_option("--integrator", m_integrator, "euler|rk4")
        ->check(CLI::IsMember({"euler", "rk4"}))
        ->capture_default_str();
    mc_cmd->add_option("--threads", m_threads, "worker threads")->capture_default_str();
    mc_cmd->add_option("--out", m_out, "CostEstimate JSON")->capture_default_str();
    mc_cmd->add_option("--record-path", m_record, "CSV of path 0 (events in FILE.events.csv)");
    mc_cmd->add_option("--manifest", m_manifest, "manifest path (default OUT.manifest.json)");

    // hjb-check
    ModelFlags hm;
    std::vector<double> h_T = {0.25, 0.5, 1.0, 2.0}, h_x;
    unsigned h_threads = 1;
    std::string h_out = "hjb.json", h_manifest;
    auto* hjb_cmd = app.add_subcommand("hjb-check", "HJB residual and minimizer scan");
    hm.add(hjb_cmd);
    hjb_cmd->add_option("--Tgrid", h_T, "comma-separated times to go")->delimiter(',')->capture_default_str();
    hjb_cmd->add_option("--xgrid", h_x, "comma-separated states (default: 61 per T)")->delimiter(',');
    hjb_cmd->add_option("--threads", h_threads, "worker threads")->capture_default_str();
    hjb_cmd->add_option("--out", h_out, "HjbReport JSON")->capture_default_str();
    hjb_cmd->add_option("--manifest", h_manifest, "manifest path (default OUT.manifest.json)");

    // sweep-gamma
    ModelFlags sm;
    double s_T = 1.0, s_x = 1.2;
    std::vector<double> s_grid;
    std::string s_out = "sweep.csv", s_manifest;
    auto* sweep_cmd = app.add_subcommand("sweep-gamma", "value and controls across the fill jump size");
    sm.add(sweep_cmd);
    sweep_cmd->add_option("--T", s_T, "time to go")->capture_default_str();
    sweep_cmd->add_option("--x", s_x, "state")->capture_default_str();
    sweep_cmd->add_option("--gamma-grid", s_grid, "comma-separated jump sizes Gamma (gamma = theta Gamma)")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--out", s_out, "CSV output")->capture_default_str();
    sweep_cmd->add_option("--manifest", s_manifest, "manifest path (default OUT.manifest.json)");

    // market
    MarketParams mk{2.0, 1.0, 4.0, 2.5, 3.0, 10.0};
    double k_T = 1.0, k_x = 1.2, k_dt = 1e-3;
    std::size_t k_n = 1000;
    std::uint64_t k_seed = 1;
    unsigned k_threads = 1;
    std::string k_strategy = "optimal", k_out = "market.json", k_price, k_manifest;
    auto* market_cmd = app.add_subcommand("market", "proceeds identity check under the price model");
    market_cmd->add_option("--Gamma", mk.Gamma, "price jump at a fill")->capture_default_str();
    market_cmd->add_option("--sigma", mk.sigma, "fundamental volatility")->capture_default_str();
    market_cmd->add_option("--alpha-tilde", mk.alpha_tilde, "risk aversion")->capture_default_str();
    market_cmd->add_option("--lambda", mk.lambda, "temporary impact")->capture_default_str();
    market_cmd->add_option("--theta", mk.theta, "fill intensity")->capture_default_str();
    market_cmd->add_option("--p0", mk.p0, "initial price")->capture_default_str();
    market_cmd->add_option("--T", k_T, "horizon")->capture_default_str();
    market_cmd->add_option("--x", k_x, "initial position")->capture_default_str();
    market_cmd->add_option("--n", k_n, "number of paths")->capture_default_str();
    market_cmd->add_option("--dt", k_dt, "time step")->capture_default_str();
    market_cmd->add_option("--seed", k_seed, "base seed")->capture_default_str();
    market_cmd->add_option("--strategy", k_strategy, "optimal|linear|nodp")
        ->check(CLI::IsMember({"optimal", "linear", "nodp"}))
        ->capture_default_str();
    market_cmd->add_option("--threads", k_threads, "worker threads")->capture_default_str();
    market_cmd->add_option("--out", k_out, "report JSON")->capture_default_str();
    market_cmd->add_option("--price-csv", k_price, "price path of path 0");
    market_cmd->add_option("--manifest", k_manifest, "manifest path (default OUT.manifest.json)");

    // replay
    std::string r_manifest;
    auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay_cmd->add_option("--manifest", r_manifest, "manifest file")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    auto strategy_for = [](const std::string& name, const ModelParams& p, double x, double T) -> Strategy {
        if (name == "linear") return linear_control(x, T);
        if (name == "nodp") return nodp_strategy(p);
        return optimal_strategy(p);
    };
    auto manifest_path = [](const std::string& given, const std::string& out) {
        return given.empty() ? out + ".manifest.json" : given;
    };

    try {
        if (*value_cmd) {
            const ModelParams p = vm.params();
            if (!(v_T > 0.0)) throw UsageError("--T must be positive");
            const ValuePoint v = value(p, v_T, v_x);
            if (v_json) {
                json j = {{"tau", v.T},        {"x", v.x},         {"s_index", v.s_index},
                          {"region", std::string(region_name(v.region))},
                          {"w", v.w},          {"dw_dx", v.dw_dx}, {"d2w_dx2", v.d2w_dx2},
                          {"dw_dtau", v.dw_dT}};
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "region   " << region_name(v.region) << '\n'
                          << "s_index  " << fmt(v.s_index, v_prec) << '\n'
                          << "w        " << fmt(v.w, v_prec) << '\n'
                          << "dw_dx    " << fmt(v.dw_dx, v_prec) << '\n'
                          << "d2w_dx2  " << fmt(v.d2w_dx2, v_prec) << '\n'
                          << "dw_dtau  " << fmt(v.dw_dT, v_prec) << '\n';
            }
            if (!v_manifest.empty()) write_manifest(v_manifest, value_cmd, args, std::nullopt, {});
        } else if (*traj_cmd) {
            const ModelParams p = tm.params();
            if (!(t_T > 0.0) || !(t_dt > 0.0) || !(t_dt < t_T)) throw UsageError("need 0 < dt < T");
            const PathRecord r = deterministic_trajectory(p, t_T, t_x, t_dt, t_jump);
            auto os = open_out(t_out);
            os << "t,x_star,beta,xbar_envelope\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
            for (std::size_t k = 0; k < r.times.size(); ++k) {
                const double tau = t_T - r.times[k];
                os << r.times[k] << ',' << r.states[k] << ',' << boundary(p, tau) << ',' << x_bar(p, tau, 0.0)
                   << '\n';
            }
            if (!os) throw std::runtime_error("failed writing '" + t_out + "'");
            write_manifest(manifest_path(t_manifest, t_out), traj_cmd, args, std::nullopt, {t_out});
        } else if (*mc_cmd) {
            const ModelParams p = mm.params();
            SimConfig cfg;
            cfg.horizon = m_T;
            cfg.initial_state = m_x;
            cfg.dt = m_dt;
            cfg.n_paths = m_n;
            cfg.seed = m_seed;
            cfg.closeout_epsilon = m_eps;
            cfg.jump_cost = m_cost == "continuous" ? JumpCostMode::Continuous : JumpCostMode::PerFill;
            cfg.integrator = m_integrator == "rk4" ? Integrator::RK4 : Integrator::Euler;
            cfg.threads = m_threads;
            if (m_n < 2) throw UsageError("--n must be at least 2");
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const Strategy s = strategy_for(m_strategy, p, m_x, m_T);
            const CostEstimate e = estimate_cost(p, cfg, s);
            write_json(m_out, to_json(e));
            std::vector<std::string> outputs{m_out};
            if (!m_record.empty()) {
                PathRng rng(cfg.seed, 0);
                const PathRecord r = simulate_path(p, cfg, s, rng, true);
                auto os = open_out(m_record);
                write_path_csv(os, r);
                const std::string events = m_record + ".events.csv";
                auto es = open_out(events);
                write_events_csv(es, r);
                outputs.push_back(m_record);
                outputs.push_back(events);
            }
            write_manifest(manifest_path(m_manifest, m_out), mc_cmd, args, m_seed, outputs);
            std::cout << "mean " << fmt(e.mean, 6) << "  std_error " << fmt(e.std_error, 6) << "  n " << e.n_paths
                      << '\n';
        } else if (*hjb_cmd) {
            const ModelParams p = hm.params();
            for (double T : h_T)
                if (!(T > 1e-6)) throw UsageError("--Tgrid entries must exceed 1e-6");
            const HjbReport rep = residual_scan(p, h_T, h_x, h_threads);
            write_json(h_out, to_json(rep));
            write_manifest(manifest_path(h_manifest, h_out), hjb_cmd, args, std::nullopt, {h_out});
            std::cout << "max_residual " << fmt(rep.max_residual, 6) << "  max_fd_residual "
                      << fmt(rep.max_fd_residual, 6) << "  minimizer_violations " << rep.minimizer_violations
                      << (rep.passed ? "  PASS" : "  FAIL") << '\n';
            if (!rep.passed) exit_code = kExitCheck;
        } else if (*sweep_cmd) {
            const ModelParams base = sm.params();
            if (!(s_T > 0.0)) throw UsageError("--T must be positive");
            for (std::size_t i = 0; i < s_grid.size(); ++i)
                if (!(s_grid[i] > 0.0) || (i > 0 && !(s_grid[i] > s_grid[i - 1])))
                    throw UsageError("--gamma-grid must be positive and increasing");
            const double cutoff = 2.0 * std::abs(s_x) * c0(base, s_T);
            auto os = open_out(s_out);
            os << "Gamma,w,xi,eta,beta,x_bar0,inside,w_ok,eta_ok\n"
               << std::setprecision(std::numeric_limits<double>::max_digits10);
            double prev_w = 0.0, prev_eta = 0.0;
            bool all_ok = true;
            for (std::size_t i = 0; i < s_grid.size(); ++i) {
                const double G = s_grid[i];
                ModelParams p = base;
                p.gamma = base.theta * G;
                const ValuePoint v = value(p, s_T, s_x);
                const ControlAction a = optimal_control(p, s_T, s_x);
                const bool inside = G < cutoff;
                bool w_ok = true, eta_ok = true;
                if (i > 0) {
                    const double prev_G = s_grid[i - 1];
                    if (prev_G < cutoff && inside) {
                        w_ok = v.w > prev_w + 1e-10;
                        eta_ok = std::abs(a.eta) < prev_eta - 1e-10;
                    } else if (prev_G >= cutoff) {
                        w_ok = std::abs(v.w - prev_w) <= 1e-12 * std::max(1.0, std::abs(v.w));
                        eta_ok = a.eta == 0.0 && prev_eta == 0.0;
                    } else {
                        w_ok = v.w >= prev_w;
                        eta_ok = std::abs(a.eta) <= prev_eta;
                    }
                }
                all_ok = all_ok && w_ok && eta_ok;
                os << G << ',' << v.w << ',' << a.xi << ',' << a.eta << ',' << boundary(p, s_T) << ','
                   << x_bar(p, s_T, 0.0) << ',' << inside << ',' << w_ok << ',' << eta_ok << '\n';
                prev_w = v.w;
                prev_eta = std::abs(a.eta);
            }
            if (!os) throw std::runtime_error("failed writing '" + s_out + "'");
            write_manifest(manifest_path(s_manifest, s_out), sweep_cmd, args, std::nullopt, {s_out});
            std::cout << (all_ok ? "monotonicity PASS" : "monotonicity FAIL") << '\n';
            if (!all_ok) exit_code = kExitCheck;
        } else if (*market_cmd) {
            ModelParams p;
            try {
                p = to_model_params(mk);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            SimConfig cfg;
            cfg.horizon = k_T;
            cfg.initial_state = k_x;
            cfg.dt = k_dt;
            cfg.n_paths = k_n;
            cfg.seed = k_seed;
            cfg.threads = k_threads;
            if (k_n < 2) throw UsageError("--n must be at least 2");
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const Strategy s = strategy_for(k_strategy, p, k_x, k_T);
            const MarketReport rep = market_identity(mk, cfg, s);
            write_json(k_out, to_json(rep));
            std::vector<std::string> outputs{k_out};
            if (!k_price.empty()) {
                PathRng rng(cfg.seed, 0);
                const PathRecord r = simulate_path(p, cfg, s, rng, true);
                const std::vector<double> buy = sample_jump_times(mk.theta, k_T, rng.buy);
                const PricePath pp = simulate_price(mk, r.times, r.jump_times, buy, rng.price);
                auto os = open_out(k_price);
                write_price_csv(os, pp);
                outputs.push_back(k_price);
            }
            write_manifest(manifest_path(k_manifest, k_out), market_cmd, args, k_seed, outputs);
            std::cout << "gap " << fmt(rep.gap_mean, 6) << " +- " << fmt(rep.gap_std_error, 6)
                      << (rep.identity_holds ? "  PASS" : "  FAIL") << '\n';
            if (!rep.identity_holds || rep.max_adverse_error != 0.0) exit_code = kExitCheck;
        } else if (*replay_cmd) {
            std::ifstream is(r_manifest);
            if (!is) throw UsageError("cannot open manifest '" + r_manifest + "'");
            json m;
            try {
                m = json::parse(is);
            } catch (const json::exception& e) {
                throw UsageError("malformed manifest '" + r_manifest + "': " + e.what());
            }
            if (!m.contains("argv") || !m["argv"].is_array()) throw UsageError("manifest has no argv");
            const auto recorded = m["argv"].get<std::vector<std::string>>();
            if (!recorded.empty() && recorded.front() == "replay") throw UsageError("manifest records a replay");
            return run(recorded);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args);
}
