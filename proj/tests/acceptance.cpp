// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "darkliq/coefficients.hpp"
#include "darkliq/control.hpp"
#include "darkliq/hjb_check.hpp"
#include "darkliq/market.hpp"
#include "darkliq/parallel.hpp"
#include "darkliq/simulator.hpp"
#include "darkliq/value_surface.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

using namespace darkliq;

namespace {

const ModelParams kBase = ModelParams::make(2.5, 6.0, 3.0, 4.0);
const ModelParams kNeutral = ModelParams::make(2.5, 6.0, 3.0, 0.0);

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0.0 || secs <= budget_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("criterion %d %-28s %s  %s  [%.2f s%s]\n", id, name, ok ? "PASS" : "FAIL", o.detail.c_str(), secs,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome crossing() {
    MarketParams m{2.0, 1.0, 4.0, 2.5, 3.0, 10.0};
    const ModelParams p = to_model_params(m);
    const double tc = 1.0 - g_index(p, 1.0, 0.3);
    return {std::abs(tc - 0.1) <= 0.02, fmt("T-g(1,0.3) = %.6f (target 0.1 +- 0.02)", tc)};
}

Outcome hjb() {
    const std::vector<double> Ts = {0.25, 0.5, 1.0, 2.0};
    const HjbReport a = residual_scan(kBase, Ts, {}, default_threads());
    const HjbReport b = residual_scan(kNeutral, Ts, {}, default_threads());
    const bool ok = a.max_residual <= 1e-6 && b.max_residual <= 1e-6 && a.minimizer_violations == 0 &&
                    b.minimizer_violations == 0;
    return {ok, fmt("max scaled residual %.2e / %.2e, violations %.0f / %.0f (alpha 4 / alpha 0)", a.max_residual,
                    b.max_residual, static_cast<double>(a.minimizer_violations),
                    static_cast<double>(b.minimizer_violations))};
}

Outcome ode() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> uT(0.1, 3.0), uf(0.02, 0.98);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double T = uT(rng), S = uf(rng) * T;
        const CoefficientFrame f = coeff_frame(kBase, T, S);
        const oracle::OdeFrame o = oracle::ode_frame(kBase, T, S);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
        worst = std::max({worst, rel(f.c1, o.c1), rel(f.c2, o.c2), rel(f.c3, o.c3), rel(f.x_bar, o.x_bar)});
    }
    return {worst <= 1e-7, fmt("max relative deviation %.2e over 20 (T,S) pairs", worst)};
}

Outcome smooth_fit() {
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double T = 0.2 + 0.3 * i;
        for (double c : {boundary(kBase, T), x_bar(kBase, T, 0.0)}) {
            const double w0 = value(kBase, T, c).w;
            const double left = (w0 - value(kBase, T, c - h).w) / h;
            const double right = (value(kBase, T, c + h).w - w0) / h;
            worst = std::max(worst, std::abs(left - right));
        }
    }
    double jump_err = 0.0;
    for (double T : {0.5, 1.0, 2.0}) {
        const double b = boundary(kNeutral, T);
        const double in = value_riskneutral(kNeutral, T, b).d2w_dx2;
        const double out = value_riskneutral(kNeutral, T, b * (1 + 1e-12)).d2w_dx2;
        jump_err = std::max({jump_err, std::abs(in - 2 * kNeutral.lambda / T) / in,
                             std::abs(out - 2 * oracle::ode_frame(kNeutral, T, 0.0).c1) / out});
    }
    return {worst <= 1e-4 && jump_err <= 1e-7,
            fmt("max one-sided slope gap %.2e; alpha 0 d2w jump rel err %.2e", worst, jump_err)};
}

Outcome monte_carlo() {
    SimConfig c;
    c.horizon = 1.0;
    c.initial_state = 1.2;
    c.dt = 1e-4;
    c.n_paths = 100000;
    c.seed = 1;
    c.threads = default_threads();
    const double w = value(kBase, 1.0, 1.2).w;
    const CostEstimate opt = estimate_cost(kBase, c, optimal_strategy(kBase));
    const CostEstimate lin = estimate_cost(kBase, c, linear_control(1.2, 1.0));
    const CostEstimate nodp = estimate_cost(kBase, c, nodp_strategy(kBase));
    const bool ok_opt = std::abs(opt.mean - w) <= 3 * opt.std_error;
    const bool ok_lin = lin.mean - w > 3 * std::hypot(lin.std_error, opt.std_error);
    const bool ok_nodp = nodp.mean - w > 3 * std::hypot(nodp.std_error, opt.std_error);
    char buf[320];
    std::snprintf(buf, sizeof buf, "w=%.5f optimal %.5f+-%.5f linear %.5f+-%.5f gamma0 %.5f+-%.5f", w, opt.mean,
                  opt.std_error, lin.mean, lin.std_error, nodp.mean, nodp.std_error);
    return {ok_opt && ok_lin && ok_nodp, buf};
}

double state_at(const PathRecord& r, double t) {
    std::size_t k = 0;
    while (k + 1 < r.times.size() && r.times[k + 1] <= t) ++k;
    return r.states[k] - r.xi_applied[k] * (t - r.times[k]);
}

Outcome bounds() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uT(0.02, 3.0), ux(-3.0, 3.0);
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double T = uT(rng), x = ux(rng);
        if (x == 0.0) continue;
        for (const ModelParams& p : {kBase, kNeutral}) {
            const double w = value(p, T, x).w, xi = std::abs(optimal_control(p, T, x).xi);
            const double lo = coeff_c1(p, T, 0.0), hi = c0(p, T);
            if (!(lo * x * x < w && w <= hi * x * x * (1 + 1e-14))) ++bad;
            if (!(lo * std::abs(x) / p.lambda < xi && xi <= hi * std::abs(x) / p.lambda * (1 + 1e-14))) ++bad;
            if (!(hi / p.lambda <= (1 / T + std::sqrt(p.alpha / p.lambda)) * (1 + 1e-14))) ++bad;
        }
    }
    SimConfig c;
    c.horizon = 1.0;
    c.initial_state = 1.2;
    c.dt = 1e-4;
    c.n_paths = 1;
    std::size_t gron = 0;
    double worst = -1e300;
    for (std::uint64_t i = 0; i < 500; ++i) {
        PathRng r(c.seed, i);
        const PathRecord rec = simulate_path(kBase, c, optimal_strategy(kBase), r);
        double xi_max = 0.0;
        for (std::size_t k = 0; k + 1 < rec.times.size() && rec.times[k] < 1.0 - c.epsilon(); ++k)
            xi_max = std::max(xi_max, std::abs(rec.xi_applied[k]));
        const double slack = 10 * c.dt * xi_max;
        for (int j = 0; j < 20; ++j) {
            const double t = (1.0 - c.epsilon()) * j / 20.0;
            const double excess = std::abs(state_at(rec, t)) - trajectory_bound(kBase, 1.0, 1.2, t) - slack;
            worst = std::max(worst, excess);
            if (excess > 0.0) ++gron;
        }
    }
    return {bad == 0 && gron == 0,
            fmt("bound violations %.0f of 6000; Gronwall violations %.0f of 10000 (max excess %.2e)",
                static_cast<double>(bad), static_cast<double>(gron), worst)};
}

Outcome gamma_grid() {
    const double T = 1.0, x = 0.8;
    const double cutoff = 2.0 * x * c0(kBase, T);
    double min_dw = 1e300, min_deta = 1e300, const_dev = 0.0;
    double pw = 0.0, pe = 0.0;
    for (int i = 1; i <= 20; ++i) {
        ModelParams p = kBase;
        p.gamma = p.theta * cutoff * i / 20.0 * 0.999;
        const double w = value(p, T, x).w, e = std::abs(optimal_control(p, T, x).eta);
        if (i > 1) {
            min_dw = std::min(min_dw, w - pw);
            min_deta = std::min(min_deta, pe - e);
        }
        pw = w;
        pe = e;
    }
    ModelParams lo = kBase;
    lo.gamma = lo.theta * cutoff * 1.001;
    const double w_lo = value(lo, T, x).w;
    for (int i = 1; i <= 20; ++i) {
        ModelParams p = kBase;
        p.gamma = p.theta * cutoff * (1.001 + 0.1 * i);
        const_dev = std::max({const_dev, std::abs(value(p, T, x).w - w_lo), std::abs(optimal_control(p, T, x).eta)});
    }
    double min_c2 = 1e300, min_c3 = 1e300;
    for (double S : {0.1, 0.4, 0.7}) {
        double p2 = 0.0, p3 = 0.0;
        for (int i = 1; i <= 20; ++i) {
            ModelParams p = kBase;
            p.gamma = 0.5 * i;
            const CoefficientFrame f = coeff_frame(p, T, S);
            if (i > 1) {
                min_c2 = std::min(min_c2, f.c2 - p2);
                min_c3 = std::min(min_c3, p3 - f.c3);
            }
            p2 = f.c2;
            p3 = f.c3;
        }
    }
    const bool ok = min_dw > 1e-10 && min_deta > 1e-10 && const_dev == 0.0 && min_c2 > 1e-10 && min_c3 > 1e-10;
    char buf[320];
    std::snprintf(buf, sizeof buf, "min steps: w %.2e |eta| %.2e C2 %.2e -C3 %.2e; beyond cutoff dev %.1e", min_dw,
                  min_deta, min_c2, min_c3, const_dev);
    return {ok, buf};
}

Outcome market() {
    MarketParams m{2.0, 1.0, 4.0, 2.5, 3.0, 10.0};
    SimConfig c;
    c.horizon = 1.0;
    c.initial_state = 1.2;
    c.dt = 1e-3;
    c.n_paths = 100000;
    c.seed = 7;
    c.threads = default_threads();
    const MarketReport r = market_identity(m, c, optimal_strategy(to_model_params(m)));
    return {r.identity_holds && std::abs(r.gap_mean) <= 3 * r.gap_std_error && r.max_adverse_error == 0.0,
            fmt("gap %.5f +- %.5f, max adverse error %.1e, shortfall %.5f", r.gap_mean, r.gap_std_error,
                r.max_adverse_error, r.mean_shortfall)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("darkliq_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::string ref;
    bool same = true;
    for (const char* strategy : {"optimal", "nodp"})
        for (int threads : {1, 4, 8}) {
            const fs::path out = dir / ("mc_" + std::string(strategy) + std::to_string(threads) + ".json");
            const std::string cmd = std::string(DARKLIQ_CLI) + " montecarlo --x 1.2 --n 3000 --dt 1e-3 --seed 42" +
                                    " --strategy " + strategy + " --threads " + std::to_string(threads) +
                                    " --out " + out.string() + " > /dev/null 2>&1";
            const int status = std::system(cmd.c_str());
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "montecarlo command failed"};
            const std::string body = slurp(out);
            if (threads == 1) ref = body;
            same = same && body == ref;
        }
    fs::remove_all(dir);
    return {same, same ? "identical JSON for threads 1, 4, 8" : "JSON differs across thread counts"};
}

}  // namespace

int main() {
    report(1, "crossing time", 1.0, crossing);
    report(2, "hjb scan", 30.0, hjb);
    report(3, "ode consistency", 10.0, ode);
    report(4, "smooth fit", 0.0, smooth_fit);
    report(5, "monte carlo cost", 300.0, monte_carlo);
    report(6, "bounds and gronwall", 0.0, bounds);
    report(7, "gamma monotonicity", 0.0, gamma_grid);
    report(8, "market identity", 0.0, market);
    report(9, "determinism", 0.0, determinism);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
