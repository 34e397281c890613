#include "darkliq/value_surface.hpp"

#include "darkliq/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace darkliq {
namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

ValuePoint stopping_point(const ModelParams& p, double T, double x) {
    const double c = c0(p, T);
    ValuePoint v;
    v.T = T;
    v.x = x;
    v.s_index = T;
    v.region = Region::Stopping;
    v.w = c * x * x;
    v.dw_dx = 2.0 * c * x;
    v.d2w_dx2 = 2.0 * c;
    v.dw_dT = c0_rate(p, T) * x * x;
    return v;
}

// The S-derivatives cancel along x = x_bar(T,S), so dw/dT only needs the
// T-rates at fixed S.
ValuePoint quasi_point(const ModelParams& p, double T, double x, double S, Region region) {
    const CoefficientFrame f = frame(p, T, S);
    const CoefficientRates r = coefficient_rates(p, f);
    const double ax = std::abs(x);
    ValuePoint v;
    v.T = T;
    v.x = x;
    v.s_index = S;
    v.region = region;
    v.w = f.c1 * x * x + f.c2 * ax + f.c3;
    v.dw_dx = 2.0 * f.c1 * x + sgn(x) * f.c2;
    v.d2w_dx2 = 2.0 * f.c1;
    v.dw_dT = r.dc1 * x * x + r.dc2 * ax + r.dc3;
    return v;
}

void require_time(double T) {
    if (!(T >= kMinTimeToGo) || !std::isfinite(T))
        throw std::domain_error("value requires time-to-go >= 1e-9, got " + std::to_string(T));
}

}  // namespace

std::string_view region_name(Region r) {
    switch (r) {
        case Region::Stopping: return "stopping";
        case Region::Interpolation: return "interpolation";
        case Region::Outer: return "outer";
    }
    return "unknown";
}

double boundary(const ModelParams& p, double T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::domain_error("boundary requires T > 0, got " + std::to_string(T));
    return p.gamma * inv_c0(p, T) / (2.0 * p.theta);
}

double g_index(const ModelParams& p, double T, double x) {
    const double ax = std::abs(x);
    if (ax <= boundary(p, T)) return T;
    if (ax >= x_bar(p, T, 0.0)) return 0.0;
    if (p.alpha == 0.0) return 0.0;  // unreachable: beta(T) = x_bar(T,0)

    // x_bar(T, .) is strictly decreasing: lo has x_bar > |x|, hi has x_bar < |x|.
    const double tol = 1e-12 * std::max(1.0, ax);
    double lo = 0.0, hi = T;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double diff = x_bar(p, T, mid) - ax;
        if (std::abs(diff) <= tol) break;
        if (diff > 0.0)
            lo = mid;
        else
            hi = mid;
        if (!(hi - lo > 0.0)) break;
    }
    return mid;
}

ValuePoint value(const ModelParams& p, double T, double x) {
    require_time(T);
    if (p.alpha == 0.0) return value_riskneutral(p, T, x);
    const double ax = std::abs(x);
    if (ax <= boundary(p, T)) return stopping_point(p, T, x);
    if (ax >= x_bar(p, T, 0.0)) return quasi_point(p, T, x, 0.0, Region::Outer);
    return quasi_point(p, T, x, g_index(p, T, x), Region::Interpolation);
}

ValuePoint value_riskneutral(const ModelParams& p, double T, double x) {
    if (p.alpha != 0.0) throw std::domain_error("value_riskneutral requires alpha = 0");
    require_time(T);
    if (std::abs(x) <= boundary(p, T)) return stopping_point(p, T, x);
    return quasi_point(p, T, x, 0.0, Region::Outer);
}

}  // namespace darkliq
