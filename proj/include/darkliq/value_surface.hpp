#pragma once

#include "darkliq/params.hpp"

#include <string_view>

namespace darkliq {

enum class Region { Stopping, Interpolation, Outer };

std::string_view region_name(Region r);

struct ValuePoint {
    double T = 0.0;
    double x = 0.0;
    double s_index = 0.0;  ///< g(T, x)
    Region region = Region::Stopping;
    double w = 0.0;
    double dw_dx = 0.0;
    double d2w_dx2 = 0.0;
    double dw_dT = 0.0;
};

/// Smallest time-to-go accepted by value(); w blows up as T -> 0 for x != 0.
inline constexpr double kMinTimeToGo = 1e-9;

/// Free boundary beta(T) = gamma / (2 theta C0(T)).
double boundary(const ModelParams& p, double T);

/// Interpolation index g(T, x): T on |x| <= beta(T), 0 on |x| >= x_bar(T,0),
/// otherwise the root of x_bar(T, S) = |x| found by bisection. For alpha = 0
/// the interpolation band is empty and only the two end values occur.
double g_index(const ModelParams& p, double T, double x);

/// Quasi-polynomial value function with its partial derivatives.
ValuePoint value(const ModelParams& p, double T, double x);

/// Two-region alpha = 0 value function; throws if alpha != 0.
ValuePoint value_riskneutral(const ModelParams& p, double T, double x);

}  // namespace darkliq
