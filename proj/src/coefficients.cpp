#include "darkliq/coefficients.hpp"

#include "darkliq/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace darkliq {
namespace {

void require_positive_T(double T) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::domain_error("time-to-go must be positive and finite, got " + std::to_string(T));
}

void require_index(double T, double S) {
    require_positive_T(T);
    if (!(S >= 0.0 && S <= T))
        throw std::domain_error("interpolation index S=" + std::to_string(S) + " outside [0, T=" +
                                std::to_string(T) + "]");
}

// (cosh d - e^{-a}) / cosh d and (cosh d - e^{-a}) / sinh d for d, a >= 0.
// Small d: the difference is 2 sinh^2(d/2) - expm1(-a), a sum of nonnegatives.
double ch_minus_exp_over_ch(double d, double a) {
    if (d <= 1.0) {
        const double s = std::sinh(0.5 * d);
        return (2.0 * s * s - std::expm1(-a)) / std::cosh(d);
    }
    const double e2 = std::exp(-2.0 * d);
    return (1.0 + e2 - 2.0 * std::exp(-a - d)) / (1.0 + e2);
}

double ch_minus_exp_over_sh(double d, double a) {
    if (d <= 1.0) {
        const double s = std::sinh(0.5 * d);
        return (2.0 * s * s - std::expm1(-a)) / std::sinh(d);
    }
    const double e2 = std::exp(-2.0 * d);
    return (1.0 + e2 - 2.0 * std::exp(-a - d)) / (-std::expm1(-2.0 * d));
}

// C0(S) - sqrt(alpha lambda), exact for alpha = 0 as well (lambda / S).
double c0_excess(const ModelParams& p, double S) {
    if (p.alpha == 0.0) return p.lambda / S;
    const double k = std::sqrt(p.alpha / p.lambda);
    return 2.0 * std::sqrt(p.alpha * p.lambda) / std::expm1(2.0 * k * S);
}

// mu(S) - 1 = (2 C0(S) + theta lambda - theta~ lambda) / (theta~ lambda), using
// lambda (theta~ - theta) = 4 alpha / (theta~ + theta).
double mu_minus_one_raw(const ModelParams& p, double S) {
    const double tt = p.theta_tilde();
    const double gap = 2.0 * std::sqrt(p.alpha * p.lambda) - 4.0 * p.alpha / (tt + p.theta);
    return (2.0 * c0_excess(p, S) + gap) / (tt * p.lambda);
}

double kappa_raw(const ModelParams& p, double S) {
    if (S == 0.0) return 0.0;
    if (p.alpha == 0.0) return 0.5 * std::log1p(p.theta * S);
    return 0.5 * std::log1p(2.0 / mu_minus_one_raw(p, S));
}

double c2_positive_alpha(const ModelParams& p, double T, double S) {
    const double tt = p.theta_tilde();
    const double lam = p.lambda, th = p.theta;
    if (S == 0.0) {
        const double d = 0.5 * tt * T;
        return p.gamma * lam / (2.0 * p.alpha) * (tt * ch_minus_exp_over_sh(d, 0.5 * th * T) - th);
    }
    const double delta = T - S;
    const double d = 0.5 * tt * delta;
    const double th_d = std::tanh(d);
    const double mu = 1.0 + mu_minus_one_raw(p, S);
    const double c0s = c0(p, S);
    // lambda theta~ (tanh d + mu) - 2 C0(S) e^{-theta delta/2} / cosh d, with
    // lambda theta~ mu = 2 C0(S) + theta lambda folded in.
    const double numerator =
        lam * tt * th_d + th * lam + 2.0 * c0s * ch_minus_exp_over_ch(d, 0.5 * th * delta);
    const double ratio = numerator / (mu * th_d + 1.0);
    return p.gamma / (2.0 * p.alpha) * (ratio - th * lam);
}

double c2_zero_alpha(const ModelParams& p, double T, double S) {
    const double th = p.theta;
    if (S == 0.0) {
        const double u = th * T;
        if (u < 1e-2) {
            // (gamma/theta) (1 - u/(e^u - 1)) by series
            const double u2 = u * u;
            return p.gamma / th * (0.5 * u - u2 / 12.0 + u2 * u2 / 720.0 - u2 * u2 * u2 / 30240.0);
        }
        return p.gamma * (1.0 / th - T / std::expm1(u));
    }
    const double delta = T - S;
    const double z = 0.5 * th * delta + 0.5 * std::log1p(th * S);
    const double num = -std::expm1(-th * delta) / th - delta * std::exp(-2.0 * z);
    return p.gamma * num / (-std::expm1(-2.0 * z));
}

double x_bar_positive_alpha(const ModelParams& p, double T, double S) {
    const double tt = p.theta_tilde();
    const double g = p.gamma, th = p.theta, al = p.alpha;
    const double delta = T - S;
    const double d = 0.5 * tt * delta;
    const double a = 0.5 * th * delta;
    const double em = std::expm1(d - a);   // e^{d-a} - 1
    const double ep = std::expm1(-d - a);  // e^{-d-a} - 1
    const double sh = 0.5 * (em - ep);     // sinh(d) e^{-a}
    const double ch_m1 = 0.5 * (em + ep);  // cosh(d) e^{-a} - 1
    if (S == 0.0) {
        const double A0 = g / (tt * th * p.lambda) + th * g / (2.0 * tt * al);
        return A0 * sh + g / (2.0 * al) * ch_m1;
    }
    const double ic = inv_c0(p, S);
    // gamma mu / (2 theta C0(S)) = gamma/(theta theta~ lambda) + gamma/(2 theta~ C0(S))
    const double A = g / (th * tt * p.lambda) + g * ic / (2.0 * tt) + th * g / (2.0 * tt * al);
    return A * sh + g / (2.0 * al) * ch_m1 + g * ic / (2.0 * th) * (1.0 + ch_m1);
}

}  // namespace

double c0(const ModelParams& p, double T) {
    require_positive_T(T);
    if (p.alpha == 0.0) return p.lambda / T;
    const double k = std::sqrt(p.alpha / p.lambda);
    return std::sqrt(p.lambda * p.alpha) / std::tanh(k * T);
}

double inv_c0(const ModelParams& p, double T) {
    if (!(T >= 0.0) || !std::isfinite(T))
        throw std::domain_error("time-to-go must be nonnegative and finite, got " + std::to_string(T));
    if (p.alpha == 0.0) return T / p.lambda;
    const double k = std::sqrt(p.alpha / p.lambda);
    return std::tanh(k * T) / std::sqrt(p.lambda * p.alpha);
}

double c0_rate(const ModelParams& p, double T) {
    require_positive_T(T);
    if (p.alpha == 0.0) return -p.lambda / (T * T);
    const double s = std::sinh(std::sqrt(p.alpha / p.lambda) * T);
    return -p.alpha / (s * s);
}

double c_nodp(const ModelParams& p, double T) {
    require_positive_T(T);
    const double tt = p.theta_tilde();
    // (lambda theta~/2)(coth z - 1) + lambda (theta~ - theta)/2
    return p.lambda * tt / std::expm1(tt * T) + 2.0 * p.alpha / (tt + p.theta);
}

MuKappa mu_kappa(const ModelParams& p, double S) {
    if (!(S > 0.0) || !std::isfinite(S))
        throw std::domain_error("mu_kappa requires S > 0, got " + std::to_string(S));
    if (p.alpha == 0.0) throw std::domain_error("mu_kappa requires alpha > 0");
    MuKappa out;
    out.mu_minus_one = mu_minus_one_raw(p, S);
    out.mu = 1.0 + out.mu_minus_one;
    out.kappa = 0.5 * std::log1p(2.0 / out.mu_minus_one);
    return out;
}

double coeff_c1(const ModelParams& p, double T, double S) {
    require_index(T, S);
    const double tt = p.theta_tilde();
    const double z = 0.5 * tt * (T - S) + kappa_raw(p, S);
    return p.lambda * tt / std::expm1(2.0 * z) + 2.0 * p.alpha / (tt + p.theta);
}

double coeff_c2(const ModelParams& p, double T, double S) {
    require_index(T, S);
    if (S == T) return 0.0;
    return p.alpha == 0.0 ? c2_zero_alpha(p, T, S) : c2_positive_alpha(p, T, S);
}

double coeff_c3(const ModelParams& p, double T, double S) {
    require_index(T, S);
    if (S == T) return 0.0;
    const double g2 = p.gamma * p.gamma / (4.0 * p.theta);
    const double inv4l = 1.0 / (4.0 * p.lambda);
    // -int_0^{T-S} e^{-theta v} ( gamma^2/(4 theta C0(T-v)) + C2(T-v,S)^2/(4 lambda) ) dv
    auto integrand = [&](double v) {
        const double u = std::max(T - v, S);
        const double c2 = u == S ? 0.0 : (p.alpha == 0.0 ? c2_zero_alpha(p, u, S) : c2_positive_alpha(p, u, S));
        return std::exp(-p.theta * v) * (g2 * inv_c0(p, u) + c2 * c2 * inv4l);
    };
    const auto r = numerics::integrate(integrand, 0.0, T - S, 1e-14, 1e-13);
    return -r.value;
}

double x_bar(const ModelParams& p, double T, double S) {
    require_index(T, S);
    if (p.alpha == 0.0) return p.gamma * T / (2.0 * p.theta * p.lambda);
    if (S == T) return p.gamma * inv_c0(p, T) / (2.0 * p.theta);
    return x_bar_positive_alpha(p, T, S);
}

CoefficientFrame coeff_frame(const ModelParams& p, double T, double S) {
    if (p.alpha == 0.0) throw std::domain_error("coeff_frame requires alpha > 0; use coeff_frame_riskneutral");
    require_index(T, S);
    return {T, S, coeff_c1(p, T, S), coeff_c2(p, T, S), coeff_c3(p, T, S), x_bar(p, T, S)};
}

CoefficientFrame coeff_frame_riskneutral(const ModelParams& p, double T, double S) {
    if (p.alpha != 0.0) throw std::domain_error("coeff_frame_riskneutral requires alpha = 0");
    require_index(T, S);
    return {T, S, coeff_c1(p, T, S), coeff_c2(p, T, S), coeff_c3(p, T, S), x_bar(p, T, S)};
}

CoefficientFrame frame(const ModelParams& p, double T, double S) {
    return p.alpha == 0.0 ? coeff_frame_riskneutral(p, T, S) : coeff_frame(p, T, S);
}

CoefficientRates coefficient_rates(const ModelParams& p, const CoefficientFrame& f) {
    const double lam = p.lambda, th = p.theta;
    CoefficientRates r;
    r.dc1 = p.alpha - f.c1 * f.c1 / lam - th * f.c1;
    r.dc2 = p.gamma - f.c2 * (f.c1 / lam + th);
    r.dc3 = -th * f.c3 - p.gamma * p.gamma * inv_c0(p, f.T) / (4.0 * th) - f.c2 * f.c2 / (4.0 * lam);
    r.dx_bar = f.c1 * f.x_bar / lam + f.c2 / (2.0 * lam);
    return r;
}

}  // namespace darkliq
