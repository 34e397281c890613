#include "darkliq/coefficients.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace darkliq;
using doctest::Approx;

namespace {

const ModelParams kBase = ModelParams::make(2.5, 6.0, 3.0, 4.0);
const ModelParams kNeutral = ModelParams::make(2.5, 6.0, 3.0, 0.0);

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_SUITE("coefficients") {

TEST_CASE("parameters are validated") {
    CHECK_THROWS_AS(ModelParams::make(0.0, 1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::make(1.0, -1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::make(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::make(1.0, 1.0, 1.0, -0.1), std::invalid_argument);
    CHECK(kBase.theta_tilde() > kBase.theta);
    CHECK(kNeutral.theta_tilde() == kNeutral.theta);
}

TEST_CASE("c0") {
    CHECK(c0(kBase, 60.0) == Approx(std::sqrt(10.0)).epsilon(1e-14));
    CHECK(c0(kNeutral, 1.0) == 2.5);
    // frozen from the 50-digit oracle
    CHECK(c0(kBase, 1.0) == Approx(3.7097978417577007).epsilon(1e-15));
    CHECK(rel(c0(kBase, 1.0), oracle::c0(kBase, 1.0)) < 1e-15);
    for (double T : {1e-6, 0.01, 0.3, 2.0, 7.5}) CHECK(rel(c0(kBase, T), oracle::c0(kBase, T)) < 1e-14);
    CHECK(c0(kBase, 0.5) > c0(kBase, 0.6));
    CHECK_THROWS_AS(c0(kBase, 0.0), std::domain_error);
    CHECK_THROWS_AS(c0(kBase, -1.0), std::domain_error);
    CHECK(inv_c0(kBase, 0.0) == 0.0);
}

TEST_CASE("c0 rate is the Riccati right-hand side") {
    for (double T : {0.1, 1.0, 3.0}) {
        const double c = c0(kBase, T);
        CHECK(c0_rate(kBase, T) == Approx(kBase.alpha - c * c / kBase.lambda).epsilon(1e-12));
    }
}

TEST_CASE("c_nodp") {
    CHECK(c_nodp(kNeutral, 50.0) == Approx(0.0).epsilon(1e-12));
    CHECK(c_nodp(kBase, 1e-7) * 1e-7 == Approx(kBase.lambda).epsilon(1e-6));
    CHECK(std::abs(c_nodp(kBase, 1.0) - oracle::c_nodp(kBase, 1.0)) < 1e-8);
    for (double T : {0.05, 0.5, 1.0, 4.0}) CHECK(c_nodp(kBase, T) < c0(kBase, T));
    CHECK(c_nodp(kBase, 1.0) == Approx(coeff_c1(kBase, 1.0, 0.0)).epsilon(1e-14));
    CHECK_THROWS_AS(c_nodp(kBase, 0.0), std::domain_error);
}

TEST_CASE("mu and kappa") {
    for (double S : {0.01, 0.3, 0.9, 5.0}) {
        const MuKappa mk = mu_kappa(kBase, S);
        CHECK(mk.mu > 1.0);
        CHECK(mk.kappa > 0.0);
        CHECK(1.0 / std::tanh(mk.kappa) == Approx(mk.mu).epsilon(1e-12));
    }
    const double tt = kBase.theta_tilde();
    const double limit = (2.0 * std::sqrt(kBase.alpha * kBase.lambda) + kBase.theta * kBase.lambda) / (tt * kBase.lambda);
    CHECK(mu_kappa(kBase, 40.0).mu == Approx(limit).epsilon(1e-14));
    CHECK(rel(mu_kappa(kBase, 0.9).mu, oracle::mu(kBase, 0.9)) < 1e-14);
    // mu - 1 stays accurate where mu is within rounding of its limit
    const double mm1_exact = static_cast<double>(oracle::mp(oracle::mu(kBase, 30.0)) - 1);
    CHECK(rel(mu_kappa(kBase, 30.0).mu_minus_one, mm1_exact) < 1e-12);
    CHECK_THROWS_AS(mu_kappa(kBase, 0.0), std::domain_error);
    CHECK_THROWS_AS(mu_kappa(kNeutral, 1.0), std::domain_error);
}

TEST_CASE("frame at S = T is the initial condition") {
    for (double T : {0.2, 1.0, 3.0}) {
        const CoefficientFrame f = coeff_frame(kBase, T, T);
        CHECK(f.c1 == Approx(c0(kBase, T)).epsilon(1e-14));
        CHECK(f.c2 == 0.0);
        CHECK(f.c3 == 0.0);
        CHECK(f.x_bar == Approx(kBase.gamma / (2.0 * kBase.theta * c0(kBase, T))).epsilon(1e-14));
        // and continuously so
        const CoefficientFrame g = coeff_frame(kBase, T, T * (1.0 - 1e-9));
        CHECK(g.c1 == Approx(f.c1).epsilon(1e-8));
        CHECK(std::abs(g.c2) < 1e-7);
        CHECK(g.x_bar == Approx(f.x_bar).epsilon(1e-8));
    }
}

TEST_CASE("frame matches the ODE oracle at (1, 0.5)") {
    const CoefficientFrame f = coeff_frame(kBase, 1.0, 0.5);
    const oracle::OdeFrame o = oracle::ode_frame(kBase, 1.0, 0.5);
    CHECK(rel(f.c1, o.c1) < 1e-7);
    CHECK(rel(f.c2, o.c2) < 1e-7);
    CHECK(rel(f.c3, o.c3) < 1e-7);
    CHECK(rel(f.x_bar, o.x_bar) < 1e-7);
    // frozen from the oracle
    CHECK(f.c1 == Approx(1.6086000051687).epsilon(1e-11));
    CHECK(f.c2 == Approx(1.3360879939428).epsilon(1e-11));
    CHECK(f.c3 == Approx(-0.2154222041407).epsilon(1e-11));
    CHECK(f.x_bar == Approx(0.4101404727523).epsilon(1e-11));
}

TEST_CASE("S = 0 limit formulas") {
    const CoefficientFrame f0 = coeff_frame(kBase, 1.0, 0.0);
    const CoefficientFrame fe = coeff_frame(kBase, 1.0, 1e-6);
    CHECK(std::abs(f0.c1 - fe.c1) < 1e-4);
    CHECK(std::abs(f0.c2 - fe.c2) < 1e-4);
    CHECK(std::abs(f0.c3 - fe.c3) < 1e-4);
    CHECK(std::abs(f0.x_bar - fe.x_bar) < 1e-4);
    const oracle::OdeFrame o = oracle::ode_frame(kBase, 1.0, 0.0);
    CHECK(rel(f0.c1, o.c1) < 1e-7);
    CHECK(rel(f0.c2, o.c2) < 1e-7);
    CHECK(rel(f0.c3, o.c3) < 1e-7);
    CHECK(f0.c1 == Approx(c_nodp(kBase, 1.0)).epsilon(1e-14));
}

TEST_CASE("C3 integrand carries a decaying exponential") {
    // The reversed sign gives about -0.834 here.
    CHECK(coeff_c3(kBase, 1.0, 0.5) == Approx(-0.2154222041407).epsilon(1e-10));
}

TEST_CASE("frame errors") {
    CHECK_THROWS_AS(coeff_frame(kBase, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(coeff_frame(kBase, 1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(coeff_frame(kBase, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(coeff_frame(kNeutral, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(coeff_frame_riskneutral(kBase, 1.0, 0.5), std::domain_error);
}

TEST_CASE("risk-neutral frame") {
    for (double S : {0.0, 0.3, 0.99, 1.0}) CHECK(coeff_frame_riskneutral(kNeutral, 1.0, S).x_bar == Approx(0.4));
    const CoefficientFrame fT = coeff_frame_riskneutral(kNeutral, 1.0, 1.0);
    CHECK(fT.c1 == Approx(2.5).epsilon(1e-14));
    CHECK(fT.c2 == 0.0);
    CHECK(fT.c3 == 0.0);
    for (double S : {0.0, 0.4}) {
        const CoefficientFrame f = coeff_frame_riskneutral(kNeutral, 1.0, S);
        const oracle::OdeFrame o = oracle::ode_frame(kNeutral, 1.0, S);
        CHECK(rel(f.c1, o.c1) < 1e-7);
        CHECK(rel(f.c2, o.c2) < 1e-7);
        CHECK(rel(f.c3, o.c3) < 1e-7);
    }
    // small-T series branch joins the direct formula
    const double a = coeff_c2(kNeutral, 0.0033, 0.0);
    const double b = coeff_c2(kNeutral, 0.0034, 0.0);
    CHECK(a < b);
    CHECK(std::abs(coeff_c2(kNeutral, 1e-2 / 3.0 * (1 - 1e-12), 0.0) - coeff_c2(kNeutral, 1e-2 / 3.0 * (1 + 1e-12), 0.0)) <
          1e-13);
}

TEST_CASE("finite differences in T reproduce the coefficient rates") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uT(0.2, 3.0), uf(0.05, 0.95);
    const double h = 1e-5;
    for (const ModelParams& p : {kBase, kNeutral}) {
        for (int i = 0; i < 15; ++i) {
            const double T = uT(rng), S = uf(rng) * T;
            const CoefficientRates r = coefficient_rates(p, frame(p, T, S));
            const CoefficientFrame up = frame(p, T + h, S), dn = frame(p, T - h, S);
            auto close = [](double fd, double exact) { return std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)); };
            CHECK(close((up.c1 - dn.c1) / (2 * h), r.dc1));
            CHECK(close((up.c2 - dn.c2) / (2 * h), r.dc2));
            CHECK(close((up.c3 - dn.c3) / (2 * h), r.dc3));
            if (p.alpha > 0.0) CHECK(close((up.x_bar - dn.x_bar) / (2 * h), r.dx_bar));
        }
    }
}

TEST_CASE("ordering chain and monotone trajectory family") {
    for (double T : {0.3, 1.0, 2.5}) {
        double prev_c1 = coeff_c1(kBase, T, 0.0), prev_x = x_bar(kBase, T, 0.0);
        CHECK(prev_c1 > 0.0);
        for (int i = 1; i < 20; ++i) {
            const double S = T * i / 20.0;
            const double c1 = coeff_c1(kBase, T, S), xb = x_bar(kBase, T, S);
            CHECK(c1 > prev_c1);
            CHECK(xb < prev_x);
            prev_c1 = c1;
            prev_x = xb;
        }
        CHECK(prev_c1 < c0(kBase, T));
        CHECK(c0(kBase, T) <= kBase.lambda / T + std::sqrt(kBase.alpha * kBase.lambda));
    }
}

TEST_CASE("sign pattern of C2 and C3") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uT(0.05, 4.0), uf(0.0, 0.999);
    for (int i = 0; i < 200; ++i) {
        const double T = uT(rng), S = uf(rng) * T;
        const CoefficientFrame f = coeff_frame(kBase, T, S);
        CHECK(f.c1 > 0.0);
        CHECK(f.c2 > 0.0);
        CHECK(f.c3 < 0.0);
    }
}

TEST_CASE("C3 quadrature agrees with the ODE") {
    for (auto [T, S] : {std::pair{0.7, 0.2}, std::pair{2.0, 1.1}, std::pair{1.5, 0.0}}) {
        CHECK(std::abs(coeff_c3(kBase, T, S) - oracle::ode_frame(kBase, T, S).c3) < 1e-7);
    }
}

TEST_CASE("gamma dependence of the coefficients") {
    for (double S : {0.0, 0.3, 0.7}) {
        double prev_c2 = 0.0, prev_c3 = 0.0, prev_x = 0.0;
        const double c1_ref = coeff_c1(kBase, 1.0, S);
        for (int i = 1; i <= 10; ++i) {
            ModelParams p = kBase;
            p.gamma = 1.5 * i;
            const CoefficientFrame f = coeff_frame(p, 1.0, S);
            CHECK(f.c1 == c1_ref);
            if (i > 1) {
                CHECK(f.c2 > prev_c2 + 1e-10);
                CHECK(f.c3 < prev_c3 - 1e-10);
                CHECK(f.x_bar > prev_x + 1e-10);
            }
            prev_c2 = f.c2;
            prev_c3 = f.c3;
            prev_x = f.x_bar;
        }
    }
}

TEST_CASE("large horizons stay finite") {
    for (double T : {50.0, 500.0}) {
        for (double S : {0.0, 1.0, T - 1.0}) {
            const CoefficientFrame f = coeff_frame(kBase, T, S);
            CHECK(std::isfinite(f.c1));
            CHECK(std::isfinite(f.c2));
            CHECK(std::isfinite(f.x_bar));
        }
    }
    CHECK(coeff_c1(kBase, 500.0, 0.0) ==
          Approx(2.0 * kBase.alpha / (kBase.theta_tilde() + kBase.theta)).epsilon(1e-14));
}

}  // TEST_SUITE
