#include "doctest.h"

#include <cmath>

#include "clusterforge/classical.hpp"
#include "clusterforge/errors.hpp"

using namespace clusterforge;

namespace {

// independent oracle: inversion of w e^{sigma w} = z gives the coefficients
double lagrange_coefficient(double sigma, int n) {
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return std::pow(-static_cast<double>(n) * sigma, n - 1) / fact;
}

} // namespace

TEST_CASE("unit ball volumes") {
    CHECK(ball_volume(1) == doctest::Approx(2.0));
    CHECK(ball_volume(2) == doctest::Approx(M_PI));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("interaction-strength integral") {
    const auto rods = PairPotential::hard_rods(0.7, 0.1);
    CHECK(mayer_norm_integral(rods) == doctest::Approx(1.4).epsilon(1e-12));

    auto zero = PairPotential::hard_rods(0.0, 0.1);
    CHECK(mayer_norm_integral(zero) == doctest::Approx(0.0));

    PairPotential sphere;
    sphere.d = 3;
    sphere.r = 0.5;
    CHECK(mayer_norm_integral(sphere) ==
          doctest::Approx(4.0 * M_PI / 3.0 * 0.125).epsilon(1e-10));

    // square well: exact piecewise value
    const double beta = 0.8, eps = 0.4, r = 0.6, R = 1.1;
    const auto well = PairPotential::square_well(3, r, eps, R, 0.5, beta, 0.01);
    const double expected =
        ball_volume(3) * std::pow(r, 3) +
        (std::exp(beta * eps) - 1.0) * ball_volume(3) * (std::pow(R, 3) - std::pow(r, 3));
    CHECK(mayer_norm_integral(well) == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("fugacity thresholds for hard rods") {
    const double sigma = 0.8;
    const auto rods = PairPotential::hard_rods(sigma, 0.05);
    const auto rue = criterion_classical(rods, ClassicalMode::rue);
    const auto brf = criterion_classical(rods, ClassicalMode::brf);
    CHECK(std::abs(rue.z_max - 1.0 / (2.0 * std::exp(1.0) * sigma)) < 1e-12);
    CHECK(std::abs(brf.z_max - rue.z_max) < 1e-12);
    CHECK(rue.margin == doctest::Approx(rue.z_max - 0.05));

    const auto zero = PairPotential::hard_rods(0.0, 0.1);
    CHECK(criterion_classical(zero, ClassicalMode::rue).unbounded);
}

TEST_CASE("a = 1 maximizes a e^{-a}") {
    for (double da : {-0.1, 0.1})
        CHECK((1.0 + da) * std::exp(-(1.0 + da)) < std::exp(-1.0));
}

TEST_CASE("exact rod coefficients match the equation-of-state inversion") {
    const double sigma = 0.9;
    CHECK(mayer_coefficient_exact1d(sigma, 1) == 1.0);
    for (int n = 2; n <= 5; ++n)
        CHECK(std::abs(mayer_coefficient_exact1d(sigma, n) -
                       lagrange_coefficient(sigma, n)) < 1e-6);
    // hand values
    CHECK(mayer_coefficient_exact1d(sigma, 2) == doctest::Approx(-sigma));
    CHECK(mayer_coefficient_exact1d(sigma, 3) == doctest::Approx(1.5 * sigma * sigma));
}

TEST_CASE("Monte Carlo coefficients agree with the exact rod values") {
    const double sigma = 0.6;
    const auto rods = PairPotential::hard_rods(sigma, 0.1);
    for (int n = 2; n <= 4; ++n) {
        const auto est = mayer_coefficient_mc(rods, n, 20260823, 40000);
        const double exact = mayer_coefficient_exact1d(sigma, n);
        const double tol = 3.0 * est.std_error + 1e-12;
        CHECK(std::abs(est.value - exact) <= tol);
    }
}

TEST_CASE("Monte Carlo estimates are independent of the thread count") {
    const auto well = PairPotential::square_well(2, 0.5, 0.3, 0.9, 0.3, 1.0, 0.02);
    const auto a = mayer_coefficient_mc(well, 3, 99, 5000, 1);
    const auto b = mayer_coefficient_mc(well, 3, 99, 5000, 2);
    const auto c = mayer_coefficient_mc(well, 3, 99, 5000, 8);
    CHECK(a.value == b.value);
    CHECK(a.value == c.value);
    CHECK(a.std_error == c.std_error);
}

TEST_CASE("pressure partial sums against the equation-of-state solver") {
    auto rods = PairPotential::hard_rods(1.0, 0.05);
    const auto sum4 = pressure_partial_sum(rods, 4);
    CHECK(sum4.tonks_available);
    const double b5 = lagrange_coefficient(1.0, 5);
    CHECK(std::abs(sum4.value - sum4.tonks_reference) <=
          2.0 * std::abs(b5) * std::pow(0.05, 5));

    const auto sum1 = pressure_partial_sum(rods, 1);
    CHECK(sum1.value == doctest::Approx(0.05));

    rods.z = 0.0;
    CHECK(pressure_partial_sum(rods, 3).value == 0.0);
}

TEST_CASE("equation-of-state root is consistent") {
    const double w = tonks_pressure(0.7, 0.2);
    CHECK(w * std::exp(0.7 * w) == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("decay norm constants for hard rods") {
    const double sigma = 0.75;
    auto rods = PairPotential::hard_rods(sigma, 0.01);
    const auto flat = decay_constants(rods, 0.0);
    CHECK(flat.C1 == doctest::Approx(2.0 * sigma).epsilon(1e-9));
    CHECK(flat.Cinf == doctest::Approx(1.0));
    CHECK(flat.ok);
    CHECK(flat.prefactor > 0.0);

    const double kappa = 0.9;
    const auto tilted = decay_constants(rods, kappa);
    CHECK(tilted.C1 ==
          doctest::Approx(2.0 * (std::exp(kappa * sigma) - 1.0) / kappa).epsilon(1e-8));

    rods.z = 1e-9;
    CHECK(decay_constants(rods, 2.0).ok);
}
