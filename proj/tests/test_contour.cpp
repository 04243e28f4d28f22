#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "cimfem/contour.hpp"
#include "oracles.hpp"

using namespace cimfem;

TEST_CASE("strip half-width picks the binding constraint") {
    ContourConfig c;
    c.alpha = 0.7;
    c.delta_prime = 0.6;
    CHECK(strip_half_width(c) == doctest::Approx(std::numbers::pi / 2 - 1.3).epsilon(1e-15));

    c = ContourConfig{};
    CHECK(strip_half_width(c) == doctest::Approx(0.6767 * (1 - 1e-3)).epsilon(1e-15));
    CHECK(strip_half_width(c) == doctest::Approx(0.6760233).epsilon(1e-12));

    c.alpha = 0.3;
    c.delta_prime = 0.3;
    CHECK(strip_half_width(c) == doctest::Approx(0.3 * (1 - 1e-3)));
}

TEST_CASE("config validation") {
    ContourConfig c;
    c.alpha = 1.0;
    c.delta_prime = 0.6;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ContourConfig{};
    c.lambda_ratio = 1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = ContourConfig{};
    c.N = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_NOTHROW(ContourConfig{}.validate());
}

TEST_CASE("epsilon_N against a 50-digit evaluation") {
    ContourConfig c;
    c.N = 40;
    const double d = 0.6760233;
    const RhoSample s = epsilon_n(0.5, c, d);

    using oracle::big;
    const big pi = boost::math::constants::pi<big>();
    const big a = acosh(big(10) / (big("0.5") * sin(big("0.6767") - big("0.6760233"))));
    const big e = exp(-2 * pi * big("0.6760233") * 40 / a);
    // the library works from double inputs, so agreement is limited by the
    // conditioning of sin(alpha - d) near zero
    CHECK(s.a_rho == doctest::Approx(static_cast<double>(a)).epsilon(1e-11));
    CHECK(s.eps_N == doctest::Approx(static_cast<double>(e)).epsilon(1e-9));

    CHECK(epsilon_n(0.2, c, d).eps_N < epsilon_n(0.8, c, d).eps_N);
}

TEST_CASE("epsilon_N domain errors") {
    ContourConfig c;
    c.lambda_ratio = 1.5;
    c.alpha = 1.2;
    c.delta_prime = 0.1;
    const double d = strip_half_width(c);  // asymptote branch, sin(alpha - d) close to 1
    const double s = std::sin(c.alpha - d);
    // 1 - rho chosen so the acosh argument is exactly at or below 1
    CHECK_THROWS_AS((void)epsilon_n(1.0 - c.lambda_ratio / s * 1.0000001, c, d), std::domain_error);
    CHECK_THROWS_AS((void)epsilon_n(1.0, c, d), std::domain_error);
    CHECK_THROWS_AS((void)epsilon_n(-0.1, c, d), std::domain_error);
}

TEST_CASE("objective is finite and positive on the feasible grid") {
    ContourConfig c;
    const double d = strip_half_width(c);
    for (int j = 0; j < 1000; ++j) {
        const double rho = j / 1000.0;
        const RhoSample s = epsilon_n(rho, c, d);
        CHECK(s.eps_N > 0.0);
        CHECK(s.eps_N < 1.0);
        const double obj = balance_objective(rho, s, c.eps_round);
        CHECK(std::isfinite(obj));
        CHECK(obj > 0.0);
    }
}

TEST_CASE("optimize_rho on a two-point grid") {
    ContourConfig c;
    c.D = 2;
    const double d = strip_half_width(c);
    const double o0 = balance_objective(0.0, epsilon_n(0.0, c, d), c.eps_round);
    const double o5 = balance_objective(0.5, epsilon_n(0.5, c, d), c.eps_round);
    CHECK(optimize_rho(c).rho_star == (o5 < o0 ? 0.5 : 0.0));
}

TEST_CASE("optimize_rho matches a fine brute-force sweep") {
    ContourConfig c;  // the reference experiment configuration, N = 100
    const OptimalParameters p = optimize_rho(c);
    const oracle::RhoArgmin fine = oracle::rho_sweep(c.alpha, c.delta_prime, c.lambda_ratio, c.N,
                                                     c.eps_round, 20000);
    CHECK(std::abs(p.rho_star - fine.rho) <= 2e-3);
    CHECK(p.predicted_error == doctest::Approx(fine.objective).epsilon(1e-2));

    // golden values for the same configuration
    CHECK(p.rho_star == doctest::Approx(0.931).epsilon(1e-12));
    CHECK(p.mu_star == doctest::Approx(2.26).epsilon(5e-3));
    CHECK(p.tau_star == doctest::Approx(p.a_rho / 100.0));
    CHECK(p.mu_star == doctest::Approx(2 * std::numbers::pi * p.d_tilde * 100 * (1 - p.rho_star) /
                                       (0.1 * 10 * p.a_rho)));

    c.D = 10000;
    CHECK(optimize_rho(c).predicted_error <= p.predicted_error);
}

TEST_CASE("quadrature nodes follow the closed form") {
    const ContourConfig c;
    const ContourQuadrature q = make_quadrature(c);
    REQUIRE(q.size() == c.N);
    const double sa = std::sin(q.alpha);
    for (std::size_t k = 0; k < q.size(); ++k) {
        CHECK(q.phis[k] == doctest::Approx((k + 0.5) * q.tau));
        // direct complex evaluation of mu (1 + sin(i phi - alpha)) and i mu cos(i phi - alpha)
        const std::complex<double> w(-q.alpha, q.phis[k]);
        const auto z = q.mu * (1.0 + std::sin(w));
        const auto dz = std::complex<double>(0, 1) * q.mu * std::cos(w);
        CHECK(std::abs(q.nodes[k] - z) <= 1e-14 * std::abs(z));
        CHECK(std::abs(q.derivs[k] - dz) <= 1e-14 * std::abs(dz));
        CHECK(q.nodes[k].imag() > 0.0);
        CHECK(std::abs(q.nodes[k]) >= q.mu * (1 - sa));
        if (k > 0) CHECK(q.nodes[k].real() < q.nodes[k - 1].real());
    }
    CHECK(q.nodes.back().real() < 0.0);

    CHECK(contour_point(0.0, 2.0, 0.5) == std::complex<double>(2.0 * (1 - std::sin(0.5)), 0.0));
    CHECK(contour_derivative(0.0, 2.0, 0.5) == std::complex<double>(0.0, 2.0 * std::cos(0.5)));
    CHECK(contour_point(-0.7, 2.0, 0.5) == std::conj(contour_point(0.7, 2.0, 0.5)));
}
