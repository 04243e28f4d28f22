#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include "cimfem/symbols.hpp"

using namespace cimfem;
using std::numbers::pi;

namespace {

cplx laplace_by_quadrature(const std::function<double(double)>& f, cplx z) {
    boost::math::quadrature::exp_sinh<double> q;
    const double re = q.integrate([&](double t) { return std::exp(-z.real() * t) * std::cos(z.imag() * t) * f(t); }, 1e-12);
    const double im = q.integrate([&](double t) { return -std::exp(-z.real() * t) * std::sin(z.imag() * t) * f(t); }, 1e-12);
    return {re, im};
}

cplx single_multiplier(const SourceTransform& f, cplx z) {
    const auto m = transform_eval(f, z);
    REQUIRE(m.size() == 1);
    return m.front().second;
}

}  // namespace

TEST_CASE("complex_pow branch conventions") {
    CHECK(std::abs(complex_pow({4.0, 0.0}, 0.5) - cplx(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(complex_pow({0.0, 1.0}, 2.0) - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(complex_pow({-1.0, 0.0}, 0.5) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(complex_pow({-1.0, -0.0}, 0.5) - cplx(0.0, 1.0)) < 1e-15);
    CHECK_THROWS_AS((void)complex_pow({0.0, 0.0}, -0.5), std::domain_error);
}

TEST_CASE("complex_pow algebraic properties") {
    for (double r : {0.1, 1.0, 37.0})
        for (double th : {-2.9, -1.0, 0.0, 0.4, 2.5}) {
            const cplx z = std::polar(r, th);
            const cplx lhs = complex_pow(z, 0.3) * complex_pow(z, -0.85);
            const cplx rhs = complex_pow(z, -0.55);
            CHECK(std::abs(lhs - rhs) <= 1e-13 * std::abs(rhs));
            CHECK(std::abs(std::conj(complex_pow(z, 0.37)) - complex_pow(std::conj(z), 0.37)) <=
                  1e-14 * std::abs(complex_pow(z, 0.37)));
        }
}

TEST_CASE("eta values and sector property") {
    CHECK(std::abs(eta({1.0, 0.0}, {1.0, 0.5}) - cplx(2.0, 0.0)) < 1e-15);
    CHECK(std::abs(eta({4.0, 0.0}, {0.0, 0.5}) - cplx(2.0, 0.0)) < 1e-15);

    for (double beta : {0.25, 0.5, 0.75})
        for (double r = 0.1; r <= 100.0; r *= 1.7)
            for (int k = 0; k <= 20; ++k) {
                const double zeta = pi * k / 20.0;
                CHECK(eta(std::polar(r, zeta), {1.0, beta}).imag() >= -1e-12 * r);
            }
}

TEST_CASE("eta two-sided bound for large arguments") {
    for (double K : {0.5, 1.0, 2.0})
        for (double beta : {0.25, 0.75}) {
            const double r0 = std::max(1.0, std::pow(2.0 / K, 1.0 / (1.0 - beta)));
            for (double r = r0 * 1.01; r < r0 * 1e4; r *= 2.3)
                for (double th = -2.0 * pi / 3 + 0.01; th < 2.0 * pi / 3; th += 0.2) {
                    const cplx z = std::polar(r, th);
                    const double ratio = std::abs(eta(z, {K, beta})) / r;
                    CHECK(ratio >= K / 2);
                    CHECK(ratio <= K + 1);
                }
        }
}

TEST_CASE("symbol validation") {
    CHECK_THROWS_AS(FractionalSymbol({1.0, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FractionalSymbol({-1.0, 0.5}).validate(), std::invalid_argument);
    CHECK_NOTHROW(FractionalSymbol({0.0, 0.5}).validate());
}

TEST_CASE("transforms of single terms") {
    SourceTransform f;
    f.terms.push_back({0, TermKind::power, 2.5, 0.0});
    CHECK(std::abs(single_multiplier(f, {3.0, 1.0}) - 2.5 / cplx(3.0, 1.0)) < 1e-15);

    const double c = 3 * std::pow(pi, 5);
    SourceTransform g;
    g.terms.push_back({0, TermKind::pole, c, 1.5});
    CHECK(std::abs(single_multiplier(g, {0.2, 4.0}) - c / cplx(-1.3, 4.0)) < 1e-12);
    CHECK(g.max_pole() == 1.5);
    CHECK_THROWS((void)transform_eval(g, {1.5, 0.0}));
}

TEST_CASE("scalar benchmark source against numerical Laplace quadrature") {
    const double beta = 0.5, K = 1.0;
    const double c = 1.5 * std::sqrt(pi);
    SourceTransform f;
    f.terms.push_back({0, TermKind::power, 1.0 + c * K, 0.0});
    f.terms.push_back({0, TermKind::power, c / std::tgamma(2.0 - beta), 1.0 - beta});
    f.terms.push_back({0, TermKind::power, c, 1.0});
    const auto ft = [&](double t) {
        return 1.0 + c * K + c / std::tgamma(2.0 - beta) * std::pow(t, 1.0 - beta) + c * t;
    };
    for (cplx z : {cplx(2.0, 0.0), cplx(1.0, 3.0), cplx(0.5, -1.0)}) {
        const cplx expect = laplace_by_quadrature(ft, z);
        CHECK(std::abs(single_multiplier(f, z) - expect) <= 1e-6 * std::abs(expect));
    }
    // closed form (1 + cK)/z + c z^{beta-2} + c z^{-2}
    const cplx z(2.0, 0.0);
    const cplx closed = (1.0 + c * K) / z + c * std::pow(z, beta - 2.0) + c / (z * z);
    CHECK(std::abs(single_multiplier(f, z) - closed) < 1e-13);
}

TEST_CASE("transform groups terms by spatial factor") {
    SourceTransform f;
    f.terms.push_back({1, TermKind::power, 1.0, 0.0});
    f.terms.push_back({0, TermKind::power, 2.0, 0.5});
    f.terms.push_back({1, TermKind::pole, 1.0, -1.0});
    const auto m = transform_eval(f, {2.0, 0.0});
    REQUIRE(m.size() == 2);
    CHECK(m[0].first == 1);
    CHECK(m[1].first == 0);
    CHECK(m[0].second.real() == doctest::Approx(0.5 + 1.0 / 3.0));
    CHECK(m[1].second.real() == doctest::Approx(2.0 * std::tgamma(1.5) * std::pow(2.0, -1.5)));

    SourceTransform bad;
    bad.terms.push_back({0, TermKind::power, 1.0, -1.0});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
