#include "cimfem/mlf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <array>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cimfem/diagnostics.hpp"
#include "cimfem/symbols.hpp"

namespace cimfem {

void MLQuery::validate() const {
    if (!(alpha_p > 0.0 && beta_p > 0.0 && gamma > 0.0))
        throw std::invalid_argument("MLQuery: alpha', beta' and gamma must be positive");
}

namespace {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mp100 = boost::multiprecision::cpp_bin_float_100;
using mp200 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>>;

// Anti-diagonal summation of the double series in working type R. Each
// column k carries its term T(k, l) = (k+l)!/(k! l!) z1^k z2^l / Gamma(a k + b l + g)
// forward in l by the ratio of neighbours, so a gamma function is evaluated
// once per anti-diagonal (or per term when b is not an integer step of one).
template <class R>
MLSeriesResult sum_series(const MLQuery& q, double tol, std::size_t max_order) {
    using std::exp;
    using std::fabs;
    using std::log;
    using boost::multiprecision::exp;
    using boost::multiprecision::fabs;
    using boost::multiprecision::log;
    const auto lg = [](const R& x) -> R { return boost::math::lgamma(x); };
    const R a = q.alpha_p, b = q.beta_p, g = q.gamma, z1 = q.z1, z2 = q.z2;
    const bool unit_b = q.beta_p == 1.0;

    MLSeriesResult res;
    std::vector<R> column;  // T(k, m - k) of the latest anti-diagonal
    column.reserve(64);
    R total = 0, largest = 0;
    int quiet = 0;
    for (std::size_t m = 0; m <= max_order; ++m) {
        R diag = 0, mass = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t l = m - k;
            const R arg = a * k + b * l + g;
            const R ratio = unit_b ? R(1) / (arg - 1) : R(exp(lg(arg - b) - lg(arg)));
            column[k] *= z2 * R(m) / R(l) * ratio;
        }
        // new column k = m, l = 0
        R head = 0;
        if (m == 0) {
            head = exp(-lg(g));
        } else if (q.z1 != 0.0) {
            head = exp(R(m) * log(fabs(z1)) - lg(a * m + g));
            if (q.z1 < 0.0 && m % 2 == 1) head = -head;
        }
        column.push_back(head);
        for (const R& term : column) {
            diag += term;
            mass += fabs(term);
        }
        total += diag;
        if (mass > largest) largest = mass;
        res.orders = m + 1;
        if (!std::isfinite(static_cast<double>(mass)))
            throw std::runtime_error("ml_biv_series: terms overflowed");

        const R scale = fabs(total) > R(1e-300) ? R(fabs(total)) : R(1e-300);
        if (mass < R(tol) * scale) {
            if (++quiet >= 3) {
                res.value = static_cast<double>(total);
                res.largest_term = static_cast<double>(largest);
                return res;
            }
        } else {
            quiet = 0;
        }
    }
    throw std::runtime_error("ml_biv_series: no convergence within " + std::to_string(max_order) +
                             " anti-diagonals");
}

}  // namespace

MLSeriesResult ml_biv_series_detailed(const MLQuery& q, double tol, std::size_t max_order) {
    q.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("ml_biv_series: tol must be positive");

    // Alternating arguments cancel; the ratio of the largest anti-diagonal to
    // the result says how many digits are lost, so re-sum wider when needed.
    // A garbage result understates the loss, hence the escalation until the
    // measured loss fits the precision used.
    const auto loss = [](const MLSeriesResult& r) {
        return r.largest_term / std::max(std::fabs(r.value), 1e-300);
    };
    MLSeriesResult res = sum_series<long double>(q, tol, max_order);
    if (loss(res) > 1e2) res = sum_series<mp50>(q, tol, max_order);
    if (loss(res) > 1e33) res = sum_series<mp100>(q, tol, max_order);
    if (loss(res) > 1e83) res = sum_series<mp200>(q, tol, max_order);
    if (loss(res) > 1e183) warn("ml_biv_series: cancellation beyond 180 digits, result unreliable");
    return res;
}

double ml_biv_series(const MLQuery& q, double tol, std::size_t max_order) {
    return ml_biv_series_detailed(q, tol, max_order).value;
}

ContourConfig ml_contour_config(double t) {
    ContourConfig cfg;
    cfg.lambda_ratio = 2.0;
    cfg.N = 80;
    cfg.t0 = t / 1.5;
    return cfg;
}

double ml_biv_contour(const MLQuery& q, double t, double omega1, double omega2,
                      const ContourQuadrature& quad) {
    q.validate();
    if (!(t > 0.0)) throw std::invalid_argument("ml_biv_contour: t must be positive");
    if (omega1 > 0.0 || omega2 > 0.0)
        throw std::invalid_argument("ml_biv_contour: omega1 and omega2 must be non-positive");
    const double w1 = std::fabs(omega1), w2 = std::fabs(omega2);

    cplx acc{};
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const cplx z = quad.nodes[k];
        const cplx denom = 1.0 + w1 * complex_pow(z, -q.alpha_p) + w2 * complex_pow(z, -q.beta_p);
        acc += std::exp(z * t) * complex_pow(z, -q.gamma) / denom * quad.derivs[k];
    }
    return std::pow(t, 1.0 - q.gamma) * quad.tau / std::numbers::pi * acc.imag();
}

double ml_biv_contour(const MLQuery& q, double t, double omega1, double omega2) {
    return ml_biv_contour(q, t, omega1, omega2, make_quadrature(ml_contour_config(t)));
}

double ml_biv(const MLQuery& q) {
    if (std::max(std::fabs(q.z1), std::fabs(q.z2)) <= kSeriesRegimeLimit) return ml_biv_series(q);
    if (q.z1 > 0.0 || q.z2 > 0.0)
        throw std::domain_error("ml_biv: large positive arguments are outside the supported range");
    return ml_biv_contour(q, 1.0, q.z1, q.z2);
}

namespace {

// Same as mode_relaxation, reusing a contour built once for time t.
double mode_relaxation_with(double K, double beta, double lambda, double t,
                            const ContourQuadrature* quad) {
    if (t == 0.0) return 1.0;
    const double tb = std::pow(t, 1.0 - beta);
    MLQuery first{1.0 - beta, 1.0, 1.0, -tb / K, -lambda * t / K};
    MLQuery second{1.0 - beta, 1.0, 2.0 - beta, first.z1, first.z2};
    const bool series = std::max(std::fabs(first.z1), std::fabs(first.z2)) <= kSeriesRegimeLimit;
    if (series || quad == nullptr) return ml_biv(first) + tb / K * ml_biv(second);
    // omega scaled to time t
    const double w1 = -1.0 / K, w2 = -lambda / K;
    return ml_biv_contour(first, t, w1, w2, *quad) + tb / K * ml_biv_contour(second, t, w1, w2, *quad);
}

}  // namespace

double mode_relaxation(double K, double beta, double lambda, double t) {
    if (!(K > 0.0)) throw std::invalid_argument("mode_relaxation: K must be positive");
    if (t == 0.0) return 1.0;
    const ContourQuadrature quad = make_quadrature(ml_contour_config(t));
    return mode_relaxation_with(K, beta, lambda, t, &quad);
}

double spectral_reference(const SpectralProblem& sp, double x, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("spectral_reference: t must be non-negative");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("spectral_reference: x outside [0, 1]");
    if (!(sp.K > 0.0)) throw std::invalid_argument("spectral_reference: K must be positive");
    if (!sp.initial_coefficient) throw std::invalid_argument("spectral_reference: no initial data");

    std::optional<ContourQuadrature> quad;
    if (t > 0.0) quad = make_quadrature(ml_contour_config(t));

    double sum = 0.0, last = 0.0;
    int small_run = 0;
    for (std::size_t j = 1; j <= sp.J_max; ++j) {
        const double c = sp.initial_coefficient(j);
        const double lambda = std::pow(static_cast<double>(j) * std::numbers::pi, 2);
        const double bound = 1.0 / (1.0 + lambda * t / sp.K);
        if (std::fabs(c) * bound < sp.tail_tol) {
            if (++small_run >= 5) return sum;
            if (c == 0.0) continue;
        } else {
            small_run = 0;
        }
        const double phi = std::numbers::sqrt2 * std::sin(static_cast<double>(j) * std::numbers::pi * x);
        last = mode_relaxation_with(sp.K, sp.beta, lambda, t, quad ? &*quad : nullptr) * c * phi;
        sum += last;
    }
    if (std::fabs(last) > sp.tail_tol) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", last);
        warn("spectral_reference: truncated at J_max = " + std::to_string(sp.J_max) + " with last term " + buf);
    }
    return sum;
}

std::vector<double> sine_coefficients(const InitialDataSpec& u0, std::size_t J) {
    std::vector<double> c(J + 1, 0.0);
    if (u0.is_zero() || J == 0) return c;
    const SpatialFunction f = u0.as_function();

    // 5-point Gauss on a uniform panel grid refined with J, split at jumps
    const double a5 = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double b5 = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
    const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
    const std::array<double, 5> gx{-b5, -a5, 0.0, a5, b5};
    const std::array<double, 5> gw{wb, wa, 128.0 / 225.0, wa, wb};

    std::vector<double> cuts;
    const std::size_t panels = std::max<std::size_t>(64, 4 * J);
    for (std::size_t p = 0; p <= panels; ++p) cuts.push_back(static_cast<double>(p) / panels);
    for (double b : f.x_breaks)
        if (b > 0.0 && b < 1.0) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double lo = cuts[p], half = 0.5 * (cuts[p + 1] - cuts[p]);
        for (std::size_t q = 0; q < 5; ++q) {
            const double x = lo + half * (1.0 + gx[q]);
            const double w = half * gw[q] * f(x) * std::numbers::sqrt2;
            const double theta = std::numbers::pi * x;
            // sin((j+1) theta) = 2 cos(theta) sin(j theta) - sin((j-1) theta)
            const double two_cos = 2.0 * std::cos(theta);
            double s_prev = 0.0, s_cur = std::sin(theta);
            for (std::size_t j = 1; j <= J; ++j) {
                c[j] += w * s_cur;
                const double s_next = two_cos * s_cur - s_prev;
                s_prev = s_cur;
                s_cur = s_next;
            }
        }
    }
    return c;
}

}  // namespace cimfem
