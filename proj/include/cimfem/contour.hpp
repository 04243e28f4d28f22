#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cimfem {

using cplx = std::complex<double>;

/// Geometry and budget of the left-opening hyperbola
///   z(phi) = mu * (1 + sin(i*phi - alpha)),
/// calibrated for evaluation times t in [t0, lambda_ratio * t0].
struct ContourConfig {
    double alpha = 0.6767;        ///< tilt of the hyperbola (radians)
    double delta_prime = 0.1023;  ///< dip angle of the asymptotes (radians)
    double lambda_ratio = 10.0;   ///< t1 / t0
    double t0 = 0.1;
    double eps_round = 2.22e-16;  ///< round-off level of the node solves
    std::size_t N = 100;          ///< nodes on the upper half-contour
    std::size_t D = 1000;         ///< rho grid size
    double d_margin = 1e-3;       ///< keeps the strip strictly inside alpha

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct OptimalParameters {
    double rho_star = 0.0;
    double a_rho = 0.0;
    double tau_star = 0.0;
    double mu_star = 0.0;
    double d_tilde = 0.0;
    double eps_N = 0.0;
    double predicted_error = 0.0;
    double alpha = 0.0;
};

/// Upper half-contour mid-point nodes phi_k = (k + 1/2) tau.
struct ContourQuadrature {
    std::vector<cplx> nodes;
    std::vector<cplx> derivs;
    std::vector<double> phis;
    double tau = 0.0;
    double mu = 0.0;
    double alpha = 0.0;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

struct RhoSample {
    double a_rho;
    double eps_N;
};

/// Point on the hyperbola for a real parameter, via the real/imaginary split
///   mu (1 - sin(alpha) cosh(phi)) + i mu cos(alpha) sinh(phi).
[[nodiscard]] cplx contour_point(double phi, double mu, double alpha);

/// z'(phi) = -mu sin(alpha) sinh(phi) + i mu cos(alpha) cosh(phi).
[[nodiscard]] cplx contour_derivative(double phi, double mu, double alpha);

/// Half-width of the analyticity strip, min{alpha, pi/2 - alpha - delta'},
/// pulled inside alpha by d_margin when alpha is the binding term.
[[nodiscard]] double strip_half_width(const ContourConfig& cfg);

/// a(rho) = acosh(Lambda / ((1 - rho) sin(alpha - d))) and
/// eps_N(rho) = exp(-2 pi d N / a(rho)). Throws std::domain_error when the
/// acosh argument is not above 1.
[[nodiscard]] RhoSample epsilon_n(double rho, const ContourConfig& cfg, double d_tilde);

/// eps * eps_N^(rho - 1) + eps_N^rho / (1 - eps_N); the quantity minimized over rho.
[[nodiscard]] double balance_objective(double rho, const RhoSample& s, double eps_round);

/// Scans rho_j = j/D, j = 0..D-1 (infeasible points skipped, ties to the
/// smallest rho) and derives tau* = a/N and mu* = 2 pi d N (1 - rho)/(t0 Lambda a).
[[nodiscard]] OptimalParameters optimize_rho(const ContourConfig& cfg);

[[nodiscard]] ContourQuadrature quadrature_nodes(const OptimalParameters& params, std::size_t N);

/// optimize_rho followed by quadrature_nodes.
[[nodiscard]] ContourQuadrature make_quadrature(const ContourConfig& cfg);

}  // namespace cimfem
