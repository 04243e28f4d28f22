#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "cimfem/contour.hpp"
#include "cimfem/fem.hpp"

namespace cimfem {

/// Arguments of the bivariate Mittag-Leffler function
///   E_{(a,b),g}(z1, z2) = sum_{k,l} (k+l)! / (k! l!) z1^k z2^l / Gamma(a k + b l + g).
struct MLQuery {
    double alpha_p = 0.5;
    double beta_p = 1.0;
    double gamma = 1.0;
    double z1 = 0.0;
    double z2 = 0.0;

    void validate() const;
};

struct MLSeriesResult {
    double value = 0.0;
    std::size_t orders = 0;       ///< anti-diagonals summed
    double largest_term = 0.0;    ///< largest |term| seen; cancellation indicator
};

/// Anti-diagonal summation S_m = sum_{k+l=m}, accumulated until the absolute
/// anti-diagonal mass drops below tol * |total| three times in a row.
/// Throws std::runtime_error when max_order is reached first.
[[nodiscard]] MLSeriesResult ml_biv_series_detailed(const MLQuery& q, double tol = 1e-17,
                                                    std::size_t max_order = 4000);
[[nodiscard]] double ml_biv_series(const MLQuery& q, double tol = 1e-17,
                                   std::size_t max_order = 4000);

/// Contour configuration used for Mittag-Leffler evaluation at time t:
/// Lambda = 2, N = 80, window [t/1.5, 4t/3].
[[nodiscard]] ContourConfig ml_contour_config(double t);

/// Inverse Laplace representation
///   t^{1-g} / (2 pi i) * int e^{zt} z^{-g} / (1 + |w1| z^{-a} + |w2| z^{-b}) dz
/// with z1 = w1 t^a and z2 = w2 t^b, summed on the given half-contour.
[[nodiscard]] double ml_biv_contour(const MLQuery& q, double t, double omega1, double omega2,
                                    const ContourQuadrature& quad);

/// Same, with the contour built from ml_contour_config(t).
[[nodiscard]] double ml_biv_contour(const MLQuery& q, double t, double omega1, double omega2);

/// Series when max(|z1|, |z2|) <= 20, contour (t = 1) otherwise.
[[nodiscard]] double ml_biv(const MLQuery& q);

inline constexpr double kSeriesRegimeLimit = 20.0;

/// Homogeneous 1-D problem on (0,1) expanded in phi_j = sqrt(2) sin(j pi x),
/// lambda_j = (j pi)^2.
struct SpectralProblem {
    double K = 1.0;
    double beta = 0.5;
    std::function<double(std::size_t j)> initial_coefficient;  ///< (u0, phi_j), j >= 1
    std::size_t J_max = 2000;
    double tail_tol = 1e-10;
};

/// E_{(1-b,1),1}(z1, z2) + t^{1-b}/K E_{(1-b,1),2-b}(z1, z2) with
/// z1 = -t^{1-b}/K, z2 = -lambda t/K: the time factor of one mode.
[[nodiscard]] double mode_relaxation(double K, double beta, double lambda, double t);

/// Eigen-expansion solution u(x, t) of the homogeneous problem.
[[nodiscard]] double spectral_reference(const SpectralProblem& sp, double x, double t);

/// (u0, sqrt(2) sin(j pi x)) for j = 1..J by composite Gauss quadrature split
/// at the data's jumps. Entry 0 is unused.
[[nodiscard]] std::vector<double> sine_coefficients(const InitialDataSpec& u0, std::size_t J);

}  // namespace cimfem
