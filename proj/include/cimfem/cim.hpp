#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

#include "cimfem/contour.hpp"
#include "cimfem/fem.hpp"
#include "cimfem/linalg.hpp"
#include "cimfem/symbols.hpp"

namespace cimfem {

/// Scalar test equation: the operator A is multiplication by a > 0.
struct ScalarDomain {
    double a = 1.0;
};

using Domain = std::variant<ScalarDomain, Mesh1D, Mesh2D>;

/// K u_t + d_t^beta u + A u = f on the given domain, u(0) = u0, evaluated on
/// the window [t0, Lambda t0]. For a scalar domain, u0 and the spatial
/// factors are read at the origin.
struct Problem {
    FractionalSymbol sym;
    Domain domain = ScalarDomain{};
    InitialDataSpec u0;
    SourceTransform f_hat;
    std::vector<SpatialFunction> spatial_factors;
    double t0 = 0.1;
    double lambda_ratio = 10.0;

    void validate() const;
};

/// Problem with assembled operators and load vectors.
struct AssembledProblem {
    FractionalSymbol sym;
    Domain domain;
    AssembledOperators ops;
    RealVector u0_load;
    std::vector<RealVector> factor_loads;
    SourceTransform f_hat;
    double t0 = 0.1;
    double lambda_ratio = 10.0;
    std::shared_ptr<const ComplexSymmetricLDLT> symbolic;  ///< 2-D only: shared node-system analysis

    [[nodiscard]] std::size_t dof_count() const { return ops.dof_count; }
};

[[nodiscard]] AssembledProblem assemble_problem(const Problem& p);

/// Number of worker threads used for node solves; 0 selects the hardware count.
void set_worker_threads(std::size_t n);
[[nodiscard]] std::size_t worker_threads();

/// Contribution e^{sigma t} x of a source pole sigma lying to the right of the
/// contour, where (eta(sigma) M + S) x = sum of the pole's coefficients times b_g.
struct PoleResidue {
    double sigma = 0.0;
    RealVector coefficients;
};

struct NodeSolutionSet {
    ContourQuadrature nodes;
    std::vector<ComplexVector> solutions;
    std::vector<PoleResidue> residues;  ///< poles the contour does not enclose
    double t0 = 0.1;
    double lambda_ratio = 10.0;
};

/// Residues of the source poles at or beyond the contour vertex mu (1 - sin alpha).
[[nodiscard]] std::vector<PoleResidue> uncleared_pole_residues(const AssembledProblem& p,
                                                               const ContourQuadrature& quad);

/// Solution of (eta(z) M + S) u = (K + z^{beta-1}) b_u0 + sum_m T_m(z) b_{g_m}.
[[nodiscard]] ComplexVector solve_node(const AssembledProblem& p, cplx z);

/// Solves the N independent node systems of the half-contour.
[[nodiscard]] NodeSolutionSet solve_nodes(const AssembledProblem& p, const ContourQuadrature& quad);
[[nodiscard]] NodeSolutionSet solve_nodes(const Problem& p, const ContourQuadrature& quad);

/// u_h(t) = (tau/pi) Im sum_k e^{z_k t} u_k z'_k plus any pole residues.
/// Warns outside [t0, Lambda t0]; throws std::overflow_error when mu t > 700.
[[nodiscard]] RealVector evaluate(const NodeSolutionSet& ns, double t);

/// Both half-contours summed with full complex weights,
/// (tau / 2 pi i) sum_{k=1-N}^{N-1} e^{z_k t} u(z_k) z'_k, using
/// u(conj z) = conj u(z). Agrees with evaluate up to round-off.
[[nodiscard]] RealVector evaluate_full_contour(const NodeSolutionSet& ns, double t);

/// Chebyshev-Lobatto samples x_j = (a+b)/2 + (b-a)/2 cos(j pi/n), j = 0..n,
/// on [a, b] = [tau/2, (N - 1/2) tau] of the contour parameter.
struct InterpolantSet {
    std::size_t n = 0;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> cheb_phis;
    std::vector<ComplexVector> cheb_solutions;
    std::vector<double> weights;  ///< (-1)^j delta_j, delta_0 = delta_n = 1/2
};

[[nodiscard]] std::vector<double> chebyshev_lobatto(std::size_t n, double a, double b);
[[nodiscard]] std::vector<double> chebyshev_lobatto_weights(std::size_t n);

/// Barycentric value at phi; returns the stored sample when phi is within
/// 1e-14 (b - a) of a node.
[[nodiscard]] ComplexVector barycentric_eval(const InterpolantSet& it, double phi);

/// Solves the n+1 node systems at the Chebyshev samples.
[[nodiscard]] InterpolantSet build_interpolant(const AssembledProblem& p,
                                               const ContourQuadrature& quad, std::size_t n);

/// Node set whose solutions are interpolated rather than solved.
[[nodiscard]] NodeSolutionSet interpolated_nodes(const AssembledProblem& p,
                                                 const ContourQuadrature& quad, std::size_t n);

/// Accelerated solution u_{I,h}^{N,n}(t); requires 2 <= n < N.
[[nodiscard]] RealVector solve_accelerated(const AssembledProblem& p, const ContourQuadrature& quad,
                                           std::size_t n, double t);
[[nodiscard]] RealVector solve_accelerated(const Problem& p, const ContourQuadrature& quad,
                                           std::size_t n, double t);

/// Geometric rate K = L + sqrt(L^2 - 1) of the largest analyticity ellipse of
/// the interpolated function, with p = pi/2 - alpha - eps_margin.
[[nodiscard]] double predicted_interp_decay(const ContourQuadrature& quad, double alpha,
                                            double eps_margin = 1e-3);

/// Contour configuration for a problem's window with the given N.
[[nodiscard]] ContourConfig window_config(const Problem& p, std::size_t N, ContourConfig base = {});

}  // namespace cimfem
