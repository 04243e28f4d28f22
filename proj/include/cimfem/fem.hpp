#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/SparseCore>

namespace cimfem {

using cplx = std::complex<double>;
using RealVector = std::vector<double>;
using SparseReal = Eigen::SparseMatrix<double>;

/// Uniform partition of (0, 1) into M intervals; unknowns are the M-1
/// interior nodes x_i = i h, i = 1..M-1.
struct Mesh1D {
    std::size_t M = 2;

    [[nodiscard]] double h() const { return 1.0 / static_cast<double>(M); }
    [[nodiscard]] std::size_t dof_count() const { return M - 1; }
    [[nodiscard]] double node(std::size_t i) const { return static_cast<double>(i) * h(); }
};

/// Unit square split into M x M cells, each cut along the (i,j)-(i+1,j+1)
/// diagonal into two counter-clockwise right triangles.
struct Mesh2D {
    std::size_t M = 2;

    [[nodiscard]] double h() const { return 1.0 / static_cast<double>(M); }
    [[nodiscard]] std::size_t dof_count() const { return (M - 1) * (M - 1); }
    [[nodiscard]] std::size_t vertex_count() const { return (M + 1) * (M + 1); }
    [[nodiscard]] std::size_t triangle_count() const { return 2 * M * M; }
    [[nodiscard]] std::size_t vertex(std::size_t i, std::size_t j) const { return i + j * (M + 1); }
    [[nodiscard]] std::array<double, 2> coords(std::size_t v) const;
    /// Interior dof index of a vertex, or -1 on the boundary.
    [[nodiscard]] long dof(std::size_t v) const;
    [[nodiscard]] std::array<std::size_t, 3> triangle(std::size_t t) const;
};

using Mesh = std::variant<Mesh1D, Mesh2D>;

[[nodiscard]] std::size_t dof_count(const Mesh& mesh);
[[nodiscard]] std::size_t dimension(const Mesh& mesh);

/// Real field on the domain with optional jump lines x = c. Integrals split
/// elements along these lines so discontinuous data is integrated exactly.
struct SpatialFunction {
    std::function<double(double x, double y)> value;
    std::vector<double> x_breaks;

    [[nodiscard]] double operator()(double x, double y = 0.0) const { return value(x, y); }
};

/// Initial data families used by the benchmarks.
struct InitialDataSpec {
    enum class Kind { zero, indicator, piecewise_linear, polynomial, product_2d };

    struct Segment {
        double x0, x1;  ///< closed on the left of the first segment only
        double slope, intercept;
    };

    Kind kind = Kind::zero;
    double scale = 1.0;
    /// indicator: scale on (x_lo, x_hi] x (y_lo, y_hi)
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    std::vector<Segment> segments;       ///< piecewise_linear
    std::vector<double> poly_x;          ///< polynomial / product_2d x factor, ascending powers
    std::vector<double> poly_y;          ///< product_2d y factor

    static InitialDataSpec zero();
    static InitialDataSpec indicator(double scale, double x_lo, double x_hi, double y_lo = 0.0,
                                     double y_hi = 1.0);
    static InitialDataSpec piecewise_linear(std::vector<Segment> segments, double scale = 1.0);
    static InitialDataSpec polynomial(std::vector<double> coeffs, double scale = 1.0);
    static InitialDataSpec product_2d(std::vector<double> px, std::vector<double> py,
                                      double scale = 1.0);

    [[nodiscard]] double operator()(double x, double y = 0.0) const;
    [[nodiscard]] SpatialFunction as_function() const;
    [[nodiscard]] bool is_zero() const { return kind == Kind::zero || scale == 0.0; }
};

struct AssembledOperators {
    SparseReal mass;
    SparseReal stiffness;
    std::size_t dof_count = 0;
};

/// P1 mass and stiffness restricted to interior dofs.
[[nodiscard]] AssembledOperators assemble(const Mesh& mesh);

/// b_i = integral of g * phi_i over the domain, interior dofs only.
[[nodiscard]] RealVector load_vector(const Mesh& mesh, const SpatialFunction& g);
[[nodiscard]] RealVector load_vector(const Mesh& mesh, const InitialDataSpec& g);

/// Same integrals for every mesh vertex, boundary included.
[[nodiscard]] RealVector load_vector_all_vertices(const Mesh& mesh, const SpatialFunction& g);

using GradientFunction = std::function<std::array<double, 2>(double x, double y)>;

/// b_i = integral of grad g . grad phi_i, the right side of the Ritz projection.
[[nodiscard]] RealVector ritz_load(const Mesh& mesh, const GradientFunction& grad_g);

/// L2 projection P_h: solves M c = b.
[[nodiscard]] RealVector project_l2(const AssembledOperators& ops, std::span<const double> b);

/// Ritz projection R_h: solves S c = b_grad.
[[nodiscard]] RealVector project_ritz(const AssembledOperators& ops,
                                      std::span<const double> b_grad);

/// ||u_h - exact||_{L2} by element quadrature (5-point Gauss in 1-D, a
/// degree-5 rule in 2-D), splitting elements at the function's jump lines.
[[nodiscard]] double l2_error(const Mesh& mesh, std::span<const double> coeffs,
                              const SpatialFunction& exact);
[[nodiscard]] double l2_error(const Mesh& mesh, std::span<const cplx> coeffs,
                              const SpatialFunction& exact);

/// sqrt(Re(c^H M c)).
[[nodiscard]] double mass_norm(const AssembledOperators& ops, std::span<const double> c);
[[nodiscard]] double mass_norm(const AssembledOperators& ops, std::span<const cplx> c);

/// Nodal values of a continuous function at interior dofs.
[[nodiscard]] RealVector interpolate(const Mesh& mesh, const SpatialFunction& g);

/// P1 prolongation of interior coefficients from mesh M to mesh 2M.
[[nodiscard]] RealVector prolong(const Mesh& coarse, std::span<const double> coeffs);

/// Coordinates of interior dof i.
[[nodiscard]] std::array<double, 2> dof_coords(const Mesh& mesh, std::size_t i);

}  // namespace cimfem
