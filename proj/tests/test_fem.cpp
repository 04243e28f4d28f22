#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "cimfem/fem.hpp"

using namespace cimfem;
using std::numbers::pi;

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-14);
}

/// Hat at x_i against g, each half integrated separately.
double hat_moment(const std::function<double(double)>& g, std::size_t i, double h, double cut = 1.0) {
    const double xi = i * h;
    const double left = integrate([&](double x) { return g(x) * (x - (xi - h)) / h; }, xi - h, std::min(xi, cut));
    const double right = integrate([&](double x) { return g(x) * ((xi + h) - x) / h; }, xi, std::min(xi + h, cut));
    return left + right;
}

double entry(const SparseReal& m, int i, int j) { return m.coeff(i, j); }

}  // namespace

TEST_CASE("1-D operators match the closed-form bands") {
    const AssembledOperators two = assemble(Mesh1D{2});
    REQUIRE(two.dof_count == 1);
    CHECK(entry(two.mass, 0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(entry(two.stiffness, 0, 0) == doctest::Approx(4.0).epsilon(1e-15));

    const std::size_t M = 10;
    const double h = 1.0 / M;
    const AssembledOperators ops = assemble(Mesh1D{M});
    for (int i = 0; i < static_cast<int>(M - 1); ++i) {
        CHECK(entry(ops.mass, i, i) == doctest::Approx(4 * h / 6));
        CHECK(entry(ops.stiffness, i, i) == doctest::Approx(2 / h));
        if (i + 1 < static_cast<int>(M - 1)) {
            CHECK(entry(ops.mass, i, i + 1) == doctest::Approx(h / 6));
            CHECK(entry(ops.mass, i + 1, i) == entry(ops.mass, i, i + 1));
            CHECK(entry(ops.stiffness, i, i + 1) == doctest::Approx(-1 / h));
        }
    }
}

TEST_CASE("2-D operators: symmetry, stencil and orientation") {
    const AssembledOperators one = assemble(Mesh2D{2});
    REQUIRE(one.dof_count == 1);
    CHECK(entry(one.stiffness, 0, 0) == doctest::Approx(4.0));
    CHECK(entry(one.mass, 0, 0) == doctest::Approx(0.25 / 2.0));  // 6 triangles * area/6

    const Mesh2D mesh{6};
    const AssembledOperators ops = assemble(mesh);
    const SparseReal ms = ops.mass - SparseReal(ops.mass.transpose());
    const SparseReal ss = ops.stiffness - SparseReal(ops.stiffness.transpose());
    CHECK(ms.norm() <= 1e-14);
    CHECK(ss.norm() <= 1e-14);

    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto v = mesh.triangle(t);
        const auto a = mesh.coords(v[0]), b = mesh.coords(v[1]), c = mesh.coords(v[2]);
        const double area2 = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
        CHECK(area2 == doctest::Approx(mesh.h() * mesh.h()));
    }
    // the 2-D stiffness of this mesh is the 5-point Laplacian
    for (int k = 0; k < ops.stiffness.outerSize(); ++k)
        for (SparseReal::InnerIterator it(ops.stiffness, k); it; ++it) {
            if (it.row() == it.col()) CHECK(it.value() == doctest::Approx(4.0));
            else CHECK((std::abs(it.value()) < 1e-14 || it.value() == doctest::Approx(-1.0)));
        }
}

TEST_CASE("load vectors against independent quadrature") {
    const std::size_t M = 4;
    const double h = 0.25;
    const RealVector ones = load_vector(Mesh1D{M}, SpatialFunction{[](double, double) { return 1.0; }, {}});
    for (double b : ones) CHECK(b == doctest::Approx(h).epsilon(1e-15));

    const auto g = [](double x) { return x * (1 - x); };
    const RealVector poly = load_vector(Mesh1D{M}, InitialDataSpec::polynomial({0, 1, -1}));
    for (std::size_t i = 1; i < M; ++i) CHECK(poly[i - 1] == doctest::Approx(hat_moment(g, i, h)).epsilon(1e-14));

    // indicator jump on a node (M = 4) and inside an element (M = 6)
    for (std::size_t m : {4u, 6u}) {
        const double hm = 1.0 / m;
        const RealVector ind = load_vector(Mesh1D{m}, InitialDataSpec::indicator(1.0, 0.0, 0.75));
        for (std::size_t i = 1; i < m; ++i)
            CHECK(ind[i - 1] == doctest::Approx(hat_moment([](double) { return 1.0; }, i, hm, 0.75)).epsilon(1e-14));
    }
}

TEST_CASE("total mass of indicator loads is exact") {
    for (std::size_t M : {4u, 6u, 7u}) {
        const InitialDataSpec d1 = InitialDataSpec::indicator(std::pow(pi, 3), 0.0, 0.75);
        double s = 0.0;
        for (double b : load_vector_all_vertices(Mesh1D{M}, d1.as_function())) s += b;
        CHECK(s == doctest::Approx(0.75 * std::pow(pi, 3)).epsilon(1e-14));

        const InitialDataSpec d2 = InitialDataSpec::indicator(pi, 0.0, 0.75, 0.0, 1.0);
        s = 0.0;
        for (double b : load_vector_all_vertices(Mesh2D{M}, d2.as_function())) s += b;
        CHECK(s == doctest::Approx(0.75 * pi).epsilon(1e-13));
    }
}

TEST_CASE("benchmark initial data families") {
    const InitialDataSpec pl = InitialDataSpec::piecewise_linear({{0.0, 0.75, 1.0, 0.0}, {0.75, 1.0, -1.0, 0.0}});
    CHECK(pl(0.5) == 0.5);
    CHECK(pl(0.75) == 0.75);
    CHECK(pl(0.9) == doctest::Approx(-0.9));
    const InitialDataSpec p2 = InitialDataSpec::product_2d({0, 1, -1}, {0, 1, -1}, 4 * pi * pi);
    CHECK(p2(0.5, 0.5) == doctest::Approx(pi * pi / 4));
    CHECK(InitialDataSpec::zero().is_zero());
    const InitialDataSpec ind = InitialDataSpec::indicator(2.0, 0.0, 0.75);
    CHECK(ind(0.0) == 0.0);
    CHECK(ind(0.75) == 2.0);
    CHECK(ind(0.76) == 0.0);
}

TEST_CASE("projections reproduce P1 functions") {
    for (const Mesh mesh : {Mesh{Mesh1D{8}}, Mesh{Mesh2D{6}}}) {
        const AssembledOperators ops = assemble(mesh);
        // the P1 interpolant of a piecewise-linear tent is itself
        const std::size_t n = dof_count(mesh);
        std::mt19937 gen(3);
        std::uniform_real_distribution<double> u(-1, 1);
        RealVector c(n);
        for (auto& v : c) v = u(gen);

        RealVector mc(n, 0.0), sc(n, 0.0);
        for (int k = 0; k < ops.mass.outerSize(); ++k)
            for (SparseReal::InnerIterator it(ops.mass, k); it; ++it) mc[it.row()] += it.value() * c[it.col()];
        for (int k = 0; k < ops.stiffness.outerSize(); ++k)
            for (SparseReal::InnerIterator it(ops.stiffness, k); it; ++it) sc[it.row()] += it.value() * c[it.col()];
        const RealVector pl2 = project_l2(ops, mc);
        const RealVector pr = project_ritz(ops, sc);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(pl2[i] == doctest::Approx(c[i]).epsilon(1e-12));
            CHECK(pr[i] == doctest::Approx(c[i]).epsilon(1e-12));
        }
        for (double v : project_l2(ops, RealVector(n, 0.0))) CHECK(v == 0.0);
    }
}

TEST_CASE("L2 projection is stable") {
    const Mesh mesh = Mesh1D{16};
    const AssembledOperators ops = assemble(mesh);
    const InitialDataSpec d = InitialDataSpec::indicator(std::pow(pi, 3), 0.0, 0.75);
    const RealVector c = project_l2(ops, load_vector(mesh, d));
    const double norm_g = std::sqrt(0.75) * std::pow(pi, 3);
    CHECK(mass_norm(ops, c) <= norm_g);
}

TEST_CASE("Ritz projection converges at second order") {
    const double c3 = std::pow(pi, 3);
    const SpatialFunction g{[=](double x, double) { return c3 * x * (1 - x); }, {}};
    const GradientFunction dg = [=](double x, double) { return std::array<double, 2>{c3 * (1 - 2 * x), 0.0}; };
    std::vector<double> errs;
    for (std::size_t M : {16u, 32u, 64u, 128u}) {
        const Mesh mesh = Mesh1D{M};
        const AssembledOperators ops = assemble(mesh);
        const RealVector r = project_ritz(ops, ritz_load(mesh, dg));
        errs.push_back(l2_error(mesh, r, g));
        for (std::size_t i = 0; i < r.size() / 2; ++i) CHECK(r[i] == doctest::Approx(r[r.size() - 1 - i]).epsilon(1e-12));
    }
    for (std::size_t k = 1; k < errs.size(); ++k) {
        const double order = std::log2(errs[k - 1] / errs[k]);
        CHECK(order >= 1.9);
        CHECK(order <= 2.1);
    }
}

TEST_CASE("L2 error quadrature") {
    const Mesh1D m{8};
    const SpatialFunction lin{[](double x, double) { return x < 0.5 ? x : 1 - x; }, {}};
    CHECK(l2_error(m, interpolate(m, lin), lin) <= 1e-13);
    const SpatialFunction one{[](double, double) { return 1.0; }, {}};
    CHECK(l2_error(m, RealVector(7, 0.0), one) == doctest::Approx(1.0).epsilon(1e-14));

    // the mass norm of a P1 difference equals its quadrature norm
    const Mesh2D m2{5};
    const AssembledOperators ops = assemble(m2);
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 3; ++rep) {
        RealVector c(m2.dof_count());
        for (auto& v : c) v = u(gen);
        const SpatialFunction zero{[](double, double) { return 0.0; }, {}};
        CHECK(mass_norm(ops, c) == doctest::Approx(l2_error(m2, c, zero)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)l2_error(m, RealVector(3, 0.0), one), std::invalid_argument);
}

TEST_CASE("prolongation keeps the P1 function") {
    const Mesh coarse = Mesh2D{4};
    const Mesh fine = Mesh2D{8};
    // quadratic f keeps the squared error within the exactness of the element rule
    const SpatialFunction f{[](double x, double y) { return x * y + 0.3 * x * x; }, {}};
    const RealVector c = interpolate(coarse, f);
    const RealVector p = prolong(coarse, c);
    REQUIRE(p.size() == dof_count(fine));
    // the prolonged vector and the coarse one describe the same function
    const double a = l2_error(coarse, c, f);
    const double b = l2_error(fine, p, f);
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
}
