#include "cimfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace cimfem {
namespace {

struct GaussRule {
    std::vector<double> nodes;  // on [0, 1]
    std::vector<double> weights;
};

const GaussRule& gauss3() {
    static const GaussRule rule = [] {
        const double s = std::sqrt(3.0 / 5.0);
        GaussRule r;
        for (double x : {-s, 0.0, s}) r.nodes.push_back(0.5 * (1.0 + x));
        r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        return r;
    }();
    return rule;
}

const GaussRule& gauss5() {
    static const GaussRule rule = [] {
        const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
        const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
        const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
        GaussRule r;
        for (double x : {-b, -a, 0.0, a, b}) r.nodes.push_back(0.5 * (1.0 + x));
        for (double w : {wb, wa, 128.0 / 225.0, wa, wb}) r.weights.push_back(0.5 * w);
        return r;
    }();
    return rule;
}

// Degree-5 seven-point rule on the reference triangle; weights sum to one.
struct TriPoint {
    std::array<double, 3> bary;
    double weight;
};

const std::array<TriPoint, 7>& triangle_rule() {
    static const std::array<TriPoint, 7> rule = [] {
        const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
        const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
        return std::array<TriPoint, 7>{{
            {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225},
            {{a1, b1, b1}, w1},
            {{b1, a1, b1}, w1},
            {{b1, b1, a1}, w1},
            {{a2, b2, b2}, w2},
            {{b2, a2, b2}, w2},
            {{b2, b2, a2}, w2},
        }};
    }();
    return rule;
}

using Point = std::array<double, 2>;

// Splits [a, b] at the breaks strictly inside it.
std::vector<double> split_interval(double a, double b, const std::vector<double>& breaks) {
    std::vector<double> cuts{a};
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(b);
    return cuts;
}

// Visits quadrature points of every 1-D element; f(i_left, hat_left, hat_right, x, w).
template <class F>
void visit_1d(const Mesh1D& mesh, const std::vector<double>& breaks, const GaussRule& rule, F&& f) {
    const double h = mesh.h();
    for (std::size_t e = 0; e < mesh.M; ++e) {
        const double xl = mesh.node(e), xr = mesh.node(e + 1);
        const auto cuts = split_interval(xl, xr, breaks);
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double a = cuts[p], len = cuts[p + 1] - cuts[p];
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double x = a + len * rule.nodes[q];
                const double s = (x - xl) / h;
                f(e, 1.0 - s, s, x, len * rule.weights[q]);
            }
        }
    }
}

// Clips a convex polygon against x <= c (keep_left) or x >= c.
std::vector<Point> clip(const std::vector<Point>& poly, double c, bool keep_left) {
    std::vector<Point> out;
    const auto inside = [&](const Point& p) { return keep_left ? p[0] <= c : p[0] >= c; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % poly.size()];
        const bool pin = inside(p), qin = inside(q);
        if (pin) out.push_back(p);
        if (pin != qin) {
            const double s = (c - p[0]) / (q[0] - p[0]);
            out.push_back({c, p[1] + s * (q[1] - p[1])});
        }
    }
    return out;
}

double tri_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

// Visits quadrature points of every triangle; f(verts, hats, x, y, w).
template <class F>
void visit_2d(const Mesh2D& mesh, const std::vector<double>& breaks, F&& f) {
    const auto& rule = triangle_rule();
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const auto verts = mesh.triangle(t);
        const Point p0 = mesh.coords(verts[0]), p1 = mesh.coords(verts[1]),
                    p2 = mesh.coords(verts[2]);
        const double parent_area = tri_area(p0, p1, p2);
        const auto hats_at = [&](double x, double y) {
            const Point p{x, y};
            const double l1 = tri_area(p0, p, p2) / parent_area;
            const double l2 = tri_area(p0, p1, p) / parent_area;
            return std::array<double, 3>{1.0 - l1 - l2, l1, l2};
        };

        std::vector<std::vector<Point>> pieces{{p0, p1, p2}};
        for (double c : breaks) {
            std::vector<std::vector<Point>> next;
            for (auto& poly : pieces) {
                double lo = poly[0][0], hi = poly[0][0];
                for (const auto& p : poly) lo = std::min(lo, p[0]), hi = std::max(hi, p[0]);
                if (c > lo && c < hi) {
                    next.push_back(clip(poly, c, true));
                    next.push_back(clip(poly, c, false));
                } else {
                    next.push_back(std::move(poly));
                }
            }
            pieces = std::move(next);
        }

        for (const auto& poly : pieces) {
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                const Point &a = poly[0], &b = poly[k], &c = poly[k + 1];
                const double area = std::abs(tri_area(a, b, c));
                if (area == 0.0) continue;
                for (const auto& qp : rule) {
                    const double x = qp.bary[0] * a[0] + qp.bary[1] * b[0] + qp.bary[2] * c[0];
                    const double y = qp.bary[0] * a[1] + qp.bary[1] * b[1] + qp.bary[2] * c[1];
                    f(verts, hats_at(x, y), x, y, area * qp.weight);
                }
            }
        }
    }
}

double poly_eval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

long dof_1d(const Mesh1D& mesh, std::size_t vertex) {
    return (vertex == 0 || vertex == mesh.M) ? -1 : static_cast<long>(vertex) - 1;
}

template <class Scalar>
double l2_error_impl(const Mesh& mesh, std::span<const Scalar> coeffs, const SpatialFunction& exact) {
    if (coeffs.size() != dof_count(mesh))
        throw std::invalid_argument("l2_error: coefficient count does not match the mesh");
    double acc = 0.0;
    if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) {
        visit_1d(*m1, exact.x_breaks, gauss5(), [&](std::size_t e, double hl, double hr, double x, double w) {
            Scalar uh{};
            if (const long d = dof_1d(*m1, e); d >= 0) uh += hl * coeffs[static_cast<std::size_t>(d)];
            if (const long d = dof_1d(*m1, e + 1); d >= 0) uh += hr * coeffs[static_cast<std::size_t>(d)];
            acc += w * std::norm(uh - exact(x, 0.0));
        });
    } else {
        const auto& m2 = std::get<Mesh2D>(mesh);
        visit_2d(m2, exact.x_breaks, [&](const auto& verts, const auto& hats, double x, double y, double w) {
            Scalar uh{};
            for (int k = 0; k < 3; ++k)
                if (const long d = m2.dof(verts[k]); d >= 0)
                    uh += hats[k] * coeffs[static_cast<std::size_t>(d)];
            acc += w * std::norm(uh - exact(x, y));
        });
    }
    return std::sqrt(acc);
}

template <class Scalar>
double mass_norm_impl(const AssembledOperators& ops, std::span<const Scalar> c) {
    if (c.size() != ops.dof_count) throw std::invalid_argument("mass_norm: size mismatch");
    double acc = 0.0;
    for (int k = 0; k < ops.mass.outerSize(); ++k)
        for (SparseReal::InnerIterator it(ops.mass, k); it; ++it)
            acc += it.value() * std::real(std::conj(c[static_cast<std::size_t>(it.row())]) *
                                          c[static_cast<std::size_t>(it.col())]);
    return std::sqrt(std::max(acc, 0.0));
}

RealVector spd_solve(const SparseReal& a, std::span<const double> b, const char* who) {
    if (static_cast<std::size_t>(a.rows()) != b.size())
        throw std::invalid_argument(std::string(who) + ": size mismatch");
    Eigen::SimplicialLDLT<SparseReal> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error(std::string(who) + ": factorization failed");
    const Eigen::Map<const Eigen::VectorXd> bv(b.data(), static_cast<Eigen::Index>(b.size()));
    const Eigen::VectorXd x = ldlt.solve(bv);
    return {x.data(), x.data() + x.size()};
}

}  // namespace

std::array<double, 2> Mesh2D::coords(std::size_t v) const {
    return {static_cast<double>(v % (M + 1)) * h(), static_cast<double>(v / (M + 1)) * h()};
}

long Mesh2D::dof(std::size_t v) const {
    const std::size_t i = v % (M + 1), j = v / (M + 1);
    if (i == 0 || j == 0 || i == M || j == M) return -1;
    return static_cast<long>((i - 1) + (j - 1) * (M - 1));
}

std::array<std::size_t, 3> Mesh2D::triangle(std::size_t t) const {
    const std::size_t cell = t / 2, i = cell % M, j = cell / M;
    if (t % 2 == 0) return {vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1)};
    return {vertex(i, j), vertex(i + 1, j + 1), vertex(i, j + 1)};
}

std::size_t dof_count(const Mesh& mesh) {
    return std::visit([](const auto& m) { return m.dof_count(); }, mesh);
}

std::size_t dimension(const Mesh& mesh) { return std::holds_alternative<Mesh1D>(mesh) ? 1 : 2; }

InitialDataSpec InitialDataSpec::zero() { return {}; }

InitialDataSpec InitialDataSpec::indicator(double scale, double x_lo, double x_hi, double y_lo,
                                           double y_hi) {
    InitialDataSpec s;
    s.kind = Kind::indicator;
    s.scale = scale;
    s.x_lo = x_lo, s.x_hi = x_hi, s.y_lo = y_lo, s.y_hi = y_hi;
    return s;
}

InitialDataSpec InitialDataSpec::piecewise_linear(std::vector<Segment> segments, double scale) {
    InitialDataSpec s;
    s.kind = Kind::piecewise_linear;
    s.scale = scale;
    s.segments = std::move(segments);
    return s;
}

InitialDataSpec InitialDataSpec::polynomial(std::vector<double> coeffs, double scale) {
    InitialDataSpec s;
    s.kind = Kind::polynomial;
    s.scale = scale;
    s.poly_x = std::move(coeffs);
    return s;
}

InitialDataSpec InitialDataSpec::product_2d(std::vector<double> px, std::vector<double> py,
                                            double scale) {
    InitialDataSpec s;
    s.kind = Kind::product_2d;
    s.scale = scale;
    s.poly_x = std::move(px);
    s.poly_y = std::move(py);
    return s;
}

double InitialDataSpec::operator()(double x, double y) const {
    switch (kind) {
        case Kind::zero:
            return 0.0;
        case Kind::indicator:
            // y is closed below so that 1-D evaluation at y = 0 lies inside
            return (x > x_lo && x <= x_hi && y >= y_lo && y <= y_hi) ? scale : 0.0;
        case Kind::piecewise_linear:
            for (std::size_t k = 0; k < segments.size(); ++k) {
                const auto& s = segments[k];
                const bool in = (k == 0 ? x >= s.x0 : x > s.x0) && x <= s.x1;
                if (in) return scale * (s.slope * x + s.intercept);
            }
            return 0.0;
        case Kind::polynomial:
            return scale * poly_eval(poly_x, x);
        case Kind::product_2d:
            return scale * poly_eval(poly_x, x) * poly_eval(poly_y, y);
    }
    return 0.0;
}

SpatialFunction InitialDataSpec::as_function() const {
    SpatialFunction f;
    f.value = [spec = *this](double x, double y) { return spec(x, y); };
    if (kind == Kind::indicator) {
        f.x_breaks = {x_lo, x_hi};
        // y-jumps are only supported on mesh lines; the benchmarks use y in (0, 1)
    } else if (kind == Kind::piecewise_linear) {
        for (const auto& s : segments) f.x_breaks.push_back(s.x1);
    }
    return f;
}

AssembledOperators assemble(const Mesh& mesh) {
    AssembledOperators ops;
    ops.dof_count = dof_count(mesh);
    const auto n = static_cast<Eigen::Index>(ops.dof_count);
    std::vector<Eigen::Triplet<double>> mt, st;

    if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) {
        if (m1->M < 2) throw std::invalid_argument("assemble: 1-D mesh needs M >= 2");
        const double h = m1->h();
        for (Eigen::Index i = 0; i < n; ++i) {
            mt.emplace_back(i, i, 4.0 * h / 6.0);
            st.emplace_back(i, i, 2.0 / h);
            if (i + 1 < n) {
                mt.emplace_back(i, i + 1, h / 6.0);
                mt.emplace_back(i + 1, i, h / 6.0);
                st.emplace_back(i, i + 1, -1.0 / h);
                st.emplace_back(i + 1, i, -1.0 / h);
            }
        }
    } else {
        const auto& m2 = std::get<Mesh2D>(mesh);
        if (m2.M < 2) throw std::invalid_argument("assemble: 2-D mesh needs M >= 2");
        for (std::size_t t = 0; t < m2.triangle_count(); ++t) {
            const auto v = m2.triangle(t);
            const Point p0 = m2.coords(v[0]), p1 = m2.coords(v[1]), p2 = m2.coords(v[2]);
            const double area = tri_area(p0, p1, p2);
            // gradients of barycentric coordinates
            const std::array<Point, 3> g{{{p1[1] - p2[1], p2[0] - p1[0]},
                                          {p2[1] - p0[1], p0[0] - p2[0]},
                                          {p0[1] - p1[1], p1[0] - p0[0]}}};
            for (int a = 0; a < 3; ++a) {
                const long da = m2.dof(v[a]);
                if (da < 0) continue;
                for (int b = 0; b < 3; ++b) {
                    const long db = m2.dof(v[b]);
                    if (db < 0) continue;
                    const double mloc = area / 12.0 * (a == b ? 2.0 : 1.0);
                    const double sloc = (g[a][0] * g[b][0] + g[a][1] * g[b][1]) / (4.0 * area);
                    mt.emplace_back(da, db, mloc);
                    st.emplace_back(da, db, sloc);
                }
            }
        }
    }
    ops.mass.resize(n, n);
    ops.stiffness.resize(n, n);
    ops.mass.setFromTriplets(mt.begin(), mt.end());
    ops.stiffness.setFromTriplets(st.begin(), st.end());
    ops.mass.makeCompressed();
    ops.stiffness.makeCompressed();
    return ops;
}

RealVector load_vector_all_vertices(const Mesh& mesh, const SpatialFunction& g) {
    if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) {
        RealVector b(m1->M + 1, 0.0);
        visit_1d(*m1, g.x_breaks, gauss3(), [&](std::size_t e, double hl, double hr, double x, double w) {
            const double gv = g(x, 0.0) * w;
            b[e] += hl * gv;
            b[e + 1] += hr * gv;
        });
        return b;
    }
    const auto& m2 = std::get<Mesh2D>(mesh);
    RealVector b(m2.vertex_count(), 0.0);
    visit_2d(m2, g.x_breaks, [&](const auto& verts, const auto& hats, double x, double y, double w) {
        const double gv = g(x, y) * w;
        for (int k = 0; k < 3; ++k) b[verts[k]] += hats[k] * gv;
    });
    return b;
}

RealVector load_vector(const Mesh& mesh, const SpatialFunction& g) {
    const RealVector all = load_vector_all_vertices(mesh, g);
    RealVector b(dof_count(mesh));
    if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) {
        std::copy(all.begin() + 1, all.begin() + static_cast<long>(m1->M), b.begin());
    } else {
        const auto& m2 = std::get<Mesh2D>(mesh);
        for (std::size_t v = 0; v < all.size(); ++v)
            if (const long d = m2.dof(v); d >= 0) b[static_cast<std::size_t>(d)] = all[v];
    }
    return b;
}

RealVector load_vector(const Mesh& mesh, const InitialDataSpec& g) {
    if (g.is_zero()) return RealVector(dof_count(mesh), 0.0);
    return load_vector(mesh, g.as_function());
}

RealVector ritz_load(const Mesh& mesh, const GradientFunction& grad_g) {
    RealVector b(dof_count(mesh), 0.0);
    if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) {
        const double h = m1->h();
        visit_1d(*m1, {}, gauss5(), [&](std::size_t e, double, double, double x, double w) {
            const double gx = grad_g(x, 0.0)[0] * w;
            if (const long d = dof_1d(*m1, e); d >= 0) b[static_cast<std::size_t>(d)] -= gx / h;
            if (const long d = dof_1d(*m1, e + 1); d >= 0) b[static_cast<std::size_t>(d)] += gx / h;
        });
        return b;
    }
    const auto& m2 = std::get<Mesh2D>(mesh);
    visit_2d(m2, {}, [&](const auto& v, const auto&, double x, double y, double w) {
        const Point p0 = m2.coords(v[0]), p1 = m2.coords(v[1]), p2 = m2.coords(v[2]);
        const double two_area = 2.0 * tri_area(p0, p1, p2);
        const std::array<Point, 3> g{{{(p1[1] - p2[1]) / two_area, (p2[0] - p1[0]) / two_area},
                                      {(p2[1] - p0[1]) / two_area, (p0[0] - p2[0]) / two_area},
                                      {(p0[1] - p1[1]) / two_area, (p1[0] - p0[0]) / two_area}}};
        const auto gg = grad_g(x, y);
        for (int k = 0; k < 3; ++k)
            if (const long d = m2.dof(v[k]); d >= 0)
                b[static_cast<std::size_t>(d)] += w * (gg[0] * g[k][0] + gg[1] * g[k][1]);
    });
    return b;
}

RealVector project_l2(const AssembledOperators& ops, std::span<const double> b) {
    return spd_solve(ops.mass, b, "project_l2");
}

RealVector project_ritz(const AssembledOperators& ops, std::span<const double> b_grad) {
    return spd_solve(ops.stiffness, b_grad, "project_ritz");
}

double l2_error(const Mesh& mesh, std::span<const double> coeffs, const SpatialFunction& exact) {
    return l2_error_impl<double>(mesh, coeffs, exact);
}

double l2_error(const Mesh& mesh, std::span<const cplx> coeffs, const SpatialFunction& exact) {
    return l2_error_impl<cplx>(mesh, coeffs, exact);
}

double mass_norm(const AssembledOperators& ops, std::span<const double> c) {
    return mass_norm_impl<double>(ops, c);
}

double mass_norm(const AssembledOperators& ops, std::span<const cplx> c) {
    return mass_norm_impl<cplx>(ops, c);
}

std::array<double, 2> dof_coords(const Mesh& mesh, std::size_t i) {
    if (const auto* m1 = std::get_if<Mesh1D>(&mesh)) return {m1->node(i + 1), 0.0};
    const auto& m2 = std::get<Mesh2D>(mesh);
    const std::size_t n = m2.M - 1;
    return m2.coords(m2.vertex(i % n + 1, i / n + 1));
}

RealVector interpolate(const Mesh& mesh, const SpatialFunction& g) {
    RealVector c(dof_count(mesh));
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto p = dof_coords(mesh, i);
        c[i] = g(p[0], p[1]);
    }
    return c;
}

RealVector prolong(const Mesh& coarse, std::span<const double> coeffs) {
    if (coeffs.size() != dof_count(coarse)) throw std::invalid_argument("prolong: size mismatch");
    if (const auto* m1 = std::get_if<Mesh1D>(&coarse)) {
        const std::size_t M = m1->M;
        const auto at = [&](std::size_t i) { return (i == 0 || i == M) ? 0.0 : coeffs[i - 1]; };
        RealVector fine(2 * M - 1);
        for (std::size_t I = 1; I < 2 * M; ++I)
            fine[I - 1] = (I % 2 == 0) ? at(I / 2) : 0.5 * (at(I / 2) + at(I / 2 + 1));
        return fine;
    }
    const auto& m2 = std::get<Mesh2D>(coarse);
    const std::size_t M = m2.M, nf = 2 * M - 1;
    const auto at = [&](std::size_t i, std::size_t j) {
        const long d = m2.dof(m2.vertex(i, j));
        return d < 0 ? 0.0 : coeffs[static_cast<std::size_t>(d)];
    };
    RealVector fine(nf * nf);
    for (std::size_t J = 1; J < 2 * M; ++J) {
        for (std::size_t I = 1; I < 2 * M; ++I) {
            const std::size_t i = I / 2, j = J / 2;
            double v;
            if (I % 2 == 0 && J % 2 == 0) v = at(i, j);
            else if (J % 2 == 0) v = 0.5 * (at(i, j) + at(i + 1, j));
            else if (I % 2 == 0) v = 0.5 * (at(i, j) + at(i, j + 1));
            else v = 0.5 * (at(i, j) + at(i + 1, j + 1));  // midpoint of the cell diagonal
            fine[(I - 1) + (J - 1) * nf] = v;
        }
    }
    return fine;
}

}  // namespace cimfem
