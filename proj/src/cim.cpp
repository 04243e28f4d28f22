#include "cimfem/cim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "cimfem/diagnostics.hpp"

namespace cimfem {
namespace {

std::atomic<std::size_t> g_threads{0};

// Runs f(i) for i in [0, n) on the worker pool; rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    std::size_t workers = worker_threads();
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ComplexTridiag shifted_tridiag(const AssembledOperators& ops, cplx shift) {
    const auto n = static_cast<Eigen::Index>(ops.dof_count);
    ComplexTridiag t;
    t.diag.resize(static_cast<std::size_t>(n));
    t.lower.resize(static_cast<std::size_t>(std::max<Eigen::Index>(n - 1, 0)));
    t.upper.resize(t.lower.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        t.diag[static_cast<std::size_t>(i)] = shift * ops.mass.coeff(i, i) + ops.stiffness.coeff(i, i);
        if (i + 1 < n) {
            t.upper[static_cast<std::size_t>(i)] =
                shift * ops.mass.coeff(i, i + 1) + ops.stiffness.coeff(i, i + 1);
            t.lower[static_cast<std::size_t>(i)] =
                shift * ops.mass.coeff(i + 1, i) + ops.stiffness.coeff(i + 1, i);
        }
    }
    return t;
}

void check_pole_clearance(const SourceTransform& f_hat, const ContourQuadrature& quad) {
    const double sigma = f_hat.max_pole();
    if (sigma <= 0.0) return;
    const double vertex = quad.mu * (1.0 - std::sin(quad.alpha));
    if (!(vertex > sigma))
        warn("contour vertex " + std::to_string(vertex) + " does not clear the source pole at " +
             std::to_string(sigma) + "; its residue is added explicitly");
}

}  // namespace

void set_worker_threads(std::size_t n) { g_threads = n; }

std::size_t worker_threads() {
    const std::size_t n = g_threads.load();
    if (n != 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void Problem::validate() const {
    sym.validate();
    f_hat.validate();
    if (const auto* s = std::get_if<ScalarDomain>(&domain); s && !(s->a > 0.0))
        throw std::invalid_argument("problem: scalar reaction coefficient must be positive");
    for (const auto& t : f_hat.terms)
        if (t.spatial_factor >= spatial_factors.size())
            throw std::invalid_argument("problem: source term references a missing spatial factor");
    if (!(t0 > 0.0 && lambda_ratio > 1.0))
        throw std::invalid_argument("problem: window needs t0 > 0 and Lambda > 1");
}

AssembledProblem assemble_problem(const Problem& p) {
    p.validate();
    AssembledProblem out;
    out.sym = p.sym;
    out.domain = p.domain;
    out.f_hat = p.f_hat;
    out.t0 = p.t0;
    out.lambda_ratio = p.lambda_ratio;

    if (const auto* s = std::get_if<ScalarDomain>(&p.domain)) {
        out.ops.dof_count = 1;
        out.ops.mass.resize(1, 1);
        out.ops.stiffness.resize(1, 1);
        out.ops.mass.insert(0, 0) = 1.0;
        out.ops.stiffness.insert(0, 0) = s->a;
        out.u0_load = {p.u0(0.0, 0.0)};
        for (const auto& g : p.spatial_factors) out.factor_loads.push_back({g(0.0, 0.0)});
        return out;
    }

    const Mesh mesh = std::holds_alternative<Mesh1D>(p.domain) ? Mesh{std::get<Mesh1D>(p.domain)}
                                                               : Mesh{std::get<Mesh2D>(p.domain)};
    out.ops = assemble(mesh);
    if (std::holds_alternative<Mesh2D>(p.domain))
        out.symbolic = std::make_shared<const ComplexSymmetricLDLT>(
            SparseComplex(out.ops.mass.cast<cplx>() + out.ops.stiffness.cast<cplx>()));
    out.u0_load = load_vector(mesh, p.u0);
    for (const auto& g : p.spatial_factors) out.factor_loads.push_back(load_vector(mesh, g));
    return out;
}

namespace {

ComplexVector solve_shifted(const AssembledProblem& p, cplx shift, std::span<const cplx> rhs) {
    if (std::holds_alternative<ScalarDomain>(p.domain))
        return {rhs[0] / (shift * p.ops.mass.coeff(0, 0) + p.ops.stiffness.coeff(0, 0))};
    if (std::holds_alternative<Mesh1D>(p.domain)) return thomas_solve(shifted_tridiag(p.ops, shift), rhs);
    const SparseComplex a = shift * p.ops.mass.cast<cplx>() + p.ops.stiffness.cast<cplx>();
    if (p.symbolic) return symmetric_solve(*p.symbolic, a, rhs);
    return sparse_solve(a, rhs);
}

}  // namespace

ComplexVector solve_node(const AssembledProblem& p, cplx z) {
    const std::size_t n = p.dof_count();
    const cplx u0_weight = p.sym.K + complex_pow(z, p.sym.beta - 1.0);

    ComplexVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = u0_weight * p.u0_load[i];
    if (!p.f_hat.empty()) {
        for (const auto& [factor, weight] : transform_eval(p.f_hat, z)) {
            const RealVector& b = p.factor_loads[factor];
            for (std::size_t i = 0; i < n; ++i) rhs[i] += weight * b[i];
        }
    }
    return solve_shifted(p, eta(z, p.sym), rhs);
}

std::vector<PoleResidue> uncleared_pole_residues(const AssembledProblem& p, const ContourQuadrature& quad) {
    const double vertex = quad.mu * (1.0 - std::sin(quad.alpha));
    std::vector<PoleResidue> out;
    for (const auto& term : p.f_hat.terms) {
        if (term.kind != TermKind::pole || term.parameter < vertex) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const PoleResidue& r) { return r.sigma == term.parameter; });
        if (it == out.end()) it = out.insert(out.end(), PoleResidue{term.parameter, RealVector(p.dof_count(), 0.0)});
        const RealVector& b = p.factor_loads[term.spatial_factor];
        for (std::size_t i = 0; i < b.size(); ++i) it->coefficients[i] += term.coefficient * b[i];
    }
    for (auto& r : out) {
        const ComplexVector rhs(r.coefficients.begin(), r.coefficients.end());
        const ComplexVector x = solve_shifted(p, eta(cplx{r.sigma, 0.0}, p.sym), rhs);
        for (std::size_t i = 0; i < x.size(); ++i) r.coefficients[i] = x[i].real();
    }
    return out;
}

namespace {

void check_window(const NodeSolutionSet& ns, double t) {
    const double mu_t = ns.nodes.mu * t;
    if (mu_t > 700.0) throw std::overflow_error("evaluate: mu * t = " + std::to_string(mu_t) + " overflows exp");
    if (t < ns.t0 || t > ns.lambda_ratio * ns.t0)
        warn("evaluate: t = " + std::to_string(t) + " lies outside the calibrated window");
}

void add_residues(const NodeSolutionSet& ns, double t, RealVector& out) {
    for (const auto& r : ns.residues) {
        const double w = std::exp(r.sigma * t);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * r.coefficients[i];
    }
}

}  // namespace

NodeSolutionSet solve_nodes(const AssembledProblem& p, const ContourQuadrature& quad) {
    check_pole_clearance(p.f_hat, quad);
    NodeSolutionSet ns;
    ns.nodes = quad;
    ns.t0 = p.t0;
    ns.lambda_ratio = p.lambda_ratio;
    ns.residues = uncleared_pole_residues(p, quad);
    ns.solutions.resize(quad.size());
    parallel_for(quad.size(), [&](std::size_t k) {
        try {
            ns.solutions[k] = solve_node(p, quad.nodes[k]);
        } catch (const SolverError& e) {
            throw SolverError("node " + std::to_string(k) + ": " + e.what(), e.residual());
        }
    });
    return ns;
}

NodeSolutionSet solve_nodes(const Problem& p, const ContourQuadrature& quad) {
    return solve_nodes(assemble_problem(p), quad);
}

RealVector evaluate(const NodeSolutionSet& ns, double t) {
    const ContourQuadrature& q = ns.nodes;
    check_window(ns, t);
    if (ns.solutions.empty()) return {};

    const std::size_t n = ns.solutions.front().size();
    ComplexVector acc(n);
    for (std::size_t k = 0; k < q.size(); ++k) {
        const cplx w = std::exp(q.nodes[k] * t) * q.derivs[k];
        const ComplexVector& u = ns.solutions[k];
        for (std::size_t i = 0; i < n; ++i) acc[i] += w * u[i];
    }
    RealVector out(n);
    const double scale = q.tau / std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * acc[i].imag();
    add_residues(ns, t, out);
    return out;
}

RealVector evaluate_full_contour(const NodeSolutionSet& ns, double t) {
    const ContourQuadrature& q = ns.nodes;
    if (ns.solutions.empty()) return {};
    const std::size_t n = ns.solutions.front().size();
    ComplexVector acc(n);
    // the mirrored node -phi_k carries conj(z_k) and -conj(z'_k)
    for (std::size_t k = 0; k < q.size(); ++k) {
        const cplx z = q.nodes[k], dz = q.derivs[k];
        const cplx zc = std::conj(z), dzc = -std::conj(dz);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx u = ns.solutions[k][i];
            acc[i] += std::exp(z * t) * u * dz;
            acc[i] += std::exp(zc * t) * std::conj(u) * dzc;
        }
    }
    RealVector out(n);
    const cplx factor = q.tau / (2.0 * std::numbers::pi * cplx{0.0, 1.0});
    for (std::size_t i = 0; i < n; ++i) out[i] = (factor * acc[i]).real();
    add_residues(ns, t, out);
    return out;
}

std::vector<double> chebyshev_lobatto(std::size_t n, double a, double b) {
    std::vector<double> x(n + 1);
    for (std::size_t j = 0; j <= n; ++j)
        x[j] = 0.5 * (a + b) +
               0.5 * (b - a) * std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n));
    x[0] = b;
    x[n] = a;
    return x;
}

std::vector<double> chebyshev_lobatto_weights(std::size_t n) {
    std::vector<double> w(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double delta = (j == 0 || j == n) ? 0.5 : 1.0;
        w[j] = (j % 2 == 0 ? 1.0 : -1.0) * delta;
    }
    return w;
}

namespace {

// Normalized barycentric coefficients c_j(phi), summing to one.
std::vector<double> barycentric_coefficients(const InterpolantSet& it, double phi) {
    std::vector<double> c(it.n + 1, 0.0);
    const double guard = 1e-14 * (it.b - it.a);
    for (std::size_t j = 0; j <= it.n; ++j)
        if (std::fabs(phi - it.cheb_phis[j]) <= guard) {
            c[j] = 1.0;
            return c;
        }
    double denom = 0.0;
    for (std::size_t j = 0; j <= it.n; ++j) {
        c[j] = it.weights[j] / (phi - it.cheb_phis[j]);
        denom += c[j];
    }
    if (!(std::fabs(denom) > 1e-300) || !std::isfinite(denom))
        throw std::runtime_error("barycentric_eval: degenerate weight sum");
    for (double& cj : c) cj /= denom;
    return c;
}

}  // namespace

ComplexVector barycentric_eval(const InterpolantSet& it, double phi) {
    const std::vector<double> c = barycentric_coefficients(it, phi);
    const std::size_t dofs = it.cheb_solutions.front().size();
    ComplexVector out(dofs);
    for (std::size_t j = 0; j <= it.n; ++j) {
        if (c[j] == 0.0) continue;
        const ComplexVector& u = it.cheb_solutions[j];
        for (std::size_t i = 0; i < dofs; ++i) out[i] += c[j] * u[i];
    }
    return out;
}

InterpolantSet build_interpolant(const AssembledProblem& p, const ContourQuadrature& quad,
                                 std::size_t n) {
    if (n < 2 || n >= quad.size())
        throw std::invalid_argument("build_interpolant: need 2 <= n < N");
    check_pole_clearance(p.f_hat, quad);
    InterpolantSet it;
    it.n = n;
    it.a = 0.5 * quad.tau;
    it.b = (static_cast<double>(quad.size()) - 0.5) * quad.tau;
    it.cheb_phis = chebyshev_lobatto(n, it.a, it.b);
    it.weights = chebyshev_lobatto_weights(n);
    it.cheb_solutions.resize(n + 1);
    parallel_for(n + 1, [&](std::size_t j) {
        const cplx z = contour_point(it.cheb_phis[j], quad.mu, quad.alpha);
        try {
            it.cheb_solutions[j] = solve_node(p, z);
        } catch (const SolverError& e) {
            throw SolverError("chebyshev node " + std::to_string(j) + ": " + e.what(), e.residual());
        }
    });
    return it;
}

NodeSolutionSet interpolated_nodes(const AssembledProblem& p, const ContourQuadrature& quad,
                                   std::size_t n) {
    const InterpolantSet it = build_interpolant(p, quad, n);
    NodeSolutionSet ns;
    ns.nodes = quad;
    ns.t0 = p.t0;
    ns.lambda_ratio = p.lambda_ratio;
    ns.residues = uncleared_pole_residues(p, quad);
    ns.solutions.reserve(quad.size());
    for (double phi : quad.phis) ns.solutions.push_back(barycentric_eval(it, phi));
    return ns;
}

RealVector solve_accelerated(const AssembledProblem& p, const ContourQuadrature& quad, std::size_t n,
                             double t) {
    const InterpolantSet it = build_interpolant(p, quad, n);
    NodeSolutionSet frame;  // carries the window and residues; node vectors are never formed
    frame.nodes = quad;
    frame.t0 = p.t0;
    frame.lambda_ratio = p.lambda_ratio;
    frame.residues = uncleared_pole_residues(p, quad);
    check_window(frame, t);

    // By linearity the quadrature weights fold onto the Chebyshev samples:
    // sum_k w_k sum_j c_kj u_j = sum_j (sum_k w_k c_kj) u_j.
    ComplexVector folded(n + 1);
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const cplx w = std::exp(quad.nodes[k] * t) * quad.derivs[k];
        const std::vector<double> c = barycentric_coefficients(it, quad.phis[k]);
        for (std::size_t j = 0; j <= n; ++j) folded[j] += w * c[j];
    }
    const std::size_t dofs = p.dof_count();
    ComplexVector acc(dofs);
    for (std::size_t j = 0; j <= n; ++j) {
        const ComplexVector& u = it.cheb_solutions[j];
        for (std::size_t i = 0; i < dofs; ++i) acc[i] += folded[j] * u[i];
    }
    RealVector out(dofs);
    const double scale = quad.tau / std::numbers::pi;
    for (std::size_t i = 0; i < dofs; ++i) out[i] = scale * acc[i].imag();
    add_residues(frame, t, out);
    return out;
}

RealVector solve_accelerated(const Problem& p, const ContourQuadrature& quad, std::size_t n,
                             double t) {
    return solve_accelerated(assemble_problem(p), quad, n, t);
}

double predicted_interp_decay(const ContourQuadrature& quad, double alpha, double eps_margin) {
    const double N = static_cast<double>(quad.size());
    if (N < 2) throw std::invalid_argument("predicted_interp_decay: need N >= 2");
    const double p = std::numbers::pi / 2.0 - alpha - eps_margin;
    const double r = p * p / ((N - 1.0) * (N - 1.0) * quad.tau * quad.tau);
    const double L = std::sqrt(std::pow(1.0 + 1.0 / (2.0 * (N - 1.0)), 2) + r) +
                     std::sqrt(1.0 / (4.0 * (N - 1.0) * (N - 1.0)) + r);
    return L + std::sqrt(L * L - 1.0);
}

ContourConfig window_config(const Problem& p, std::size_t N, ContourConfig base) {
    base.t0 = p.t0;
    base.lambda_ratio = p.lambda_ratio;
    base.N = N;
    return base;
}

}  // namespace cimfem
