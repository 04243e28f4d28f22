#include "cimfem/contour.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cimfem {

void ContourConfig::validate() const {
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(alpha > 0.0 && alpha < half_pi))
        throw std::invalid_argument("contour: alpha must lie in (0, pi/2)");
    if (!(delta_prime > 0.0 && delta_prime < half_pi))
        throw std::invalid_argument("contour: delta_prime must lie in (0, pi/2)");
    if (!(alpha + delta_prime < half_pi))
        throw std::invalid_argument("contour: alpha + delta_prime must be below pi/2");
    if (!(lambda_ratio > 1.0)) throw std::invalid_argument("contour: Lambda must exceed 1");
    if (!(t0 > 0.0)) throw std::invalid_argument("contour: t0 must be positive");
    if (N < 2) throw std::invalid_argument("contour: N must be at least 2");
    if (D < 2) throw std::invalid_argument("contour: D must be at least 2");
    if (!(eps_round > 0.0 && eps_round < 1.0))
        throw std::invalid_argument("contour: eps_round must lie in (0, 1)");
    if (!(d_margin > 0.0 && d_margin < 1.0))
        throw std::invalid_argument("contour: d_margin must lie in (0, 1)");
}

cplx contour_point(double phi, double mu, double alpha) {
    return {mu * (1.0 - std::sin(alpha) * std::cosh(phi)), mu * std::cos(alpha) * std::sinh(phi)};
}

cplx contour_derivative(double phi, double mu, double alpha) {
    return {-mu * std::sin(alpha) * std::sinh(phi), mu * std::cos(alpha) * std::cosh(phi)};
}

double strip_half_width(const ContourConfig& cfg) {
    const double asymptote = std::numbers::pi / 2.0 - cfg.alpha - cfg.delta_prime;
    if (asymptote < cfg.alpha) return asymptote;
    // sin(alpha - d) must stay positive
    return cfg.alpha * (1.0 - cfg.d_margin);
}

RhoSample epsilon_n(double rho, const ContourConfig& cfg, double d_tilde) {
    if (!(rho >= 0.0 && rho < 1.0)) throw std::domain_error("epsilon_n: rho must lie in [0, 1)");
    const double arg = cfg.lambda_ratio / ((1.0 - rho) * std::sin(cfg.alpha - d_tilde));
    if (!(arg > 1.0))
        throw std::domain_error("epsilon_n: acosh argument " + std::to_string(arg) +
                                " is not above 1");
    const double a = std::acosh(arg);
    const double eps_n =
        std::exp(-2.0 * std::numbers::pi * d_tilde * static_cast<double>(cfg.N) / a);
    return {a, eps_n};
}

double balance_objective(double rho, const RhoSample& s, double eps_round) {
    return eps_round * std::pow(s.eps_N, rho - 1.0) + std::pow(s.eps_N, rho) / (1.0 - s.eps_N);
}

OptimalParameters optimize_rho(const ContourConfig& cfg) {
    cfg.validate();
    const double d_tilde = strip_half_width(cfg);

    OptimalParameters best;
    best.predicted_error = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t j = 0; j < cfg.D; ++j) {
        const double rho = static_cast<double>(j) / static_cast<double>(cfg.D);
        RhoSample s{};
        try {
            s = epsilon_n(rho, cfg, d_tilde);
        } catch (const std::domain_error&) {
            continue;
        }
        const double obj = balance_objective(rho, s, cfg.eps_round);
        if (!std::isfinite(obj)) continue;
        if (!found || obj < best.predicted_error) {
            found = true;
            best.rho_star = rho;
            best.a_rho = s.a_rho;
            best.eps_N = s.eps_N;
            best.predicted_error = obj;
        }
    }
    if (!found) throw std::domain_error("optimize_rho: no feasible rho on the grid");

    const double n = static_cast<double>(cfg.N);
    best.d_tilde = d_tilde;
    best.alpha = cfg.alpha;
    best.tau_star = best.a_rho / n;
    best.mu_star = 2.0 * std::numbers::pi * d_tilde * n * (1.0 - best.rho_star) /
                   (cfg.t0 * cfg.lambda_ratio * best.a_rho);
    return best;
}

ContourQuadrature quadrature_nodes(const OptimalParameters& params, std::size_t N) {
    ContourQuadrature q;
    q.tau = params.tau_star;
    q.mu = params.mu_star;
    q.alpha = params.alpha;
    q.nodes.reserve(N);
    q.derivs.reserve(N);
    q.phis.reserve(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double phi = (static_cast<double>(k) + 0.5) * params.tau_star;
        q.phis.push_back(phi);
        q.nodes.push_back(contour_point(phi, params.mu_star, params.alpha));
        q.derivs.push_back(contour_derivative(phi, params.mu_star, params.alpha));
    }
    return q;
}

ContourQuadrature make_quadrature(const ContourConfig& cfg) {
    return quadrature_nodes(optimize_rho(cfg), cfg.N);
}

}  // namespace cimfem
