#include "cimfem/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cimfem/diagnostics.hpp"
#include "cimfem/mlf.hpp"

namespace cimfem {
namespace {

constexpr double kPi = std::numbers::pi;
const double kEx1Slope = 1.5 * std::sqrt(kPi);  // c in u = 1 + c t

SpatialFunction constant(double v) {
    return {[v](double, double) { return v; }, {}};
}

std::optional<Mesh> mesh_of(const Domain& d) {
    if (const auto* m = std::get_if<Mesh1D>(&d)) return Mesh{*m};
    if (const auto* m = std::get_if<Mesh2D>(&d)) return Mesh{*m};
    return std::nullopt;
}

Domain make_domain(std::size_t dim, std::size_t M) {
    if (dim == 1) return Mesh1D{M};
    return Mesh2D{M};
}

InitialDataSpec ex3_data(int c) {
    switch (c) {
        case 1:
            return InitialDataSpec::indicator(kPi * kPi * kPi, 0.0, 0.75);
        case 2:
            return InitialDataSpec::piecewise_linear({{0.0, 0.75, 1.0, 0.0}, {0.75, 1.0, -1.0, 0.0}});
        default:
            return InitialDataSpec::polynomial({0.0, 1.0, -1.0}, kPi * kPi * kPi);
    }
}

InitialDataSpec ex4_data(int c) {
    if (c == 1) return InitialDataSpec::indicator(kPi, 0.0, 0.75, 0.0, 1.0);
    if (c == 2) return InitialDataSpec::product_2d({0.0, 1.0, -1.0}, {0.0, 1.0, -1.0}, 4.0 * kPi * kPi);
    return InitialDataSpec::zero();
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

double median3(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<double> resolve_times(const ExperimentSpec& spec) {
    if (!spec.times.empty()) return spec.times;
    return {spec.example.default_time()};
}

// Numeric reference solutions for one assembled problem, cached per time.
class NumericReference {
public:
    NumericReference(const AssembledProblem& ap, std::size_t N_ref, const ContourConfig& base)
        : ap_(ap), N_ref_(N_ref), base_(base) {}

    const RealVector& at(double t) {
        if (!nodes_) {
            ContourConfig cfg = base_;
            cfg.t0 = ap_.t0;
            cfg.lambda_ratio = ap_.lambda_ratio;
            cfg.N = N_ref_;
            nodes_ = solve_nodes(ap_, make_quadrature(cfg));
        }
        auto it = cache_.find(t);
        if (it == cache_.end()) it = cache_.emplace(t, evaluate(*nodes_, t)).first;
        return it->second;
    }

private:
    const AssembledProblem& ap_;
    std::size_t N_ref_;
    ContourConfig base_;
    std::optional<NodeSolutionSet> nodes_;
    std::map<double, RealVector> cache_;
};

ContourConfig row_config(const AssembledProblem& ap, std::size_t N, const ContourConfig& base) {
    ContourConfig cfg = base;
    cfg.t0 = ap.t0;
    cfg.lambda_ratio = ap.lambda_ratio;
    cfg.N = N;
    return cfg;
}

ErrorRow base_row(const ExperimentSpec& spec, double beta, std::size_t N, std::size_t M, double t) {
    ErrorRow row;
    row.example = spec.example.name();
    row.beta = beta;
    row.N = N;
    if (!spec.example.is_scalar()) row.M = M;
    row.t = t;
    return row;
}

void record_failure(ErrorRow& row, const std::exception& e) {
    row.failure = e.what();
    warn("row " + row.example + " beta=" + format_sci(row.beta) + " N=" + std::to_string(row.N) +
         " failed: " + e.what());
}

std::vector<std::size_t> mesh_list(const ExperimentSpec& spec) {
    if (spec.example.is_scalar()) return {1};
    return spec.Ms;
}

void run_solve(const ExperimentSpec& spec, ErrorReport& report) {
    const auto times = resolve_times(spec);
    const bool exact = spec.reference.kind == ReferenceSpec::Kind::exact;
    for (double beta : spec.betas)
        for (std::size_t M : mesh_list(spec)) {
            const AssembledProblem ap = assemble_problem(make_problem(spec.example, beta, M, spec.settings));
            std::optional<NumericReference> ref;
            if (!exact) ref.emplace(ap, spec.reference.N_ref, spec.settings.contour);
            for (std::size_t N : spec.Ns)
                for (double t : times) {
                    ErrorRow row = base_row(spec, beta, N, M, t);
                    try {
                        const auto start = std::chrono::steady_clock::now();
                        const RealVector u = solve_plain(ap, N, t, spec.settings.contour);
                        row.wall_ms = ms_since(start);
                        row.error = exact ? distance_to(ap, u, *exact_solution(spec.example, beta, t, spec.settings.K))
                                          : distance(ap, ref->at(t), u);
                    } catch (const std::exception& e) {
                        record_failure(row, e);
                    }
                    report.rows.push_back(std::move(row));
                }
        }
}

void run_time(const ExperimentSpec& spec, ErrorReport& report) {
    const auto times = resolve_times(spec);
    const bool exact = spec.reference.kind == ReferenceSpec::Kind::exact;
    for (double beta : spec.betas)
        for (std::size_t M : mesh_list(spec)) {
            std::optional<AssembledProblem> ap;
            std::optional<NumericReference> ref;
            try {
                ap = assemble_problem(make_problem(spec.example, beta, M, spec.settings));
                if (!exact) ref.emplace(*ap, spec.reference.N_ref, spec.settings.contour);
            } catch (const std::exception& e) {
                for (std::size_t N : spec.Ns)
                    for (double t : times) {
                        ErrorRow row = base_row(spec, beta, N, M, t);
                        record_failure(row, e);
                        report.rows.push_back(std::move(row));
                    }
                continue;
            }
            for (std::size_t N : spec.Ns) {
                std::optional<NodeSolutionSet> ns;
                double solve_ms = 0.0;
                std::string setup_failure;
                try {
                    const auto start = std::chrono::steady_clock::now();
                    ns = solve_nodes(*ap, make_quadrature(row_config(*ap, N, spec.settings.contour)));
                    solve_ms = ms_since(start);
                } catch (const std::exception& e) {
                    setup_failure = e.what();
                }
                for (double t : times) {
                    ErrorRow row = base_row(spec, beta, N, M, t);
                    try {
                        if (!ns) throw std::runtime_error(setup_failure);
                        const auto start = std::chrono::steady_clock::now();
                        const RealVector u = evaluate(*ns, t);
                        row.wall_ms = solve_ms + ms_since(start);
                        if (exact) {
                            const auto sol = exact_solution(spec.example, beta, t, spec.settings.K);
                            row.error = distance_to(*ap, u, *sol);
                        } else {
                            row.error = distance(*ap, ref->at(t), u);
                        }
                    } catch (const std::exception& e) {
                        record_failure(row, e);
                    }
                    report.rows.push_back(std::move(row));
                }
            }
        }
}

void run_space(const ExperimentSpec& spec, ErrorReport& report) {
    const auto times = resolve_times(spec);
    for (double beta : spec.betas)
        for (std::size_t N : spec.Ns)
            for (double t : times) {
                try {
                    const auto start = std::chrono::steady_clock::now();
                    const auto points = error_h(spec.example, beta, spec.Ms, N, t, spec.reference, spec.settings);
                    const double per_row = ms_since(start) / static_cast<double>(std::max<std::size_t>(1, points.size()));
                    for (const auto& pt : points) {
                        ErrorRow row = base_row(spec, beta, N, pt.M, t);
                        row.error = pt.error;
                        row.order = pt.order;
                        row.wall_ms = per_row;
                        report.rows.push_back(std::move(row));
                    }
                } catch (const std::exception& e) {
                    for (std::size_t M : spec.Ms) {
                        ErrorRow row = base_row(spec, beta, N, M, t);
                        record_failure(row, e);
                        report.rows.push_back(std::move(row));
                    }
                }
            }
}

void run_accel(const ExperimentSpec& spec, ErrorReport& report) {
    const auto times = resolve_times(spec);
    const bool exact = spec.reference.kind == ReferenceSpec::Kind::exact;
    for (double beta : spec.betas)
        for (std::size_t M : mesh_list(spec)) {
            const AssembledProblem ap = assemble_problem(make_problem(spec.example, beta, M, spec.settings));
            std::optional<NumericReference> ref;
            if (!exact) ref.emplace(ap, spec.reference.N_ref, spec.settings.contour);
            for (std::size_t N : spec.Ns)
                for (double t : times) {
                    ErrorRow plain = base_row(spec, beta, N, M, t);
                    ErrorRow accel = base_row(spec, beta, N, M, t);
                    accel.n = spec.n_interp;
                    try {
                        const TimingResult tr = timing_compare(ap, N, spec.n_interp, t, spec.settings.contour);
                        plain.wall_ms = tr.t_plain_ms;
                        accel.wall_ms = tr.t_accel_ms;
                        accel.error = distance(ap, tr.plain, tr.accel);
                        if (exact) {
                            const auto sol = exact_solution(spec.example, beta, t, spec.settings.K);
                            plain.error = distance_to(ap, tr.plain, *sol);
                            accel.iar = iar(ap, tr.accel, *sol);
                        } else {
                            const RealVector& u = ref->at(t);
                            plain.error = distance(ap, u, tr.plain);
                            accel.iar = iar(ap, tr.accel, u);
                        }
                    } catch (const std::exception& e) {
                        record_failure(plain, e);
                        accel.failure = plain.failure;
                    }
                    report.rows.push_back(std::move(plain));
                    report.rows.push_back(std::move(accel));
                }
        }
}

}  // namespace

std::string ExampleSelector::name() const {
    switch (id) {
        case ExampleId::ex1_scalar: return "ex1_scalar";
        case ExampleId::ex2_vanishing: return "ex2_vanishing";
        case ExampleId::ex3_1d: return "ex3_1d:" + std::to_string(case_id);
        case ExampleId::ex4_2d: return "ex4_2d:" + std::to_string(case_id);
        case ExampleId::ex5_accel: return "ex5_accel:" + std::to_string(case_id);
    }
    return "unknown";
}

bool ExampleSelector::has_exact_solution() const {
    return id == ExampleId::ex1_scalar || id == ExampleId::ex2_vanishing;
}

std::size_t ExampleSelector::dimension() const {
    switch (id) {
        case ExampleId::ex1_scalar: return 0;
        case ExampleId::ex2_vanishing:
        case ExampleId::ex3_1d: return 1;
        case ExampleId::ex4_2d: return 2;
        case ExampleId::ex5_accel: return case_id == 2 ? 2 : 1;
    }
    return 0;
}

double ExampleSelector::default_time() const {
    switch (id) {
        case ExampleId::ex1_scalar: return 0.6;
        case ExampleId::ex2_vanishing: return 0.86;
        case ExampleId::ex3_1d: return 0.8;
        case ExampleId::ex4_2d: return 0.6;
        case ExampleId::ex5_accel: return 0.4;
    }
    return 0.6;
}

ExampleSelector ExampleSelector::parse(std::string_view text) {
    const std::string s = trim(text);
    const auto colon = s.find(':');
    const std::string head = s.substr(0, colon);
    ExampleSelector ex;
    const std::string prefix = head.substr(0, 3);
    if (prefix == "ex1") ex.id = ExampleId::ex1_scalar;
    else if (prefix == "ex2") ex.id = ExampleId::ex2_vanishing;
    else if (prefix == "ex3") ex.id = ExampleId::ex3_1d;
    else if (prefix == "ex4") ex.id = ExampleId::ex4_2d;
    else if (prefix == "ex5") ex.id = ExampleId::ex5_accel;
    else throw std::invalid_argument("unknown example '" + s + "'");
    if (colon != std::string::npos) {
        const std::string c = s.substr(colon + 1);
        int v = 0;
        const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (ec != std::errc{} || p != c.data() + c.size())
            throw std::invalid_argument("bad example case '" + c + "'");
        ex.case_id = v;
    }
    ex.validate();
    return ex;
}

void ExampleSelector::validate() const {
    const int max_case = (id == ExampleId::ex3_1d || id == ExampleId::ex4_2d) ? 3
                         : id == ExampleId::ex5_accel                        ? 2
                                                                             : 1;
    if (case_id < 1 || case_id > max_case)
        throw std::invalid_argument("example " + name() + ": case out of range");
}

Problem make_problem(const ExampleSelector& ex, double beta, std::size_t M, const BenchSettings& s) {
    ex.validate();
    Problem p;
    p.sym = {s.K, beta};
    p.t0 = s.contour.t0;
    p.lambda_ratio = s.contour.lambda_ratio;
    if (ex.dimension() > 0) {
        if (M < 2) throw std::invalid_argument("make_problem: need M >= 2");
        p.domain = make_domain(ex.dimension(), M);
    }
    switch (ex.id) {
        case ExampleId::ex1_scalar: {
            const double c = kEx1Slope;
            p.domain = ScalarDomain{1.0};
            p.u0 = InitialDataSpec::polynomial({1.0});
            p.spatial_factors = {constant(1.0)};
            p.f_hat.terms = {{0, TermKind::power, 1.0 + c * s.K, 0.0},
                             {0, TermKind::power, c / std::tgamma(2.0 - beta), 1.0 - beta},
                             {0, TermKind::power, c, 1.0}};
            break;
        }
        case ExampleId::ex2_vanishing: {
            p.u0 = InitialDataSpec::zero();
            p.spatial_factors = {{[](double x, double) { return x * (1.0 - x); }, {}}, constant(1.0)};
            const double frac = 3.0 * std::sqrt(kPi) * (2.5 - beta) / (4.0 * std::tgamma(3.5 - beta));
            p.f_hat.terms = {{0, TermKind::power, 1.5 * s.K, 0.5},
                             {0, TermKind::power, frac, 1.5 - beta},
                             {1, TermKind::power, 2.0, 1.5}};
            break;
        }
        case ExampleId::ex3_1d:
            p.u0 = ex3_data(ex.case_id);
            break;
        case ExampleId::ex4_2d:
            p.u0 = ex4_data(ex.case_id);
            if (ex.case_id == 3) {
                p.spatial_factors = {{[](double x, double y) {
                                          return std::sin(x) * (1.0 - x) * (1.0 - x) * y * (y - 1.0);
                                      },
                                      {}}};
                p.f_hat.terms = {{0, TermKind::pole, 3.0 * std::pow(kPi, 5), 1.5}};
            }
            break;
        case ExampleId::ex5_accel:
            p.u0 = ex.case_id == 2 ? ex4_data(2) : ex3_data(1);
            break;
    }
    return p;
}

std::optional<SpatialFunction> exact_solution(const ExampleSelector& ex, double, double t, double) {
    if (ex.id == ExampleId::ex1_scalar) return constant(1.0 + kEx1Slope * t);
    if (ex.id == ExampleId::ex2_vanishing) {
        const double a = std::pow(t, 1.5);
        return SpatialFunction{[a](double x, double) { return a * x * (1.0 - x); }, {}};
    }
    return std::nullopt;
}

ReferenceSpec ReferenceSpec::parse(std::string_view text) {
    const std::string s = trim(text);
    ReferenceSpec r;
    if (s == "exact") {
        r.kind = Kind::exact;
        return r;
    }
    if (s.rfind("numeric", 0) != 0) throw std::invalid_argument("unknown reference '" + s + "'");
    r.kind = Kind::numeric;
    if (s.size() > 7) {
        if (s[7] != ':') throw std::invalid_argument("unknown reference '" + s + "'");
        const std::string n = s.substr(8);
        const auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), r.N_ref);
        if (ec != std::errc{} || p != n.data() + n.size() || r.N_ref < 2)
            throw std::invalid_argument("bad reference node count '" + n + "'");
    }
    return r;
}

std::string ReferenceSpec::name() const {
    return kind == Kind::exact ? "exact" : "numeric:" + std::to_string(N_ref);
}

RealVector solve_plain(const AssembledProblem& ap, std::size_t N, double t, const ContourConfig& base) {
    return evaluate(solve_nodes(ap, make_quadrature(row_config(ap, N, base))), t);
}

double distance_to(const AssembledProblem& ap, std::span<const double> coeffs, const SpatialFunction& u) {
    if (const auto mesh = mesh_of(ap.domain)) return l2_error(*mesh, coeffs, u);
    if (coeffs.size() != 1) throw std::invalid_argument("distance_to: scalar problem expects one value");
    return std::fabs(coeffs[0] - u(0.0, 0.0));
}

double distance(const AssembledProblem& ap, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("distance: size mismatch");
    RealVector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    if (std::holds_alternative<ScalarDomain>(ap.domain)) return std::fabs(d[0]);
    return mass_norm(ap.ops, d);
}

double error_tau(const ExampleSelector& ex, const AssembledProblem& ap, std::size_t N,
                 const ReferenceSpec& ref, std::span<const double> times, const ContourConfig& base) {
    if (times.empty()) throw std::invalid_argument("error_tau: empty time list");
    const bool exact = ref.kind == ReferenceSpec::Kind::exact;
    if (exact && !ex.has_exact_solution())
        throw std::invalid_argument("error_tau: " + ex.name() + " has no exact solution");
    if (!exact && ref.N_ref <= N)
        throw std::invalid_argument("error_tau: numeric reference needs N_ref > N");
    const NodeSolutionSet ns = solve_nodes(ap, make_quadrature(row_config(ap, N, base)));
    std::optional<NumericReference> num;
    if (!exact) num.emplace(ap, ref.N_ref, base);
    double worst = 0.0;
    for (double t : times) {
        const RealVector u = evaluate(ns, t);
        const double e = exact ? distance_to(ap, u, *exact_solution(ex, ap.sym.beta, t, ap.sym.K))
                               : distance(ap, num->at(t), u);
        worst = std::max(worst, e);
    }
    return worst;
}

std::vector<double> window_grid(double t0, double lambda_ratio, double extra) {
    std::vector<double> ts;
    const double t1 = lambda_ratio * t0;
    for (int i = 0; i < 16; ++i) ts.push_back(t0 + (t1 - t0) * i / 15.0);
    if (std::find(ts.begin(), ts.end(), extra) == ts.end()) ts.push_back(extra);
    std::sort(ts.begin(), ts.end());
    return ts;
}

double convergence_order(double coarse_error, double fine_error) {
    if (!(coarse_error > 0.0 && fine_error > 0.0))
        throw std::domain_error("convergence_order: errors must be positive");
    return std::log2(coarse_error / fine_error);
}

std::vector<SpatialPoint> error_h(const ExampleSelector& ex, double beta, std::span<const std::size_t> Ms,
                                  std::size_t N, double t, const ReferenceSpec& ref,
                                  const BenchSettings& s) {
    if (ex.is_scalar()) throw std::invalid_argument("error_h: scalar example has no mesh");
    const bool exact = ref.kind == ReferenceSpec::Kind::exact;
    if (exact && !ex.has_exact_solution())
        throw std::invalid_argument("error_h: " + ex.name() + " has no exact solution");

    struct Solved {
        AssembledProblem ap;
        RealVector u;
    };
    std::map<std::size_t, Solved> cache;
    const auto solved = [&](std::size_t M) -> const Solved& {
        auto it = cache.find(M);
        if (it == cache.end()) {
            AssembledProblem ap = assemble_problem(make_problem(ex, beta, M, s));
            RealVector u = solve_plain(ap, N, t, s.contour);
            it = cache.emplace(M, Solved{std::move(ap), std::move(u)}).first;
        }
        return it->second;
    };

    std::vector<SpatialPoint> out;
    for (std::size_t M : Ms) {
        SpatialPoint pt;
        pt.M = M;
        const Solved& coarse = solved(M);
        if (exact) {
            pt.error = distance_to(coarse.ap, coarse.u, *exact_solution(ex, beta, t, s.K));
        } else {
            const Solved& fine = solved(2 * M);
            const Mesh coarse_mesh = *mesh_of(coarse.ap.domain);
            pt.error = distance(fine.ap, prolong(coarse_mesh, coarse.u), fine.u);
        }
        if (!out.empty() && out.back().M * 2 == M && out.back().error > 0.0 && pt.error > 0.0)
            pt.order = convergence_order(out.back().error, pt.error);
        out.push_back(pt);
        // only the meshes still needed for the next entry are kept
        std::erase_if(cache, [&](const auto& kv) { return kv.first < M; });
    }
    return out;
}

double iar(const AssembledProblem& ap, std::span<const double> accelerated, const SpatialFunction& exact) {
    const RealVector zero(accelerated.size(), 0.0);
    const double norm = distance_to(ap, zero, exact);
    if (norm < 1e-14) throw std::domain_error("iar: reference solution norm below 1e-14");
    return distance_to(ap, accelerated, exact) / norm;
}

double iar(const AssembledProblem& ap, std::span<const double> accelerated, std::span<const double> surrogate) {
    const RealVector zero(surrogate.size(), 0.0);
    const double norm = distance(ap, surrogate, zero);
    if (norm < 1e-14) throw std::domain_error("iar: reference solution norm below 1e-14");
    return distance(ap, accelerated, surrogate) / norm;
}

TimingResult timing_compare(const AssembledProblem& ap, std::size_t N, std::size_t n, double t,
                            const ContourConfig& base) {
    const ContourQuadrature quad = make_quadrature(row_config(ap, N, base));
    TimingResult r;
    std::vector<double> plain_ms, accel_ms;
    for (int rep = 0; rep < 4; ++rep) {
        auto start = std::chrono::steady_clock::now();
        RealVector up = evaluate(solve_nodes(ap, quad), t);
        const double tp = ms_since(start);
        start = std::chrono::steady_clock::now();
        RealVector ua = solve_accelerated(ap, quad, n, t);
        const double ta = ms_since(start);
        if (rep == 0) {
            r.plain = std::move(up);
            r.accel = std::move(ua);
            continue;  // warm-up
        }
        plain_ms.push_back(tp);
        accel_ms.push_back(ta);
    }
    r.t_plain_ms = median3(plain_ms);
    r.t_accel_ms = median3(accel_ms);
    r.speedup = r.t_accel_ms > 0.0 ? r.t_plain_ms / r.t_accel_ms : 0.0;
    return r;
}

void ExperimentSpec::validate() const {
    example.validate();
    if (reference.kind == ReferenceSpec::Kind::exact && !example.has_exact_solution())
        throw std::invalid_argument("exact reference is only available for ex1 and ex2");
    if (reference.kind == ReferenceSpec::Kind::numeric && sweep != SweepKind::space)
        for (std::size_t N : Ns)
            if (N >= reference.N_ref)
                throw std::invalid_argument("numeric reference needs N_ref > every N");
    if (!example.is_scalar())
        for (std::size_t M : Ms)
            if (M < 2) throw std::invalid_argument("mesh sizes must be at least 2");
    if (sweep == SweepKind::space && example.is_scalar())
        throw std::invalid_argument("space sweep needs a spatial example");
    if (sweep == SweepKind::accel)
        for (std::size_t N : Ns)
            if (n_interp < 2 || n_interp >= N)
                throw std::invalid_argument("accel sweep needs 2 <= n < N");
    for (double b : betas)
        if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
}

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4E", v);
    return buf;
}

void write_csv(const ErrorReport& report, std::ostream& os) {
    const auto opt = [](const std::optional<double>& v) { return v ? format_sci(*v) : std::string{}; };
    os << kCsvHeader << '\n';
    for (const auto& r : report.rows) {
        os << r.example << ',' << format_sci(r.beta) << ',' << r.N << ',';
        if (r.M) os << *r.M;
        os << ',';
        if (r.n) os << *r.n;
        os << ',' << format_sci(r.t) << ',' << opt(r.error) << ',' << opt(r.order) << ',' << opt(r.iar)
           << ',' << opt(r.wall_ms) << '\n';
    }
}

ErrorReport run(const ExperimentSpec& spec) {
    spec.validate();
    ErrorReport report;
    switch (spec.sweep) {
        case SweepKind::solve: run_solve(spec, report); break;
        case SweepKind::time: run_time(spec, report); break;
        case SweepKind::space: run_space(spec, report); break;
        case SweepKind::accel: run_accel(spec, report); break;
    }
    if (!spec.output_path.empty()) {
        std::ofstream f(spec.output_path);
        if (!f) throw std::runtime_error("cannot open " + spec.output_path);
        write_csv(report, f);
    }
    return report;
}

std::size_t ml_eval_stream(std::istream& in, std::ostream& out) {
    std::size_t failures = 0;
    std::string line;
    while (std::getline(in, line)) {
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::istringstream ls(s);
        MLQuery q;
        if (!(ls >> q.alpha_p >> q.beta_p >> q.gamma >> q.z1 >> q.z2)) {
            out << "error: expected 'alpha beta gamma z1 z2'\n";
            ++failures;
            continue;
        }
        try {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.16E", ml_biv(q));
            out << buf << '\n';
        } catch (const std::exception& e) {
            out << "error: " << e.what() << '\n';
            ++failures;
        }
    }
    return failures;
}

}  // namespace cimfem
