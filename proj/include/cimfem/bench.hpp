#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cimfem/cim.hpp"
#include "cimfem/contour.hpp"

namespace cimfem {

enum class ExampleId { ex1_scalar, ex2_vanishing, ex3_1d, ex4_2d, ex5_accel };

/// Benchmark problem: ex3 and ex4 take case 1..3, ex5 takes case 1 (1-D) or 2 (2-D).
struct ExampleSelector {
    ExampleId id = ExampleId::ex1_scalar;
    int case_id = 1;

    [[nodiscard]] std::string name() const;
    [[nodiscard]] bool has_exact_solution() const;
    [[nodiscard]] bool is_scalar() const { return id == ExampleId::ex1_scalar; }
    [[nodiscard]] std::size_t dimension() const;
    [[nodiscard]] double default_time() const;

    /// Accepts the names produced by name(), e.g. "ex1", "ex3_1d:2", "ex4:3", "ex5:2".
    static ExampleSelector parse(std::string_view text);
    void validate() const;
};

/// Window and contour settings shared by every row of a sweep.
struct BenchSettings {
    double K = 1.0;
    ContourConfig contour;  ///< alpha, delta', Lambda and t0; N is set per row
};

[[nodiscard]] Problem make_problem(const ExampleSelector& ex, double beta, std::size_t M,
                                   const BenchSettings& s = {});

/// Closed-form solution at time t (ex1 and ex2 only).
[[nodiscard]] std::optional<SpatialFunction> exact_solution(const ExampleSelector& ex, double beta,
                                                            double t, double K = 1.0);

struct ReferenceSpec {
    enum class Kind { exact, numeric };
    Kind kind = Kind::numeric;
    std::size_t N_ref = 200;

    static ReferenceSpec parse(std::string_view text);  ///< "exact", "numeric", "numeric:200"
    [[nodiscard]] std::string name() const;
};

/// Plain CIM-FEM solution u_h^N(t).
[[nodiscard]] RealVector solve_plain(const AssembledProblem& ap, std::size_t N, double t,
                                     const ContourConfig& base = {});

/// L2 distance of a coefficient vector from a function (absolute value for a scalar domain).
[[nodiscard]] double distance_to(const AssembledProblem& ap, std::span<const double> coeffs,
                                 const SpatialFunction& u);
/// Mass-norm distance of two coefficient vectors on the same mesh.
[[nodiscard]] double distance(const AssembledProblem& ap, std::span<const double> a,
                              std::span<const double> b);

/// max over times of ||reference(t) - u_h^N(t)||; a numeric reference uses N_ref at the same h.
[[nodiscard]] double error_tau(const ExampleSelector& ex, const AssembledProblem& ap, std::size_t N,
                               const ReferenceSpec& ref, std::span<const double> times,
                               const ContourConfig& base = {});

/// Sixteen equispaced points of [t0, Lambda t0] plus the extra time, sorted.
[[nodiscard]] std::vector<double> window_grid(double t0, double lambda_ratio, double extra);

struct SpatialPoint {
    std::size_t M = 0;
    double error = 0.0;
    std::optional<double> order;
};

/// Spatial error at each M: against the exact solution, or ||u_h - u_{h/2}|| in the fine mass norm.
/// Orders are reported between consecutive entries whose M doubles.
[[nodiscard]] std::vector<SpatialPoint> error_h(const ExampleSelector& ex, double beta,
                                                std::span<const std::size_t> Ms, std::size_t N,
                                                double t, const ReferenceSpec& ref,
                                                const BenchSettings& s = {});

[[nodiscard]] double convergence_order(double coarse_error, double fine_error);

/// ||u - u_I|| / ||u|| against an exact solution or a surrogate coefficient vector.
/// Throws std::domain_error when ||u|| < 1e-14.
[[nodiscard]] double iar(const AssembledProblem& ap, std::span<const double> accelerated,
                         const SpatialFunction& exact);
[[nodiscard]] double iar(const AssembledProblem& ap, std::span<const double> accelerated,
                         std::span<const double> surrogate);

struct TimingResult {
    double t_plain_ms = 0.0;
    double t_accel_ms = 0.0;
    double speedup = 0.0;
    RealVector plain;
    RealVector accel;
};

/// Median of three timed runs after one warm-up, for solve_nodes + evaluate
/// versus solve_accelerated on an assembled problem.
[[nodiscard]] TimingResult timing_compare(const AssembledProblem& ap, std::size_t N, std::size_t n,
                                          double t, const ContourConfig& base = {});

enum class SweepKind { solve, time, space, accel };

struct ExperimentSpec {
    ExampleSelector example;
    SweepKind sweep = SweepKind::time;
    std::vector<double> betas{0.5};
    std::vector<std::size_t> Ns{100};
    std::vector<std::size_t> Ms{64};  ///< ignored for the scalar example
    std::size_t n_interp = 10;
    std::vector<double> times;  ///< empty selects the example's default time
    ReferenceSpec reference;
    BenchSettings settings;
    std::string output_path;  ///< empty: no file is written

    void validate() const;
};

struct ErrorRow {
    std::string example;
    double beta = 0.0;
    std::size_t N = 0;
    std::optional<std::size_t> M;
    std::optional<std::size_t> n;
    double t = 0.0;
    std::optional<double> error;
    std::optional<double> order;
    std::optional<double> iar;
    std::optional<double> wall_ms;
    std::string failure;  ///< empty on success; not part of the CSV
};

struct ErrorReport {
    std::vector<ErrorRow> rows;
};

inline constexpr std::string_view kCsvHeader = "example,beta,N,M,n,t,error,order,iar,wall_ms";

/// Scientific notation with four fractional digits, e.g. 9.8500E-05.
[[nodiscard]] std::string format_sci(double v);
void write_csv(const ErrorReport& report, std::ostream& os);

/// Executes the sweep; per-row failures are recorded and the run continues.
/// Writes the CSV to spec.output_path when it is set.
[[nodiscard]] ErrorReport run(const ExperimentSpec& spec);

/// Reads "alpha' beta' gamma z1 z2" per line and prints one value per line.
/// Blank lines and lines starting with '#' are skipped. Returns the number of failed lines.
std::size_t ml_eval_stream(std::istream& in, std::ostream& out);

}  // namespace cimfem
