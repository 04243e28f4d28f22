#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <doctest.h>

#include "cimfem/bench.hpp"
#include "cimfem/mlf.hpp"

using namespace cimfem;

namespace {

std::string csv_of(const ErrorReport& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

/// Drops the last CSV column (wall time) from every line.
std::string without_wall(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
    return out;
}

}  // namespace

TEST_CASE("example selectors") {
    CHECK(ExampleSelector::parse("ex1").name() == "ex1_scalar");
    CHECK(ExampleSelector::parse("ex3_1d:2").name() == "ex3_1d:2");
    CHECK(ExampleSelector::parse("ex4:3").name() == "ex4_2d:3");
    CHECK(ExampleSelector::parse("ex5:2").dimension() == 2);
    CHECK(ExampleSelector::parse("ex5:1").dimension() == 1);
    CHECK(ExampleSelector::parse("ex2").has_exact_solution());
    CHECK_FALSE(ExampleSelector::parse("ex3:1").has_exact_solution());
    CHECK_THROWS_AS((void)ExampleSelector::parse("ex7"), std::invalid_argument);
    CHECK_THROWS_AS((void)ExampleSelector::parse("ex3:4"), std::invalid_argument);
    CHECK(ReferenceSpec::parse("numeric:150").N_ref == 150);
    CHECK(ReferenceSpec::parse("exact").kind == ReferenceSpec::Kind::exact);
    CHECK_THROWS_AS((void)ReferenceSpec::parse("fancy"), std::invalid_argument);
}

TEST_CASE("number format matches the tables") {
    CHECK(format_sci(9.85e-5) == "9.8500E-05");
    CHECK(format_sci(0.5) == "5.0000E-01");
    CHECK(format_sci(-1234.5) == "-1.2345E+03");
}

TEST_CASE("empty sweeps write only the header") {
    ExperimentSpec spec;
    spec.example = ExampleSelector::parse("ex1");
    spec.Ns.clear();
    spec.reference = ReferenceSpec::parse("exact");
    const ErrorReport r = run(spec);
    CHECK(r.rows.empty());
    CHECK(csv_of(r) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("scalar sweep rows, ordering and determinism") {
    ExperimentSpec spec;
    spec.example = ExampleSelector::parse("ex1");
    spec.sweep = SweepKind::time;
    spec.betas = {0.25, 0.5, 0.75};
    spec.Ns = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    spec.reference = ReferenceSpec::parse("exact");
    const ErrorReport r = run(spec);
    REQUIRE(r.rows.size() == 30);
    CHECK(r.rows[0].beta == 0.25);
    CHECK(r.rows[10].beta == 0.5);
    CHECK(r.rows[29].N == 100);
    for (const auto& row : r.rows) {
        CHECK(row.failure.empty());
        CHECK_FALSE(row.M.has_value());
        CHECK(row.t == 0.6);
    }
    // spectral decay down to a round-off plateau
    for (std::size_t b = 0; b < 3; ++b) {
        CHECK(*r.rows[10 * b + 9].error <= 1e-12);
        CHECK(*r.rows[10 * b + 1].error > *r.rows[10 * b + 5].error);
    }
    CHECK(without_wall(csv_of(r)) == without_wall(csv_of(run(spec))));

    const std::string first_row = csv_of(r).substr(kCsvHeader.size() + 1);
    CHECK(first_row.rfind("ex1_scalar,2.5000E-01,10,,,6.0000E-01,", 0) == 0);
}

TEST_CASE("failed rows are recorded and the sweep continues") {
    ExperimentSpec spec;
    spec.example = ExampleSelector::parse("ex1");
    spec.Ns = {40};
    spec.times = {0.6, 1e4};  // the second time overflows the contour exponential
    spec.reference = ReferenceSpec::parse("exact");
    const ErrorReport r = run(spec);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].failure.empty());
    CHECK_FALSE(r.rows[1].failure.empty());
    CHECK_FALSE(r.rows[1].error.has_value());
}

TEST_CASE("spec validation") {
    ExperimentSpec spec;
    spec.example = ExampleSelector::parse("ex3:1");
    spec.reference = ReferenceSpec::parse("exact");
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.reference = ReferenceSpec::parse("numeric:50");
    spec.Ns = {60};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.Ns = {40};
    spec.betas = {1.2};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("vanishing-data example against its exact solution") {
    const ExampleSelector ex = ExampleSelector::parse("ex2");
    const auto u = exact_solution(ex, 0.5, 0.86);
    REQUIRE(u.has_value());
    CHECK((*u)(0.5) == doctest::Approx(std::pow(0.86, 1.5) * 0.25));
    const std::vector<std::size_t> Ms{4, 8, 16, 32};
    const auto pts = error_h(ex, 0.5, Ms, 60, 0.86, ReferenceSpec::parse("exact"));
    REQUIRE(pts.size() == 4);
    CHECK_FALSE(pts[0].order.has_value());
    for (std::size_t k = 1; k < pts.size(); ++k) {
        REQUIRE(pts[k].order.has_value());
        CHECK(*pts[k].order == doctest::Approx(2.0).epsilon(0.05));
    }
    CHECK(convergence_order(4.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("window grid") {
    const auto g = window_grid(0.1, 10.0, 0.6);
    CHECK(g.size() == 17);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(window_grid(0.1, 10.0, 0.1).size() == 16);
}

TEST_CASE("interpolation approximation rate") {
    const ExampleSelector ex = ExampleSelector::parse("ex5:1");
    const AssembledProblem ap = assemble_problem(make_problem(ex, 0.5, 64));
    const RealVector u(ap.dof_count(), 1.0);
    RealVector v = u;
    v[3] += 0.5;
    CHECK(iar(ap, u, u) == 0.0);
    CHECK(iar(ap, v, u) > 0.0);
    CHECK_THROWS_AS((void)iar(ap, u, RealVector(ap.dof_count(), 0.0)), std::domain_error);

    const TimingResult tr = timing_compare(ap, 40, 10, 0.4);
    CHECK(tr.t_plain_ms > 0.0);
    CHECK(tr.speedup == doctest::Approx(tr.t_plain_ms / tr.t_accel_ms));
    CHECK(tr.plain.size() == ap.dof_count());
}

TEST_CASE("ml-eval stream") {
    std::istringstream in("# comment\n0.5 1 1 0 0\n\n0.5 1 1 -1 -2\nbad line\n");
    std::ostringstream out;
    CHECK(ml_eval_stream(in, out) == 1);
    std::istringstream lines(out.str());
    std::string l1, l2, l3;
    std::getline(lines, l1);
    std::getline(lines, l2);
    std::getline(lines, l3);
    CHECK(std::stod(l1) == 1.0);
    CHECK(std::stod(l2) == doctest::Approx(ml_biv({0.5, 1.0, 1.0, -1.0, -2.0})));
    CHECK(l3.rfind("error:", 0) == 0);
}
