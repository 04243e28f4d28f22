// Command-line front end for the benchmark harness.
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cimfem/bench.hpp"
#include "cimfem/config.hpp"

namespace {

using cimfem::KeyValueConfig;

// Every flag is read as text so the config file and the command line share one parser.
const char* const kKeys[] = {"example", "beta",    "K",      "Lambda", "t0",        "alpha", "delta-prime",
                             "N",       "M",       "n-interp", "times", "reference", "out",   "threads"};

cimfem::ExperimentSpec build_spec(const KeyValueConfig& kv, cimfem::SweepKind sweep) {
    const auto get = [&](const std::string& k, const std::string& fallback) {
        const auto it = kv.find(k);
        return it == kv.end() ? fallback : it->second;
    };
    cimfem::ExperimentSpec spec;
    spec.sweep = sweep;
    spec.example = cimfem::ExampleSelector::parse(get("example", "ex1"));
    spec.betas = cimfem::parse_double_list(get("beta", "0.5"));
    spec.Ns = cimfem::parse_count_list(get("N", "100"));
    spec.Ms = cimfem::parse_count_list(get("M", "64"));
    spec.n_interp = cimfem::parse_count_list(get("n-interp", "10")).at(0);
    spec.reference = cimfem::ReferenceSpec::parse(
        get("reference", spec.example.has_exact_solution() ? "exact" : "numeric:200"));
    spec.output_path = get("out", "");

    auto& c = spec.settings.contour;
    spec.settings.K = std::stod(get("K", "1"));
    c.lambda_ratio = std::stod(get("Lambda", "10"));
    c.t0 = std::stod(get("t0", "0.1"));
    c.alpha = std::stod(get("alpha", "0.6767"));
    c.delta_prime = std::stod(get("delta-prime", "0.1023"));

    const std::string times = get("times", "");
    if (times == "window")
        spec.times = cimfem::window_grid(c.t0, c.lambda_ratio, spec.example.default_time());
    else if (!times.empty())
        spec.times = cimfem::parse_double_list(times);
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contour-integral FEM solver for time-fractional normal-subdiffusion problems"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "flat key = value file; flags override it")->check(CLI::ExistingFile);

    std::map<std::string, std::string> flag_values;
    const std::map<std::string, std::string> help = {
        {"example", "ex1 | ex2 | ex3:<case> | ex4:<case> | ex5:<case>"},
        {"beta", "fractional order(s), comma list"},
        {"K", "diffusive weight"},
        {"Lambda", "window ratio t1/t0"},
        {"t0", "window start"},
        {"alpha", "hyperbola tilt"},
        {"delta-prime", "asymptote dip angle"},
        {"N", "quadrature node counts, e.g. 10:100:10"},
        {"M", "mesh intervals per side, e.g. 2^5,2^6"},
        {"n-interp", "Chebyshev interpolation order"},
        {"times", "evaluation times, or 'window'"},
        {"reference", "exact | numeric[:N_ref]"},
        {"out", "CSV output path (stdout when empty)"},
        {"threads", "worker threads, 0 = hardware"},
    };
    for (const char* key : kKeys)
        app.add_option(std::string("--") + key, flag_values[key], help.at(key));

    auto* solve = app.add_subcommand("solve", "solve one configuration and report its error");
    auto* sweep_time = app.add_subcommand("sweep-time", "temporal error over the N list");
    auto* sweep_space = app.add_subcommand("sweep-space", "spatial error and order over the M list");
    auto* accel = app.add_subcommand("accel-compare", "plain versus interpolated node solves");
    auto* ml = app.add_subcommand("ml-eval", "bivariate Mittag-Leffler values, one query per line");
    std::string ml_input;
    ml->add_option("--input", ml_input, "query file (stdin when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ml->parsed()) {
            if (ml_input.empty()) return cimfem::ml_eval_stream(std::cin, std::cout) == 0 ? 0 : 1;
            std::ifstream in(ml_input);
            if (!in) throw std::runtime_error("cannot open " + ml_input);
            return cimfem::ml_eval_stream(in, std::cout) == 0 ? 0 : 1;
        }

        KeyValueConfig kv;
        if (!config_path.empty()) kv = cimfem::load_config(config_path);
        for (const auto& [key, value] : flag_values)
            if (app.get_option("--" + key)->count() > 0) kv[key] = value;
        for (const auto& [key, value] : kv)
            if (!help.contains(key)) throw std::invalid_argument("unknown setting '" + key + "'");

        if (kv.contains("threads")) cimfem::set_worker_threads(cimfem::parse_count_list(kv["threads"]).at(0));

        cimfem::SweepKind kind = cimfem::SweepKind::solve;
        if (sweep_time->parsed()) kind = cimfem::SweepKind::time;
        if (sweep_space->parsed()) kind = cimfem::SweepKind::space;
        if (accel->parsed()) kind = cimfem::SweepKind::accel;
        (void)solve;

        const cimfem::ExperimentSpec spec = build_spec(kv, kind);
        const cimfem::ErrorReport report = cimfem::run(spec);
        if (spec.output_path.empty()) cimfem::write_csv(report, std::cout);

        std::size_t failed = 0;
        for (const auto& r : report.rows) failed += r.failure.empty() ? 0 : 1;
        return failed == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
