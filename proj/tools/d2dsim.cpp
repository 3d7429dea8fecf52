// d2dsim: seeded Monte Carlo sweeps for cache-enabled D2D networks.
//
//   d2dsim run <config>            simulate, write results under output_dir
//   d2dsim bounds <config>         print the theoretical exponent table
//   d2dsim fit <results.csv>       refit slopes from a results file
//   d2dsim plotdata <results.csv>  write two-column plot files
//
// Exit codes: 0 ok, 1 usage, 2 config error, 3 runtime failure.
// D2DSIM_WORKERS sets the worker count.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "d2d/analysis.hpp"
#include "d2d/experiment.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::vector<d2d::TrialRecord> load_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return d2d::read_results_csv(in);
}

int cmd_run(const std::string& config) {
    const auto spec = d2d::load_config(config);
    const unsigned workers = d2d::workers_from_env();
    const auto report = d2d::run_experiment(spec, workers);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "regime " << d2d::to_string(report.bounds.regime) << ", "
              << report.records.size() << " trials on " << workers << " workers -> "
              << spec.output_dir.string() << '\n';
    d2d::write_fit_summary(std::cout, report.summaries);
    return 0;
}

int cmd_bounds(const std::string& config) {
    const auto spec = d2d::load_config(config);
    const auto& c = spec.network;
    d2d::write_bounds_csv(std::cout, d2d::theoretical_bounds(c.alpha, c.beta, c.a1, c.a2, spec.gamma));
    return 0;
}

int cmd_fit(const std::string& results) {
    const auto summaries = d2d::summarize(load_results(results), std::nullopt);
    d2d::write_fit_summary(std::cout, summaries);
    std::cout << '\n';
    d2d::write_outage_table(std::cout, summaries);
    return 0;
}

int cmd_plotdata(const std::string& results, const std::string& out_dir,
                 const std::string& config) {
    std::optional<d2d::BoundSet> bounds;
    if (!config.empty()) {
        const auto spec = d2d::load_config(config);
        const auto& c = spec.network;
        bounds = d2d::theoretical_bounds(c.alpha, c.beta, c.a1, c.a2, spec.gamma);
    }
    for (const auto& w : d2d::emit_plot_data(load_results(results), out_dir, bounds))
        std::cerr << "warning: " << w << '\n';
    std::cout << "plot data written to " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scaling-law simulator for cache-enabled D2D networks"};
    app.require_subcommand(1);

    std::string config, results, out_dir = "plot", bounds_config;
    auto* run = app.add_subcommand("run", "Run the sweep described by a config file");
    run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    auto* bounds = app.add_subcommand("bounds", "Print theoretical throughput exponents");
    bounds->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
    auto* fit = app.add_subcommand("fit", "Fit scaling slopes from a results CSV");
    fit->add_option("results", results, "results.csv")->required()->check(CLI::ExistingFile);
    auto* plot = app.add_subcommand("plotdata", "Write plot-ready data from a results CSV");
    plot->add_option("results", results, "results.csv")->required()->check(CLI::ExistingFile);
    plot->add_option("-o,--out", out_dir, "Output directory");
    plot->add_option("--config", bounds_config, "Config used for reference slopes")
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*run) return cmd_run(config);
        if (*bounds) return cmd_bounds(config);
        if (*fit) return cmd_fit(results);
        if (*plot) return cmd_plotdata(results, out_dir, bounds_config);
    } catch (const d2d::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsage;
}
