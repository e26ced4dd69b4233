#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "fran/config.hpp"
#include "fran/errors.hpp"
#include "fran/experiment.hpp"
#include "fran/report.hpp"

namespace {

using namespace fran;
using namespace fran::harness;

enum ExitCode { kOk = 0, kConfigError = 1, kNonConvergence = 2, kIoError = 3 };

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::string out_csv;
    std::string out_svg;
    std::optional<double> window_radius;
    std::string placement;
    std::optional<unsigned> threads;
    bool wall_time = false;
};

void add_flags(CLI::App& cmd, Flags& f, bool with_config) {
    if (with_config) cmd.add_option("--config", f.config, "experiment config file")->required();
    cmd.add_option("--seed", f.seed, "master seed (u64)");
    cmd.add_option("--trials", f.trials, "Monte Carlo trials per point")->check(CLI::Range(100ul, 1000000000ul));
    cmd.add_option("--out-csv", f.out_csv, "CSV output path (default: stdout)");
    cmd.add_option("--out-svg", f.out_svg, "SVG output path");
    cmd.add_option("--window-radius", f.window_radius, "simulation window radius in m")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--placement", f.placement, "cache placement")->check(CLI::IsMember({"thinning", "identical"}));
    cmd.add_option("--threads", f.threads, "worker threads (0: all cores)");
    cmd.add_flag("--wall-time", f.wall_time, "fill the wall_time_s column");
}

void apply(ExperimentSpec& spec, const Flags& f) {
    if (f.seed) spec.seed = *f.seed;
    if (f.trials) spec.trials = *f.trials;
    if (!f.out_csv.empty()) spec.out_csv = f.out_csv;
    if (!f.out_svg.empty()) spec.out_svg = f.out_svg;
    if (f.window_radius) spec.simulation.window_radius = *f.window_radius;
    if (f.placement == "identical") spec.simulation.placement = sim::Placement::IdenticalCache;
    if (f.placement == "thinning") spec.simulation.placement = sim::Placement::IndependentThinning;
    if (f.threads) spec.simulation.threads = *f.threads;
    spec.validate();
}

int run(ExperimentSpec spec, const Flags& flags, bool report) {
    apply(spec, flags);
    const ResultTable table = run_experiment(spec, {flags.wall_time});
    if (spec.out_csv.empty()) {
        std::cout << to_csv(table);
    } else {
        emit_csv(table, spec.out_csv);
    }
    if (!spec.out_svg.empty()) emit_svg(table, spec.out_svg);
    if (report) (spec.out_csv.empty() ? std::cerr : std::cout) << deviation_report(table);
    for (const auto& row : table.rows) {
        if (row.non_convergence) {
            std::cerr << "non-convergence at " << row.sweep_value << " (" << mode_label(row, table.series_parameter)
                      << "): " << row.status << "\n";
            return kNonConvergence;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"F-RAN access-mode analysis and Monte Carlo simulation"};
    app.require_subcommand(1);
    Flags flags;
    std::string figure;

    auto* analytic = app.add_subcommand("analytic", "closed forms and quadrature only");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo only");
    auto* compare = app.add_subcommand("compare", "both evaluators plus a deviation report");
    auto* fig = app.add_subcommand("figure", "reproduce a figure sweep (fig1, fig2, fig3)");
    for (auto* cmd : {analytic, simulate, compare}) add_flags(*cmd, flags, true);
    add_flags(*fig, flags, false);
    fig->add_option("name", figure, "fig1, fig2 or fig3")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (fig->parsed()) {
            return run(figure_preset(figure), flags, true);
        }
        ExperimentSpec spec = parse_config(flags.config);
        spec.analytic = !simulate->parsed();
        spec.monte_carlo = !analytic->parsed();
        return run(spec, flags, compare->parsed());
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIoError;
    } catch (const ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}
