#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fran/network_params.hpp"
#include "fran/realization.hpp"
#include "fran/simcore.hpp"

namespace fran::harness {

enum class Metric { Rate, Coverage, ModeShare };

const char* to_string(Metric m) noexcept;

struct ExperimentSpec {
    std::string id;
    NetworkParams base;
    /// Config key of the swept parameter; values are in that key's unit.
    std::string swept_parameter;
    std::vector<double> sweep_values;
    /// Optional second parameter giving one curve per value.
    std::string series_parameter;
    std::vector<double> series_values;
    Metric metric = Metric::Rate;
    std::vector<sim::Mode> modes{sim::Mode::D2D, sim::Mode::NearestFap, sim::Mode::Coordination};
    bool analytic = true;
    bool monte_carlo = true;
    /// 0 picks 1e5, or 1e4 when coordination is the only mode.
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::string out_csv;
    std::string out_svg;
    sim::SimulationOptions simulation;

    std::size_t effective_trials() const noexcept;
    /// Throws ConfigError on an invalid combination.
    void validate() const;

    bool operator==(const ExperimentSpec& o) const;
};

struct ResultRow {
    double sweep_value = 0.0;
    sim::Mode mode = sim::Mode::D2D;
    std::optional<double> series_value;
    bool monte_carlo = false;
    std::optional<double> mean;
    std::optional<double> ci95_half_width;
    std::size_t trials = 0;
    std::optional<double> wall_time_s;
    std::string status = "ok";
    bool non_convergence = false;
};

struct ResultTable {
    std::string experiment_id;
    std::string swept_parameter;
    std::string series_parameter;
    Metric metric = Metric::Rate;
    std::vector<ResultRow> rows;
};

/// CSV mode label: the mode name, plus ";key=value" for a series.
std::string mode_label(const ResultRow& row, const std::string& series_parameter);

struct RunOptions {
    bool record_wall_time = false;
};

/// Evaluates every (series, sweep, mode, evaluator) cell. Monte Carlo cells
/// sharing lambda_u, p and the exponents run as one batch with the master
/// seed, so a cell's value does not depend on what else is in the spec.
/// Failures are recorded in the row's status.
ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Parameters for one cell.
NetworkParams params_for(const ExperimentSpec& spec, double sweep_value, std::optional<double> series_value);

/// fig1, fig2 or fig3; ConfigError naming the valid presets otherwise.
ExperimentSpec figure_preset(const std::string& name);

/// Analytic vs Monte Carlo comparison per cell.
std::string deviation_report(const ResultTable& table);

}  // namespace fran::harness
