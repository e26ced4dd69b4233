#include "fran/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "fran/analytic.hpp"
#include "fran/config.hpp"
#include "fran/errors.hpp"
#include "fran/estimators.hpp"

namespace fran::harness {

namespace {

using sim::Mode;

bool strictly_monotone(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    const bool up = v[1] > v[0];
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (up ? !(v[i] > v[i - 1]) : !(v[i] < v[i - 1])) return false;
    }
    return true;
}

double analytic_value(Mode mode, Metric metric, const NetworkParams& p) {
    switch (metric) {
        case Metric::Coverage:
            if (mode == Mode::D2D) return analytic::d2d_coverage(p);
            if (mode == Mode::NearestFap) return analytic::fap_coverage(p);
            throw DomainError("coverage is not defined for coordination mode");
        case Metric::Rate:
            if (mode == Mode::D2D) return analytic::d2d_rate(p);
            if (mode == Mode::NearestFap) return analytic::fap_rate(p);
            return analytic::coord_rate(p);
        case Metric::ModeShare:
            if (mode == Mode::D2D) return analytic::d2d_mode_probability(p) * analytic::d2d_coverage(p);
            if (mode == Mode::NearestFap) return analytic::fap_mode_probability(p) * analytic::fap_coverage(p);
            return analytic::coord_mode_probability(p);
    }
    return 0.0;
}

void fail_row(ResultRow& row, const std::exception& e) {
    row.mean.reset();
    row.ci95_half_width.reset();
    if (dynamic_cast<const ConvergenceError*>(&e)) {
        row.status = std::string("non_convergence: ") + e.what();
        row.non_convergence = true;
    } else {
        row.status = std::string("error: ") + e.what();
    }
}

sim::Workload workload_for(Metric metric, const std::vector<Mode>& modes) {
    auto has = [&](Mode m) { return std::find(modes.begin(), modes.end(), m) != modes.end(); };
    sim::Workload w{false, false, false, false};
    switch (metric) {
        case Metric::Coverage:
            w.d2d_link = has(Mode::D2D);
            w.fap_link = has(Mode::NearestFap);
            break;
        case Metric::Rate:
            // the F-AP and cluster eligibility factors reuse the D2D and F-AP link observables
            w.d2d_link = true;
            w.fap_link = has(Mode::NearestFap) || has(Mode::Coordination);
            w.cluster = has(Mode::Coordination);
            break;
        case Metric::ModeShare:
            w.mode_selection = true;
            break;
    }
    return w;
}

void fill_monte_carlo(ResultRow& row, const sim::Moments& m, Metric metric) {
    switch (metric) {
        case Metric::Coverage: {
            const auto e = sim::coverage_from(m, row.mode);
            row.mean = e.mean;
            row.ci95_half_width = e.half_width_95;
            break;
        }
        case Metric::Rate: {
            const auto r = sim::rate_from(m, row.mode);
            if (!r.estimate) {
                row.status = "no_passing_samples: " + r.diagnostic;
                return;
            }
            row.mean = r.estimate->mean;
            row.ci95_half_width = r.estimate->half_width_95;
            break;
        }
        case Metric::ModeShare: {
            const auto s = sim::mode_shares_from(m).share[static_cast<std::size_t>(row.mode)];
            row.mean = s.mean;
            row.ci95_half_width = s.half_width_95;
            break;
        }
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

const char* to_string(Metric m) noexcept {
    switch (m) {
        case Metric::Rate: return "rate";
        case Metric::Coverage: return "coverage";
        case Metric::ModeShare: return "mode_share";
    }
    return "?";
}

std::size_t ExperimentSpec::effective_trials() const noexcept {
    if (trials) return trials;
    const bool coordination_only = modes.size() == 1 && modes[0] == Mode::Coordination;
    return coordination_only ? 10000 : 100000;
}

void ExperimentSpec::validate() const {
    if (id.empty()) throw ConfigError("experiment id must not be empty", "id");
    if (!find_parameter(swept_parameter)) {
        throw ConfigError("'" + swept_parameter + "' is not a parameter key", "swept_parameter");
    }
    if (sweep_values.empty()) throw ConfigError("sweep_values must not be empty", "sweep_values");
    if (!strictly_monotone(sweep_values)) throw ConfigError("sweep_values must be strictly monotone", "sweep_values");
    if (!series_parameter.empty()) {
        if (!find_parameter(series_parameter)) {
            throw ConfigError("'" + series_parameter + "' is not a parameter key", "series_parameter");
        }
        if (series_parameter == swept_parameter) {
            throw ConfigError("series_parameter must differ from swept_parameter", "series_parameter");
        }
        if (series_values.empty() || !strictly_monotone(series_values)) {
            throw ConfigError("series_values must be non-empty and strictly monotone", "series_values");
        }
    } else if (!series_values.empty()) {
        throw ConfigError("series_values needs series_parameter", "series_values");
    }
    if (modes.empty()) throw ConfigError("at least one mode is required", "modes");
    if (!analytic && !monte_carlo) throw ConfigError("at least one evaluator is required", "evaluators");
    if (trials != 0 && trials < 100) throw ConfigError("trials must be at least 100", "trials");
    if (!(simulation.window_radius > 0.0) || !std::isfinite(simulation.window_radius)) {
        throw ConfigError("window_radius_m must be positive", "window_radius_m");
    }
    try {
        base.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    // every cell must be a valid parameter set
    const std::vector<std::optional<double>> series =
        series_parameter.empty() ? std::vector<std::optional<double>>{std::nullopt}
                                 : std::vector<std::optional<double>>(series_values.begin(), series_values.end());
    for (const auto& s : series) {
        for (double x : sweep_values) {
            try {
                params_for(*this, x, s);
            } catch (const ConfigError& e) {
                throw ConfigError(e.what(), e.key() == series_parameter ? "series_values" : "sweep_values");
            }
        }
    }
}

bool ExperimentSpec::operator==(const ExperimentSpec& o) const {
    return id == o.id && base == o.base && swept_parameter == o.swept_parameter && sweep_values == o.sweep_values &&
           series_parameter == o.series_parameter && series_values == o.series_values && metric == o.metric &&
           modes == o.modes && analytic == o.analytic && monte_carlo == o.monte_carlo && trials == o.trials &&
           seed == o.seed && out_csv == o.out_csv && out_svg == o.out_svg &&
           simulation.window_radius == o.simulation.window_radius && simulation.placement == o.simulation.placement &&
           simulation.threads == o.simulation.threads;
}

std::string mode_label(const ResultRow& row, const std::string& series_parameter) {
    std::string label = sim::to_string(row.mode);
    if (row.series_value) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.12g", *row.series_value);
        label += ";" + series_parameter + "=" + buf;
    }
    return label;
}

NetworkParams params_for(const ExperimentSpec& spec, double sweep_value, std::optional<double> series_value) {
    NetworkParams p = spec.base;
    if (series_value) assign_parameter(p, spec.series_parameter, *series_value);
    assign_parameter(p, spec.swept_parameter, sweep_value);
    return p;
}

ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
    using clock = std::chrono::steady_clock;
    ResultTable table{spec.id, spec.swept_parameter, spec.series_parameter, spec.metric, {}};
    const std::size_t trials = spec.effective_trials();

    struct Cell {
        double sweep;
        std::optional<double> series;
        std::optional<NetworkParams> params;
        std::string error;
    };
    std::vector<Cell> cells;
    const std::vector<std::optional<double>> series =
        spec.series_parameter.empty()
            ? std::vector<std::optional<double>>{std::nullopt}
            : std::vector<std::optional<double>>(spec.series_values.begin(), spec.series_values.end());
    for (const auto& s : series) {
        for (double x : spec.sweep_values) {
            Cell c{x, s, std::nullopt, {}};
            try {
                c.params = params_for(spec, x, s);
            } catch (const std::exception& e) {
                c.error = std::string("error: ") + e.what();
            }
            cells.push_back(std::move(c));
        }
    }

    // row layout: cell, mode, analytic then Monte Carlo
    std::vector<std::size_t> mc_row(cells.size() * spec.modes.size(), 0);
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
            for (bool mc : {false, true}) {
                if (mc ? !spec.monte_carlo : !spec.analytic) continue;
                ResultRow row;
                row.sweep_value = cells[ci].sweep;
                row.series_value = cells[ci].series;
                row.mode = spec.modes[mi];
                row.monte_carlo = mc;
                row.trials = mc ? trials : 0;
                if (!cells[ci].params) {
                    row.status = cells[ci].error;
                } else if (!mc) {
                    const auto t0 = clock::now();
                    try {
                        row.mean = analytic_value(row.mode, spec.metric, *cells[ci].params);
                        row.ci95_half_width = 0.0;
                    } catch (const std::exception& e) {
                        fail_row(row, e);
                    }
                    if (options.record_wall_time) {
                        row.wall_time_s = std::chrono::duration<double>(clock::now() - t0).count();
                    }
                }
                if (mc) mc_row[ci * spec.modes.size() + mi] = table.rows.size();
                table.rows.push_back(std::move(row));
            }
        }
    }
    if (!spec.monte_carlo) return table;

    // batches of cells that can share realizations
    std::map<std::tuple<double, double, double, double>, std::vector<std::size_t>> batches;
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        if (!cells[ci].params) continue;
        const NetworkParams& p = *cells[ci].params;
        batches[{p.user_density, p.d2d_support_probability, p.d2d_pathloss_exponent, p.fap_pathloss_exponent}]
            .push_back(ci);
    }
    const sim::Workload workload = workload_for(spec.metric, spec.modes);
    for (const auto& [key, members] : batches) {
        std::vector<NetworkParams> probes;
        for (std::size_t ci : members) probes.push_back(*cells[ci].params);
        const auto t0 = clock::now();
        std::vector<sim::Moments> moments;
        std::optional<std::string> failure;
        bool non_convergence = false;
        try {
            moments = sim::simulate_probes(std::span<const NetworkParams>(probes), trials, spec.seed, spec.simulation,
                                           workload);
        } catch (const ConvergenceError& e) {
            failure = std::string("non_convergence: ") + e.what();
            non_convergence = true;
        } catch (const std::exception& e) {
            failure = std::string("error: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(clock::now() - t0).count();
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
                ResultRow& row = table.rows[mc_row[members[k] * spec.modes.size() + mi]];
                if (options.record_wall_time) row.wall_time_s = elapsed;
                if (failure) {
                    row.status = *failure;
                    row.non_convergence = non_convergence;
                    continue;
                }
                try {
                    fill_monte_carlo(row, moments[k], spec.metric);
                } catch (const std::exception& e) {
                    fail_row(row, e);
                }
            }
        }
    }
    return table;
}

ExperimentSpec figure_preset(const std::string& name) {
    ExperimentSpec s;
    s.id = name;
    s.metric = Metric::Rate;
    if (name == "fig1") {
        s.swept_parameter = "d2d_link_distance_m";
        s.sweep_values = {2, 4, 6, 8, 10, 12, 14, 16};
        s.series_parameter = "d2d_sir_threshold_db";
        s.series_values = {0, 6};
        s.modes = {Mode::D2D};
    } else if (name == "fig2") {
        s.swept_parameter = "fap_density_per_m2";
        s.sweep_values = {1e-4, 2e-4, 3e-4, 4e-4, 5e-4, 6e-4, 7e-4, 8e-4, 9e-4, 1e-3};
        s.series_parameter = "fap_sir_threshold_db";
        s.series_values = {0, 6};
        s.modes = {Mode::NearestFap};
    } else if (name == "fig3") {
        s.swept_parameter = "cluster_radius_m";
        s.sweep_values = {45, 47.5, 50, 52.5, 55, 57.5, 60, 62.5, 65, 67.5, 70};
        s.series_parameter = "fap_cache_size";
        s.series_values = {200, 400, 800};
        s.base.fap_density = 2e-4;
        s.modes = {Mode::Coordination};
    } else {
        throw ConfigError("unknown figure preset '" + name + "' (valid: fig1, fig2, fig3)", "figure");
    }
    s.validate();
    return s;
}

std::string deviation_report(const ResultTable& table) {
    std::ostringstream out;
    out << "experiment " << table.experiment_id << ", metric " << to_string(table.metric) << ", swept "
        << table.swept_parameter << "\n";
    out << "sweep_value  mode  analytic  monte_carlo  ci95  abs_dev  rel_dev  within_ci\n";
    std::size_t compared = 0, inside = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const ResultRow& a = table.rows[i];
        if (a.monte_carlo) continue;
        const ResultRow* m = nullptr;
        for (std::size_t j = i + 1; j < table.rows.size(); ++j) {
            const ResultRow& r = table.rows[j];
            if (r.monte_carlo && r.mode == a.mode && r.sweep_value == a.sweep_value &&
                r.series_value == a.series_value) {
                m = &r;
                break;
            }
        }
        if (!m) continue;
        out << fmt(a.sweep_value) << "  " << mode_label(a, table.series_parameter) << "  ";
        if (!a.mean || !m->mean) {
            out << (a.mean ? fmt(*a.mean) : "-") << "  " << (m->mean ? fmt(*m->mean) : "-") << "  -  -  -  -  ("
                << (a.mean ? m->status : a.status) << ")\n";
            continue;
        }
        const double dev = *m->mean - *a.mean;
        const bool ok = std::abs(dev) <= *m->ci95_half_width;
        ++compared;
        inside += ok;
        out << fmt(*a.mean) << "  " << fmt(*m->mean) << "  " << fmt(*m->ci95_half_width) << "  " << fmt(dev) << "  "
            << (*a.mean != 0.0 ? fmt(dev / *a.mean) : std::string("-")) << "  " << (ok ? "yes" : "no") << "\n";
    }
    out << inside << " of " << compared << " analytic values lie within the Monte Carlo 95% CI\n";
    return out.str();
}

}  // namespace fran::harness
