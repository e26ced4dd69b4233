#pragma once

#include <string>

#include "fran/experiment.hpp"

namespace fran::harness {

/// Column names of every CSV table.
inline constexpr const char* kCsvHeader =
    "sweep_value,mode,evaluator,mean,ci95_half_width,trials,wall_time_s,status";

/// RFC 4180 text: header row plus one 8-field row per result.
std::string to_csv(const ResultTable& table);
/// One polyline per (mode, evaluator, series value), with axes and legend.
std::string to_svg(const ResultTable& table);

/// Write the texts to `path`; IoError names the path on failure.
void emit_csv(const ResultTable& table, const std::string& path);
void emit_svg(const ResultTable& table, const std::string& path);

/// Quotes a CSV field when it holds a comma, quote or line break.
std::string csv_field(const std::string& s);

}  // namespace fran::harness
