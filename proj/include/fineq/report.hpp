#pragma once

// Report emission: defects.csv / rates.csv / report.json and hand-emitted
// SVG log-log plots.  All writes are atomic (temp file + rename) and all
// floating-point output carries 17 significant digits.

#include <string>

#include "fineq/experiments.hpp"

namespace fineq {

std::string format_double(double x);  // 17 significant digits; inf/nan spelled out

std::string defects_csv(const SuiteResult& result);
std::string rates_csv(const SuiteResult& result);
std::string report_json(const SuiteResult& result, const RunConfig& cfg);

// one log-log plot per experiment group found in the rows
std::string plot_svg(const std::vector<DefectRow>& rows,
                     const std::vector<RateReport>& reports);

void atomic_write(const std::string& path, const std::string& content);

// writes all artifacts under cfg.output_dir; returns the report.json path
std::string write_reports(const SuiteResult& result, const RunConfig& cfg);

// re-plot from a defects.csv file (used by the `plot` subcommand)
std::vector<DefectRow> read_defects_csv(const std::string& path);

}  // namespace fineq
