#pragma once

#include <string>

#include "abmc/bench/metrics.hpp"

namespace abmc::bench {

/// Two stacked bar panels in one SVG: relative RMSE on top, relative ESS/cpu
/// below, with a dashed reference line at 1.
void write_relative_figure(const MetricsTable& table, const std::string& path);

/// Collects every metrics.csv under `dir` (recursively), merges the rows
/// (benchmark rows are deduplicated by method name) and writes a combined
/// metrics.csv plus the relative figure into dir/report/.
MetricsTable merge_reports(const std::string& dir);

}  // namespace abmc::bench
