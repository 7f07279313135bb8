#pragma once

#include <string>
#include <vector>

#include "wavesynth/table.hpp"

namespace wavesynth {

struct PlotSpec {
    std::string x_column;
    std::vector<std::string> y_columns;
    /// Optional column whose distinct values split the rows into series.
    std::string group_column;
    bool log_y = false;
    std::string title;
};

/// Standalone SVG line chart of the selected columns. Non-finite values and,
/// on a log axis, non-positive values are skipped.
std::string render_svg(const Table& table, const PlotSpec& spec);

} // namespace wavesynth
