#pragma once

#include <string>
#include <vector>

#include "qbat/sweep.hpp"

namespace qbat {

/// Renders one polyline per y column against x_col into a standalone SVG:
/// plot frame, tick marks and labels, legend. Byte output is deterministic
/// for identical input. Throws MissingColumnError for unknown columns and
/// TooFewRowsError when the table has fewer than two rows.
std::string render_svg_string(const SweepResult& result, const std::string& x_col,
                              const std::vector<std::string>& y_cols,
                              const std::string& title = "");

void render_svg(const SweepResult& result, const std::string& x_col,
                const std::vector<std::string>& y_cols, const std::string& path,
                const std::string& title = "");

}  // namespace qbat
