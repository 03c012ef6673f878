// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kuq::detail {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Log-log line plot. With `mc_reference`, adds a dashed n^{-1/2} line
/// anchored at the first point of the first series.
std::string loglog_svg(std::span<const PlotSeries> series, std::string_view title, std::string_view x_label,
                       std::string_view y_label, bool mc_reference);

/// Bar chart of counts[j] against j + 1.
std::string bar_svg(std::span<const std::size_t> counts, std::string_view title);

/// Quotes a CSV field when it contains a comma, quote or is empty.
std::string csv_field(std::string_view s);
/// Splits one CSV line, honoring double quotes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace kuq::detail
