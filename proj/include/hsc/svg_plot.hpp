#pragma once

#include <string>
#include <vector>

#include "hsc/errors.hpp"

namespace hsc {

struct MissingColumn : Error { using Error::Error; };

/// Column-oriented numeric table, typically read back from a run's CSV.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // data[j] is column j

    std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
    const std::vector<double>& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

Table read_csv_table(const std::string& path);
Table table_from_csv_text(const std::string& text);

/// Panel layout for a figure: each panel is a list of column names plotted
/// against the x column as stacked subplots.
struct PlotSpec {
    std::vector<std::vector<std::string>> panels;
    std::string x_column = "t";
    std::string x_label = "time [s]";
    std::string title;
    int width = 960;
    int panel_height = 200;
};

/// Self-contained SVG document (no external resources), linear axes with a
/// 5% margin, per-panel legend.
std::string render_svg(const Table& table, const PlotSpec& spec);

}  // namespace hsc
