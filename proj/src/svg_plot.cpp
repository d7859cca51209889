#include "hsc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hsc {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;

    void pad() {
        if (lo == hi) {
            lo -= 1.0;
            hi += 1.0;
            return;
        }
        const double m = 0.05 * (hi - lo);
        lo -= m;
        hi += m;
    }
    double map(double v, double px_lo, double px_hi) const {
        return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
    }
};

}  // namespace

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j)
        if (columns[j] == name) return data[j];
    throw MissingColumn("no column named '" + name + "'");
}

bool Table::has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
}

Table table_from_csv_text(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("csv: empty file");
    std::istringstream hdr(line);
    std::string cell;
    while (std::getline(hdr, cell, ',')) t.columns.push_back(cell);
    if (t.columns.empty()) throw ParseError("csv: no header columns");
    t.data.resize(t.columns.size());

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::size_t j = 0;
        while (std::getline(row, cell, ',')) {
            if (j >= t.columns.size())
                throw ParseError("csv: too many cells on line " + std::to_string(lineno));
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw ParseError("csv: bad number on line " + std::to_string(lineno));
            t.data[j++].push_back(v);
        }
        if (j != t.columns.size())
            throw ParseError("csv: short row on line " + std::to_string(lineno));
    }
    return t;
}

Table read_csv_table(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return table_from_csv_text(ss.str());
}

std::string render_svg(const Table& table, const PlotSpec& spec) {
    if (spec.panels.empty()) throw ValidationError("plot: no panels requested");
    if (!table.has_column(spec.x_column))
        throw MissingColumn("no column named '" + spec.x_column + "'");
    for (const auto& panel : spec.panels)
        for (const auto& name : panel)
            if (!table.has_column(name)) throw MissingColumn("no column named '" + name + "'");
    if (table.rows() == 0) throw EmptyLog("plot: table has no rows");

    const auto& xs = table.column(spec.x_column);
    Range xr{*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end())};
    xr.pad();

    const int margin_l = 64, margin_r = 16, margin_t = spec.title.empty() ? 16 : 40;
    const int gap = 34;
    const int ph = spec.panel_height;
    const int pw = spec.width - margin_l - margin_r;
    const int total_h =
        margin_t + static_cast<int>(spec.panels.size()) * (ph + gap) + 8;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << total_h << "\" viewBox=\"0 0 " << spec.width << " " << total_h << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << total_h
        << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        svg << "<text x=\"" << spec.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(spec.title)
            << "</text>\n";

    for (std::size_t pi = 0; pi < spec.panels.size(); ++pi) {
        const auto& panel = spec.panels[pi];
        const int top = margin_t + static_cast<int>(pi) * (ph + gap);
        const int bottom = top + ph;

        Range yr{0.0, 0.0};
        bool first = true;
        for (const auto& name : panel) {
            for (double v : table.column(name)) {
                if (first) {
                    yr.lo = yr.hi = v;
                    first = false;
                } else {
                    yr.lo = std::min(yr.lo, v);
                    yr.hi = std::max(yr.hi, v);
                }
            }
        }
        yr.pad();

        svg << "<rect x=\"" << margin_l << "\" y=\"" << top << "\" width=\"" << pw
            << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

        // grid and tick labels
        for (int i = 0; i <= 4; ++i) {
            const double fx = margin_l + pw * i / 4.0;
            const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
            svg << "<line x1=\"" << fx << "\" y1=\"" << top << "\" x2=\"" << fx << "\" y2=\""
                << bottom << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
            svg << "<text x=\"" << fx << "\" y=\"" << bottom + 14
                << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
                << fmt(xv) << "</text>\n";
        }
        for (int i = 0; i <= 3; ++i) {
            const double fy = bottom - ph * i / 3.0;
            const double yv = yr.lo + (yr.hi - yr.lo) * i / 3.0;
            svg << "<line x1=\"" << margin_l << "\" y1=\"" << fy << "\" x2=\""
                << margin_l + pw << "\" y2=\"" << fy
                << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
            svg << "<text x=\"" << margin_l - 6 << "\" y=\"" << fy + 3
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
                << fmt(yv) << "</text>\n";
        }
        svg << "<text x=\"" << margin_l + pw / 2 << "\" y=\"" << bottom + 28
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << xml_escape(spec.x_label) << "</text>\n";

        for (std::size_t si = 0; si < panel.size(); ++si) {
            const auto& ys = table.column(panel[si]);
            const char* color = kPalette[si % kPaletteSize];
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (i) svg << ' ';
                svg << fmt(xr.map(xs[i], margin_l, margin_l + pw)) << ','
                    << fmt(yr.map(ys[i], bottom, top));
            }
            svg << "\"/>\n";

            const int lx = margin_l + pw - 120;
            const int ly = top + 14 + static_cast<int>(si) * 14;
            svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 18
                << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
                << "\" stroke-width=\"2\"/>\n";
            svg << "<text x=\"" << lx + 24 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(panel[si])
                << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hsc
