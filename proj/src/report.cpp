#include "starqcr/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "starqcr/errors.hpp"

namespace starqcr {

std::string format_number(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) {
        throw ConfigError("CSV header must have at least one column");
    }
}

void CsvWriter::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw ConfigError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(header_.size()));
    }
    rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
    std::ostringstream out;
    const auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << cells[i];
        }
        out << "\n";
    };
    emit(header_);
    for (const auto& row : rows_) {
        emit(row);
    }
    return out.str();
}

void CsvWriter::write_file(const std::filesystem::path& path) const {
    write_text_file(path, str());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    stream << content;
    if (!stream) {
        throw ConfigError("write to '" + path.string() + "' failed");
    }
}

namespace {

constexpr double kPlotSize = 440.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginBottom = 52.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginRight = 24.0;

double to_px_x(double x) { return kMarginLeft + x * kPlotSize; }
double to_px_y(double y) { return kMarginTop + (1.0 - y) * kPlotSize; }

std::string px(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", value);
    return buffer;
}

}  // namespace

std::string render_region_svg(const CapacityRegion& region) {
    const double width = kMarginLeft + kPlotSize + kMarginRight;
    const double height = kMarginTop + kPlotSize + kMarginBottom;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(width) << "\" height=\""
        << px(height) << "\" viewBox=\"0 0 " << px(width) << " " << px(height) << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << px(width) << "\" height=\"" << px(height)
        << "\" fill=\"white\"/>\n";

    // Axes with ticks every 0.2.
    out << "  <line x1=\"" << px(to_px_x(0)) << "\" y1=\"" << px(to_px_y(0)) << "\" x2=\""
        << px(to_px_x(1)) << "\" y2=\"" << px(to_px_y(0)) << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << px(to_px_x(0)) << "\" y1=\"" << px(to_px_y(0)) << "\" x2=\""
        << px(to_px_x(0)) << "\" y2=\"" << px(to_px_y(1)) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        const std::string label = format_number(v);
        out << "  <line x1=\"" << px(to_px_x(v)) << "\" y1=\"" << px(to_px_y(0)) << "\" x2=\""
            << px(to_px_x(v)) << "\" y2=\"" << px(to_px_y(0) + 6) << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << px(to_px_x(v)) << "\" y=\"" << px(to_px_y(0) + 20)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
        out << "  <line x1=\"" << px(to_px_x(0)) << "\" y1=\"" << px(to_px_y(v)) << "\" x2=\""
            << px(to_px_x(0) - 6) << "\" y2=\"" << px(to_px_y(v)) << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << px(to_px_x(0) - 10) << "\" y=\"" << px(to_px_y(v) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
    }

    const std::string x_label = "N" + std::to_string(region.root) + "-N" +
                                std::to_string(region.leaf_k) + " fulfilled rate";
    const std::string y_label = "N" + std::to_string(region.root) + "-N" +
                                std::to_string(region.leaf_j) + " fulfilled rate";
    out << "  <text x=\"" << px(to_px_x(0.5)) << "\" y=\"" << px(height - 10)
        << "\" font-size=\"14\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "  <text x=\"16\" y=\"" << px(to_px_y(0.5))
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << px(to_px_y(0.5)) << ")\">" << y_label << "</text>\n";

    // Ideal frontier: the noiseless tradeoff x + y = 1.
    out << "  <polyline points=\"" << px(to_px_x(0)) << "," << px(to_px_y(1)) << " "
        << px(to_px_x(1)) << "," << px(to_px_y(0))
        << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

    const auto vertices = region_polyline(region);
    out << "  <polyline points=\"";
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        out << (i ? " " : "") << px(to_px_x(vertices[i].x)) << "," << px(to_px_y(vertices[i].y));
    }
    out << "\" fill=\"none\" stroke=\"#1462b8\" stroke-width=\"2\"/>\n";

    // Reference points as markers (circles, not polylines).
    const struct {
        const QcrPoint& point;
        const char* name;
    } markers[] = {{region.a, "A"}, {region.b, "B"}, {region.c, "C"}, {region.d, "D"}};
    for (const auto& marker : markers) {
        out << "  <circle cx=\"" << px(to_px_x(marker.point.x)) << "\" cy=\""
            << px(to_px_y(marker.point.y)) << "\" r=\"4\" fill=\"#1462b8\"/>\n";
        out << "  <text x=\"" << px(to_px_x(marker.point.x) + 8) << "\" y=\""
            << px(to_px_y(marker.point.y) - 6) << "\" font-size=\"12\">" << marker.name
            << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace starqcr
