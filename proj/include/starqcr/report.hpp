#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "starqcr/qcr.hpp"

namespace starqcr {

/// Formats a value with 9 significant digits, byte-stable across runs.
std::string format_number(double value);

/// Accumulates rows against a fixed header; every row must match its width.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    [[nodiscard]] std::size_t row_count() const { return rows_.size(); }

    [[nodiscard]] std::string str() const;
    void write_file(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Renders the capacity region as a standalone SVG document with exactly two
/// polylines: the dashed noiseless frontier from (0,1) to (1,0) and the
/// measured boundary. Axis labels name the leaf pairs served.
std::string render_region_svg(const CapacityRegion& region);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace starqcr
