#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace frontlab::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string label;
};

/// Minimal polyline plot, no dependencies. A convenience output only; tests
/// never parse it.
struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<double> h_lines;  // horizontal reference lines

    void write(const std::filesystem::path& path) const;
};

}  // namespace frontlab::svg
