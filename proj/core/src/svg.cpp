#include "frontlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "frontlab/errors.hpp"

namespace frontlab::svg {

void LinePlot::write(const std::filesystem::path& path) const {
    const double W = 720, H = 480;
    const double ml = 64, mr = 20, mt = 36, mb = 48;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        for (double v : s.x) {
            x_lo = std::min(x_lo, v);
            x_hi = std::max(x_hi, v);
        }
        for (double v : s.y) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    for (double v : h_lines) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
    }
    if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
    if (!(y_hi > y_lo)) y_hi = y_lo + 1.0;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

    std::ostringstream o;
    o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    o << "<rect width='100%' height='100%' fill='white'/>\n";
    o << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
    o << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr << "' height='"
      << H - mt - mb << "' fill='none' stroke='#333'/>\n";
    o << "<text x='" << W / 2 << "' y='" << H - 12 << "' text-anchor='middle' font-size='12'>"
      << x_label << "</text>\n";
    o << "<text x='16' y='" << H / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 "
      << H / 2 << ")'>" << y_label << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_lo + k * (x_hi - x_lo) / 4;
        const double yv = y_lo + k * (y_hi - y_lo) / 4;
        o << "<text x='" << px(xv) << "' y='" << H - mb + 16
          << "' text-anchor='middle' font-size='10'>" << xv << "</text>\n";
        o << "<text x='" << ml - 6 << "' y='" << py(yv) + 3
          << "' text-anchor='end' font-size='10'>" << yv << "</text>\n";
    }
    for (double v : h_lines) {
        o << "<line x1='" << ml << "' y1='" << py(v) << "' x2='" << W - mr << "' y2='" << py(v)
          << "' stroke='#ff7f0e' stroke-dasharray='6,4'/>\n";
    }
    double legend_y = mt + 16;
    for (const auto& s : series) {
        o << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.x.size(); ++i) {
            o << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        o << "'/>\n";
        if (!s.label.empty()) {
            o << "<text x='" << W - mr - 8 << "' y='" << legend_y
              << "' text-anchor='end' font-size='11' fill='" << s.color << "'>" << s.label
              << "</text>\n";
            legend_y += 14;
        }
    }
    o << "</svg>\n";

    std::ofstream out(path);
    if (!out.is_open()) {
        throw config_error("cannot open output file: " + path.string());
    }
    out << o.str();
}

}  // namespace frontlab::svg
