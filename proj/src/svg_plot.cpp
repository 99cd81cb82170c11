#include "terp/svg_plot.hpp"

#include "terp/csv_io.hpp"
#include "terp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace terp {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fixed(double v) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(2);
    ss << v;
    return ss.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_clusters_svg(const FunctionalDataset& data, const Partition& partition, const PlotOptions& options) {
    if (partition.size() != data.size()) throw DataError("partition does not match the dataset");
    const double margin = 50.0;
    const double w = options.width;
    const double h = options.height;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : data.curves()) {
        const auto [mn, mx] = std::minmax_element(c.values().begin(), c.values().end());
        lo = std::min(lo, *mn);
        hi = std::max(hi, *mx);
    }
    if (!(hi > lo)) {
        hi = lo + 1.0;
    }
    auto x_of = [&](double t) { return margin + t * (w - 2 * margin); };
    auto y_of = [&](double v) { return h - margin - (v - lo) / (hi - lo) * (h - 2 * margin); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << fixed(margin) << "\" y1=\"" << fixed(h - margin) << "\" x2=\"" << fixed(w - margin)
        << "\" y2=\"" << fixed(h - margin) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fixed(margin) << "\" y1=\"" << fixed(margin) << "\" x2=\"" << fixed(margin) << "\" y2=\""
        << fixed(h - margin) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(margin) << "\" y=\"" << fixed(h - margin + 20) << "\" font-size=\"12\">0</text>\n";
    svg << "<text x=\"" << fixed(w - margin) << "\" y=\"" << fixed(h - margin + 20) << "\" font-size=\"12\">1</text>\n";
    svg << "<text x=\"5\" y=\"" << fixed(margin) << "\" font-size=\"12\">" << format_double(hi) << "</text>\n";
    svg << "<text x=\"5\" y=\"" << fixed(h - margin) << "\" font-size=\"12\">" << format_double(lo) << "</text>\n";
    if (!options.title.empty()) {
        svg << "<text x=\"" << fixed(w / 2) << "\" y=\"25\" font-size=\"16\" text-anchor=\"middle\">"
            << escape(options.title) << "</text>\n";
    }

    const auto rule = QuadratureRule::for_regime(data.regime());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& c = data[i];
        const char* colour = kPalette[static_cast<std::size_t>(partition[i] - 1) % kPalette.size()];
        const auto gaps = gap_intervals(c.grid(), rule);
        auto gap = gaps.begin();
        std::size_t start = 0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const bool breaks_here = gap != gaps.end() && *gap == k;
            if (k + 1 == c.size() || breaks_here) {
                svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" stroke-opacity=\"0.7\" "
                    << "data-cluster=\"" << partition[i] << "\" points=\"";
                for (std::size_t p = start; p <= k; ++p) {
                    svg << (p > start ? " " : "") << fixed(x_of(c.time(p))) << ',' << fixed(y_of(c.value(p)));
                }
                svg << "\"/>\n";
                start = k + 1;
                if (breaks_here) ++gap;
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace terp
