#pragma once

#include "terp/core_types.hpp"

#include <string>

namespace terp {

struct PlotOptions {
    int width = 800;
    int height = 500;
    std::string title;
};

/// Static SVG: one polyline per curve, stroke colour by cluster. Fragmented
/// curves are broken at their unobserved gaps.
std::string render_clusters_svg(const FunctionalDataset& data, const Partition& partition,
                                const PlotOptions& options = {});

}  // namespace terp
