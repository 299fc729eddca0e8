#pragma once

// Preview-quality SVG rendering. Text wraps at the frame width using a fixed
// average glyph width; no real font metrics.

#include <string>

#include "slidelab/model.hpp"

namespace slidelab {

struct RenderOptions {
    double pixels_per_inch = 96.0;
    /// Dashed outline over each TENTATIVE element.
    bool highlight_tentative = false;
    Color background{"FFFFFF", 1.0};
};

/// Top-level nodes: one background rect, then one <g class="element"> per
/// element in z-order, then one overlay rect per highlighted element.
/// Throws Error(validation) for pixels_per_inch <= 0.
std::string render_svg(const SlideDoc& doc, const RenderOptions& opts = {});

}  // namespace slidelab
