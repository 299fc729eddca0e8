#include "slidelab/validate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "slidelab/error.hpp"
#include "slidelab/shape_registry.hpp"

namespace slidelab {

namespace {

bool valid_rgb(const std::string& rgb) {
    return rgb.size() == 6 &&
           std::all_of(rgb.begin(), rgb.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'F'); });
}

bool unit_fraction(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void check_color(const Color& c, const std::string& id, const std::string& where, std::vector<Violation>& out) {
    if (!valid_rgb(c.rgb)) out.push_back({{id}, "color.rgb", where + ": \"" + c.rgb + "\" is not six uppercase hex digits"});
    if (!unit_fraction(c.alpha)) out.push_back({{id}, "color.alpha", where + ": alpha outside [0,1]"});
}

void check_element(const Element& e, std::vector<Violation>& out) {
    if (e.id.empty()) out.push_back({{e.id}, "id.empty", "element id must not be empty"});

    if (const auto* a = std::get_if<AutoShape>(&e.kind)) {
        if (!ShapeRegistry::instance().contains(a->name))
            out.push_back({{e.id}, "kind.registry", "auto_shape \"" + a->name + "\" is not in the registry"});
    } else if (e.text) {
        out.push_back({{e.id}, "placeholder.text", "media placeholders carry no text"});
    }

    if (e.position.width < 0 || e.position.height < 0)
        out.push_back({{e.id}, "position.extent", "width and height must be non-negative"});
    if (!std::isfinite(e.position.rotation)) out.push_back({{e.id}, "position.rotation", "rotation must be finite"});

    const auto n = e.fill.colors.size();
    switch (e.fill.mode) {
        case FillMode::solid:
            if (n != 1) out.push_back({{e.id}, "fill.solid", "solid fill needs exactly one color"});
            break;
        case FillMode::gradient:
            if (n < 2) out.push_back({{e.id}, "fill.gradient", "gradient fill needs at least two colors"});
            break;
        case FillMode::pattern:
            if (n < 1 || n > 2) out.push_back({{e.id}, "fill.pattern", "pattern fill needs one or two colors"});
            break;
        case FillMode::none:
            if (n != 0) out.push_back({{e.id}, "fill.none", "empty fill carries no colors"});
            break;
    }
    if (!unit_fraction(e.fill.transparency)) out.push_back({{e.id}, "fill.transparency", "transparency outside [0,1]"});
    for (std::size_t i = 0; i < n; ++i) check_color(e.fill.colors[i], e.id, "fill.colors[" + std::to_string(i) + "]", out);

    if (e.text) {
        const auto& runs = e.text->runs;
        if (runs.empty()) out.push_back({{e.id}, "text.runs", "text frame needs at least one run"});
        if (runs.size() > 1 && std::any_of(runs.begin(), runs.end(), [](const TextRun& r) { return r.text.empty(); }))
            out.push_back({{e.id}, "text.empty_run", "only a sole run may be empty"});
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (!(runs[i].font_size > 0.0) || !std::isfinite(runs[i].font_size))
                out.push_back({{e.id}, "text.font_size", "font size must be positive"});
            check_color(runs[i].color, e.id, "text.runs[" + std::to_string(i) + "].color", out);
        }
        if (!(e.text->line_spacing > 0.0) || !std::isfinite(e.text->line_spacing))
            out.push_back({{e.id}, "text.line_spacing", "line spacing must be positive"});
    }
}

}  // namespace

std::vector<Violation> validate(const SlideDoc& doc) {
    std::vector<Violation> out;
    if (doc.canvas_width <= 0 || doc.canvas_height <= 0)
        out.push_back({{}, "canvas.extent", "canvas width and height must be positive"});

    std::map<std::string, std::vector<std::size_t>> positions;
    for (std::size_t i = 0; i < doc.elements.size(); ++i) positions[doc.elements[i].id].push_back(i);
    for (const auto& [id, where] : positions) {
        if (where.size() < 2) continue;
        std::vector<std::string> ids(where.size(), id);
        out.push_back({ids, "id.unique", "id \"" + id + "\" used by " + std::to_string(where.size()) + " elements"});
    }

    for (const auto& e : doc.elements) check_element(e, out);
    return out;
}

void ensure_valid(const SlideDoc& doc) {
    auto violations = validate(doc);
    if (violations.empty()) return;
    std::vector<std::string> ids;
    std::string message = "invalid slide:";
    for (const auto& v : violations) {
        for (const auto& id : v.element_ids)
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
        message += " [" + v.rule + "] " + v.detail + (v.element_ids.empty() ? "" : " (" + v.element_ids.front() + ")") + ";";
    }
    throw ValidationError(std::move(ids), message);
}

}  // namespace slidelab
