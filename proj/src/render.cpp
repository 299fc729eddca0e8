#include "slidelab/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "slidelab/error.hpp"

namespace slidelab {

namespace {

// Average glyph advance as a fraction of the font size.
constexpr double kGlyphWidth = 0.5;
constexpr double kLineHeight = 1.2;

std::string num(double v) {
    if (std::abs(v) < 0.005) v = 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::string escape(std::string_view s) {
    std::string out;
    for (unsigned char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default:
                if (c < 0x20 && c != '\t') break;  // not allowed in XML 1.0
                out += static_cast<char>(c == '\t' ? ' ' : c);
        }
    }
    return out;
}

double opacity(const Color& c, double transparency = 0.0) { return std::clamp(c.alpha * (1.0 - transparency), 0.0, 1.0); }

struct Box {
    double x, y, w, h;
};

// Outline for an auto-shape; anything without a dedicated outline is drawn
// as its bounding rectangle.
std::string outline(std::string_view shape, const Box& b, const std::string& paint) {
    std::ostringstream o;
    const auto pt = [](double x, double y) { return num(x) + "," + num(y); };
    const double cx = b.x + b.w / 2, cy = b.y + b.h / 2;
    if (shape == "oval" || shape == "circle") {
        o << "<ellipse cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" rx=\"" << num(b.w / 2) << "\" ry=\"" << num(b.h / 2)
          << "\"" << paint << "/>";
    } else if (shape == "line") {
        o << "<line x1=\"" << num(b.x) << "\" y1=\"" << num(b.y) << "\" x2=\"" << num(b.x + b.w) << "\" y2=\""
          << num(b.y + b.h) << "\"" << paint << "/>";
    } else if (shape == "triangle") {
        o << "<polygon points=\"" << pt(cx, b.y) << " " << pt(b.x + b.w, b.y + b.h) << " " << pt(b.x, b.y + b.h) << "\""
          << paint << "/>";
    } else if (shape == "right_triangle") {
        o << "<polygon points=\"" << pt(b.x, b.y) << " " << pt(b.x + b.w, b.y + b.h) << " " << pt(b.x, b.y + b.h) << "\""
          << paint << "/>";
    } else if (shape == "diamond") {
        o << "<polygon points=\"" << pt(cx, b.y) << " " << pt(b.x + b.w, cy) << " " << pt(cx, b.y + b.h) << " "
          << pt(b.x, cy) << "\"" << paint << "/>";
    } else if (shape == "hexagon") {
        const double q = b.w / 4;
        o << "<polygon points=\"" << pt(b.x + q, b.y) << " " << pt(b.x + b.w - q, b.y) << " " << pt(b.x + b.w, cy) << " "
          << pt(b.x + b.w - q, b.y + b.h) << " " << pt(b.x + q, b.y + b.h) << " " << pt(b.x, cy) << "\"" << paint << "/>";
    } else {
        const double r = shape == "rounded_rectangle" ? std::min(b.w, b.h) / 6 : 0.0;
        o << "<rect x=\"" << num(b.x) << "\" y=\"" << num(b.y) << "\" width=\"" << num(b.w) << "\" height=\"" << num(b.h)
          << "\"";
        if (r > 0) o << " rx=\"" << num(r) << "\"";
        o << paint << "/>";
    }
    return o.str();
}

struct Segment {
    const TextRun* run;
    std::string text;
};

// Greedy word wrap across runs; explicit newlines always break.
std::vector<std::vector<Segment>> wrap(const TextFrame& t, double width_px, double px_per_pt) {
    std::vector<std::vector<Segment>> lines(1);
    double used = 0;
    const auto push = [&](const TextRun* r, const std::string& word) {
        auto& line = lines.back();
        if (!line.empty() && line.back().run == r) line.back().text += word;
        else line.push_back({r, word});
    };
    for (const auto& r : t.runs) {
        const double glyph = r.font_size * px_per_pt * kGlyphWidth;
        std::size_t i = 0;
        while (i < r.text.size()) {
            if (r.text[i] == '\n') {
                lines.emplace_back();
                used = 0;
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < r.text.size() && r.text[j] != ' ' && r.text[j] != '\n') ++j;
            if (j < r.text.size() && r.text[j] == ' ') ++j;
            const std::string word = r.text.substr(i, j - i);
            std::size_t glyphs = 0;
            for (unsigned char c : word)
                if ((c & 0xC0) != 0x80) ++glyphs;
            const double w = static_cast<double>(glyphs) * glyph;
            if (used > 0 && used + w > width_px) {
                lines.emplace_back();
                used = 0;
            }
            push(&r, word);
            used += w;
            i = j;
        }
    }
    return lines;
}

void render_text(std::ostringstream& o, const Element& e, const Box& b, double px_per_pt) {
    const auto& t = *e.text;
    const auto lines = wrap(t, b.w, px_per_pt);
    std::string anchor = "start";
    double x = b.x;
    if (t.alignment == Alignment::center) {
        anchor = "middle";
        x = b.x + b.w / 2;
    } else if (t.alignment == Alignment::right) {
        anchor = "end";
        x = b.x + b.w;
    }
    o << "<text text-anchor=\"" << anchor << "\">";
    double y = b.y;
    for (const auto& line : lines) {
        double size = 0;
        for (const auto& s : line) size = std::max(size, s.run->font_size * px_per_pt);
        if (size == 0 && !t.runs.empty()) size = t.runs.front().font_size * px_per_pt;
        y += size * kLineHeight * t.line_spacing;
        o << "<tspan x=\"" << num(x) << "\" y=\"" << num(y) << "\">";
        for (const auto& s : line) {
            const auto& r = *s.run;
            o << "<tspan font-family=\"" << escape(r.font_name) << "\" font-size=\"" << num(r.font_size * px_per_pt)
              << "\" fill=\"#" << r.color.rgb << "\"";
            if (r.color.alpha < 1.0) o << " fill-opacity=\"" << num(opacity(r.color)) << "\"";
            o << ">" << escape(s.text) << "</tspan>";
        }
        o << "</tspan>";
    }
    o << "</text>";
}

}  // namespace

std::string render_svg(const SlideDoc& doc, const RenderOptions& opts) {
    if (!(opts.pixels_per_inch > 0)) throw Error(ErrorKind::validation, "pixels_per_inch must be positive");
    const double px = opts.pixels_per_inch / static_cast<double>(kEmuPerInch);
    const double px_per_pt = opts.pixels_per_inch / 72.0;
    const auto to_px = [&](Emu v) { return static_cast<double>(v) * px; };
    const double width = to_px(doc.canvas_width), height = to_px(doc.canvas_height);

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">";
    o << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"#"
      << opts.background.rgb << "\"";
    if (opts.background.alpha < 1.0) o << " fill-opacity=\"" << num(opts.background.alpha) << "\"";
    o << "/>";

    for (std::size_t i = 0; i < doc.elements.size(); ++i) {
        const auto& e = doc.elements[i];
        const Box b{to_px(e.position.x), to_px(e.position.y), to_px(e.position.width), to_px(e.position.height)};
        o << "<g class=\"element\" data-element-id=\"" << escape(e.id) << "\" data-kind=\"" << escape(kind_label(e.kind))
          << "\"";
        if (e.position.rotation != 0.0)
            o << " transform=\"rotate(" << num(e.position.rotation) << " " << num(b.x + b.w / 2) << " " << num(b.y + b.h / 2)
              << ")\"";
        o << ">";

        const auto& f = e.fill;
        std::string paint;
        const bool is_line = !is_placeholder(e.kind) && std::get<AutoShape>(e.kind).name == "line";
        const std::string paint_id = "paint" + std::to_string(i);
        switch (f.mode) {
            case FillMode::none: paint = " fill=\"none\""; break;
            case FillMode::solid:
                paint = " fill=\"#" + f.colors[0].rgb + "\" fill-opacity=\"" + num(opacity(f.colors[0], f.transparency)) + "\"";
                break;
            case FillMode::gradient: {
                const auto& a = f.colors.front();
                const auto& z = f.colors.back();
                o << "<defs><linearGradient id=\"" << paint_id << "\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"0\">"
                  << "<stop offset=\"0\" stop-color=\"#" << a.rgb << "\" stop-opacity=\"" << num(opacity(a, f.transparency))
                  << "\"/><stop offset=\"1\" stop-color=\"#" << z.rgb << "\" stop-opacity=\"" << num(opacity(z, f.transparency))
                  << "\"/></linearGradient></defs>";
                paint = " fill=\"url(#" + paint_id + ")\"";
                break;
            }
            case FillMode::pattern: {
                const auto& fg = f.colors.front();
                const std::string bg = f.colors.size() > 1 ? f.colors[1].rgb : std::string("FFFFFF");
                o << "<defs><pattern id=\"" << paint_id
                  << "\" width=\"8\" height=\"8\" patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">"
                  << "<rect width=\"8\" height=\"8\" fill=\"#" << bg << "\"/><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"8\" stroke=\"#"
                  << fg.rgb << "\" stroke-width=\"3\"/></pattern></defs>";
                paint = " fill=\"url(#" + paint_id + ")\" fill-opacity=\"" + num(1.0 - f.transparency) + "\"";
                break;
            }
        }

        if (is_placeholder(e.kind)) {
            o << "<rect x=\"" << num(b.x) << "\" y=\"" << num(b.y) << "\" width=\"" << num(b.w) << "\" height=\"" << num(b.h)
              << "\" fill=\"#E6E6E6\" stroke=\"#999999\"/>";
            o << "<line x1=\"" << num(b.x) << "\" y1=\"" << num(b.y) << "\" x2=\"" << num(b.x + b.w) << "\" y2=\""
              << num(b.y + b.h) << "\" stroke=\"#999999\"/>";
            o << "<line x1=\"" << num(b.x + b.w) << "\" y1=\"" << num(b.y) << "\" x2=\"" << num(b.x) << "\" y2=\""
              << num(b.y + b.h) << "\" stroke=\"#999999\"/>";
        } else if (is_line) {
            const std::string stroke = f.mode == FillMode::none ? "#000000" : "#" + f.colors[0].rgb;
            o << outline("line", b, " stroke=\"" + stroke + "\" stroke-width=\"2\"");
        } else {
            o << outline(std::get<AutoShape>(e.kind).name, b, paint);
        }
        if (e.text) render_text(o, e, b, px_per_pt);
        o << "</g>";
    }

    if (opts.highlight_tentative)
        for (const auto& e : doc.elements) {
            if (!e.tentative()) continue;
            o << "<rect class=\"tentative-outline\" data-element-id=\"" << escape(e.id) << "\" x=\"" << num(to_px(e.position.x))
              << "\" y=\"" << num(to_px(e.position.y)) << "\" width=\"" << num(to_px(e.position.width)) << "\" height=\""
              << num(to_px(e.position.height)) << "\" fill=\"none\" stroke=\"#E4572E\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>";
        }
    o << "</svg>";
    return o.str();
}

}  // namespace slidelab
