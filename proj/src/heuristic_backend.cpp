#include <algorithm>
#include <cmath>
#include <map>

#include "slidelab/backend.hpp"
#include "slidelab/color.hpp"

namespace slidelab {

std::string_view to_string(HeuristicRule r) {
    switch (r) {
        case HeuristicRule::outside_canvas: return "outside_canvas";
        case HeuristicRule::default_font: return "default_font";
        case HeuristicRule::near_duplicate: return "near_duplicate";
        case HeuristicRule::default_colors: return "default_colors";
        case HeuristicRule::misaligned: return "misaligned";
    }
    return "";
}

double iou(const Geometry& a, const Geometry& b) {
    auto box = [](const Geometry& g) {
        const double w = std::max<double>(1.0, static_cast<double>(g.width));
        const double h = std::max<double>(1.0, static_cast<double>(g.height));
        return std::array<double, 4>{static_cast<double>(g.x), static_cast<double>(g.y), static_cast<double>(g.x) + w,
                                     static_cast<double>(g.y) + h};
    };
    const auto p = box(a), q = box(b);
    const double iw = std::min(p[2], q[2]) - std::max(p[0], q[0]);
    const double ih = std::min(p[3], q[3]) - std::max(p[1], q[1]);
    if (iw <= 0 || ih <= 0) return 0.0;
    const double inter = iw * ih;
    const double uni = (p[2] - p[0]) * (p[3] - p[1]) + (q[2] - q[0]) * (q[3] - q[1]) - inter;
    return inter / uni;
}

namespace {

enum Edge { left, right, top, bottom };
constexpr Edge kEdges[] = {left, right, top, bottom};

Emu edge(const Geometry& g, Edge e) {
    switch (e) {
        case left: return g.x;
        case right: return g.right();
        case top: return g.y;
        case bottom: return g.bottom();
    }
    return 0;
}

bool horizontal(Edge e) { return e == left || e == right; }

std::string plain_text(const Element& e) {
    if (!e.text) return {};
    std::string s;
    for (const auto& r : e.text->runs) s += r.text;
    return s;
}

bool near_duplicate(const Element& a, const Element& b, const HeuristicOptions& o) {
    return a.kind == b.kind && a.has_text() == b.has_text() && plain_text(a) == plain_text(b) &&
           iou(a.position, b.position) > o.duplicate_iou;
}

bool outside(const Element& e, const SlideDoc& d) {
    const auto& g = e.position;
    return g.x < 0 || g.y < 0 || g.right() > d.canvas_width || g.bottom() > d.canvas_height;
}

struct Tolerances {
    double tol_x, tol_y, win_x, win_y;
    Tolerances(const SlideDoc& d, const HeuristicOptions& o)
        : tol_x(o.align_tolerance * static_cast<double>(d.canvas_width)),
          tol_y(o.align_tolerance * static_cast<double>(d.canvas_height)),
          win_x(o.align_window * static_cast<double>(d.canvas_width)),
          win_y(o.align_window * static_cast<double>(d.canvas_height)) {}
    double tol(Edge e) const { return horizontal(e) ? tol_x : tol_y; }
    double win(Edge e) const { return horizontal(e) ? win_x : win_y; }
};

/// Lines of one edge type shared by at least two elements other than `skip`.
std::vector<Emu> dominant_lines(const SlideDoc& d, Edge t, std::size_t skip, double tol) {
    std::vector<Emu> lines;
    for (std::size_t j = 0; j < d.elements.size(); ++j) {
        if (j == skip) continue;
        const Emu u = edge(d.elements[j].position, t);
        int support = 0;
        for (std::size_t k = 0; k < d.elements.size(); ++k)
            if (k != skip && std::abs(static_cast<double>(edge(d.elements[k].position, t) - u)) <= tol) ++support;
        if (support >= 2) lines.push_back(u);
    }
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    return lines;
}

/// Nearest dominant line the edge misses by more than the tolerance but no
/// more than the window; nothing when the edge already sits on a line.
std::optional<Emu> snap_target(const SlideDoc& d, std::size_t i, Edge t, const Tolerances& tl) {
    const Emu v = edge(d.elements[i].position, t);
    std::optional<Emu> best;
    double best_dist = 0;
    for (Emu line : dominant_lines(d, t, i, tl.tol(t))) {
        const double dist = std::abs(static_cast<double>(v - line));
        if (dist <= tl.tol(t)) return std::nullopt;
        if (dist <= tl.win(t) && (!best || dist < best_dist)) {
            best = line;
            best_dist = dist;
        }
    }
    return best;
}

bool misaligned(const SlideDoc& d, std::size_t i, const Tolerances& tl) {
    for (Edge t : kEdges)
        if (snap_target(d, i, t, tl)) return true;
    return false;
}

bool has_default_colors(const Element& e) {
    if (e.fill.mode == FillMode::solid && !e.fill.colors.empty() && e.fill.colors[0].rgb == kDefaultFillRgb) return true;
    if (e.text)
        for (const auto& r : e.text->runs)
            if (r.color.rgb == kDefaultTextRgb) return true;
    return false;
}

// Non-default colors by frequency, ties broken by first appearance.
struct Palette {
    std::vector<std::string> text;
    std::vector<std::string> fill;
};

std::vector<std::string> ranked(const std::vector<std::string>& seen) {
    std::map<std::string, std::pair<int, std::size_t>> stats;  // count, first index
    for (std::size_t i = 0; i < seen.size(); ++i) {
        auto [it, inserted] = stats.try_emplace(seen[i], 0, i);
        ++it->second.first;
    }
    std::vector<std::string> out;
    for (const auto& [k, v] : stats) out.push_back(k);
    std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        const auto& sa = stats[a];
        const auto& sb = stats[b];
        return sa.first != sb.first ? sa.first > sb.first : sa.second < sb.second;
    });
    return out;
}

Palette palette_of(const SlideDoc& d) {
    std::vector<std::string> text, fill;
    for (const auto& e : d.elements) {
        if (e.fill.mode != FillMode::none)
            for (const auto& c : e.fill.colors)
                if (!is_default_rgb(c.rgb)) fill.push_back(c.rgb);
        if (e.text)
            for (const auto& r : e.text->runs)
                if (!is_default_rgb(r.color.rgb)) text.push_back(r.color.rgb);
    }
    return {ranked(text), ranked(fill)};
}

bool has_palette(const SlideDoc& d) {
    const auto p = palette_of(d);
    return !p.text.empty() || !p.fill.empty();
}

std::optional<std::string> dominant_font(const SlideDoc& d) {
    std::vector<std::string> fonts;
    for (const auto& e : d.elements)
        if (e.text)
            for (const auto& r : e.text->runs)
                if (!is_default_font(r.font_name)) fonts.push_back(r.font_name);
    auto r = ranked(fonts);
    if (r.empty()) return std::nullopt;
    return r.front();
}

bool uses_default_font(const Element& e) {
    if (!e.text) return false;
    return std::any_of(e.text->runs.begin(), e.text->runs.end(), [](const TextRun& r) { return is_default_font(r.font_name); });
}

bool uses_custom_font(const Element& e) {
    if (!e.text) return false;
    return std::any_of(e.text->runs.begin(), e.text->runs.end(), [](const TextRun& r) { return !is_default_font(r.font_name); });
}

void clamp_into(Geometry& g, const SlideDoc& d) {
    g.width = std::min(g.width, d.canvas_width);
    g.height = std::min(g.height, d.canvas_height);
    g.x = std::clamp<Emu>(g.x, 0, d.canvas_width - g.width);
    g.y = std::clamp<Emu>(g.y, 0, d.canvas_height - g.height);
}

class HeuristicReviewer final : public Reviewer {
public:
    explicit HeuristicReviewer(HeuristicOptions o) : opts_(std::move(o)) {}
    std::string name() const override { return "heuristic"; }

    SlideDoc review(const SlideDoc& doc) const override {
        SlideDoc out = with_all_final(doc);
        for (const auto& f : heuristic_findings(out, opts_)) out.find(f.element_id)->status = Status::tentative;
        return out;
    }

private:
    HeuristicOptions opts_;
};

class HeuristicContributor final : public Contributor {
public:
    explicit HeuristicContributor(HeuristicOptions o) : opts_(std::move(o)) {}
    std::string name() const override { return "heuristic"; }

    SlideDoc contribute(const SlideDoc& labeled) const override { return contribute_variant(labeled, 0); }

    SlideDoc contribute_variant(const SlideDoc& labeled, std::uint64_t variant) const override {
        if (!labeled.any_tentative()) return labeled;
        SlideDoc d = labeled;
        const Tolerances tl(d, opts_);

        // Duplicates go first so they do not count as alignment support.
        for (std::size_t i = 0; i < d.elements.size();) {
            bool dup = false;
            if (d.elements[i].tentative())
                for (std::size_t j = 0; j < i && !dup; ++j) dup = near_duplicate(d.elements[j], d.elements[i], opts_);
            if (dup) d.elements.erase(d.elements.begin() + static_cast<std::ptrdiff_t>(i));
            else ++i;
        }

        const Palette palette = palette_of(d);
        const auto font = dominant_font(d).value_or(opts_.house_font);

        for (std::size_t i = 0; i < d.elements.size(); ++i) {
            if (!d.elements[i].tentative()) continue;
            fix_geometry(d, i, tl);
            Element& e = d.elements[i];
            if (!palette.text.empty() || !palette.fill.empty()) {
                const auto& text_color = palette.text.empty() ? palette.fill.front() : palette.text.front();
                const auto& fill_color = palette.fill.empty() ? palette.text.front() : palette.fill.front();
                if (e.fill.mode == FillMode::solid && e.fill.colors[0].rgb == kDefaultFillRgb) e.fill.colors[0].rgb = fill_color;
                if (e.text)
                    for (auto& r : e.text->runs)
                        if (r.color.rgb == kDefaultTextRgb) r.color.rgb = text_color;
            }
            if (e.text)
                for (auto& r : e.text->runs)
                    if (is_default_font(r.font_name)) r.font_name = font;
            if (variant > 0) {
                const double degrees = static_cast<double>(variant % 7 + 1) * 47.0;
                for (auto& c : e.fill.colors) c.rgb = rotate_hue(c.rgb, degrees);
                if (e.text)
                    for (auto& r : e.text->runs) r.color.rgb = rotate_hue(r.color.rgb, degrees);
            }
        }
        return with_all_final(std::move(d));
    }

private:
    void fix_geometry(SlideDoc& d, std::size_t i, const Tolerances& tl) const {
        Geometry& g = d.elements[i].position;
        const bool was_outside = outside(d.elements[i], d);
        clamp_into(g, d);

        bool snapped_x = false;
        for (Edge t : {left, right}) {
            if (auto line = snap_target(d, i, t, tl)) {
                g.x += *line - edge(g, t);
                snapped_x = true;
                break;
            }
        }
        for (Edge t : {top, bottom}) {
            if (auto line = snap_target(d, i, t, tl)) {
                g.y += *line - edge(g, t);
                break;
            }
        }
        if (was_outside && !snapped_x && opts_.grid_columns > 0) {
            const double column = static_cast<double>(d.canvas_width) / opts_.grid_columns;
            g.x = std::llround(std::round(static_cast<double>(g.x) / column) * column);
        }
        clamp_into(g, d);
    }

    HeuristicOptions opts_;
};

}  // namespace

std::vector<Finding> heuristic_findings(const SlideDoc& d, const HeuristicOptions& opts) {
    std::vector<Finding> out;
    const auto n = d.elements.size();

    for (const auto& e : d.elements)
        if (outside(e, d)) out.push_back({e.id, HeuristicRule::outside_canvas});

    for (std::size_t i = 0; i < n; ++i) {
        if (!uses_default_font(d.elements[i])) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && uses_custom_font(d.elements[j])) {
                out.push_back({d.elements[i].id, HeuristicRule::default_font});
                break;
            }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (near_duplicate(d.elements[j], d.elements[i], opts)) {
                out.push_back({d.elements[i].id, HeuristicRule::near_duplicate});
                break;
            }

    if (has_palette(d))
        for (const auto& e : d.elements)
            if (has_default_colors(e)) out.push_back({e.id, HeuristicRule::default_colors});

    const Tolerances tl(d, opts);
    for (std::size_t i = 0; i < n; ++i)
        if (misaligned(d, i, tl)) out.push_back({d.elements[i].id, HeuristicRule::misaligned});
    return out;
}

std::unique_ptr<Reviewer> make_heuristic_reviewer(HeuristicOptions opts) {
    return std::make_unique<HeuristicReviewer>(std::move(opts));
}

std::unique_ptr<Contributor> make_heuristic_contributor(HeuristicOptions opts) {
    return std::make_unique<HeuristicContributor>(std::move(opts));
}

}  // namespace slidelab
