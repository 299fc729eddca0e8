#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>

#include "slidelab/color.hpp"
#include "slidelab/error.hpp"
#include "slidelab/pptx.hpp"
#include "slidelab/shape_registry.hpp"
#include "slidelab/xml.hpp"
#include "slidelab/zip.hpp"

namespace slidelab {

namespace {

constexpr double kDefaultFontSize = 18.0;

std::string_view to_string_impl(SkipReason r) {
    switch (r) {
        case SkipReason::unsupported_shape: return "unsupported_shape";
        case SkipReason::table: return "table";
        case SkipReason::chart: return "chart";
        case SkipReason::media_payload_dropped: return "media_payload_dropped";
        case SkipReason::other: return "other";
    }
    return "other";
}

std::optional<long long> to_int(std::optional<std::string_view> s) {
    if (!s) return std::nullopt;
    long long v = 0;
    auto [p, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
    if (ec != std::errc{} || p != s->data() + s->size()) return std::nullopt;
    return v;
}

// ---------------------------------------------------------------------------
// Package access

struct Relationship {
    std::string id;
    std::string type;
    std::string target;  // resolved part name, or raw target when external
    bool external = false;
};

std::string directory_of(const std::string& part) {
    auto slash = part.rfind('/');
    return slash == std::string::npos ? std::string() : part.substr(0, slash + 1);
}

std::string resolve_target(const std::string& source_part, std::string_view target) {
    std::string path = (!target.empty() && target[0] == '/') ? std::string(target.substr(1))
                                                             : directory_of(source_part) + std::string(target);
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string::npos) end = path.size();
        auto seg = path.substr(start, end - start);
        if (seg == "..") {
            if (!parts.empty()) parts.pop_back();
        } else if (!seg.empty() && seg != ".") {
            parts.push_back(seg);
        }
        start = end + 1;
    }
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += '/';
        out += p;
    }
    return out;
}

bool type_is(const Relationship& r, std::string_view suffix) {
    return r.type.size() >= suffix.size() && r.type.compare(r.type.size() - suffix.size(), suffix.size(), suffix) == 0;
}

class Package {
public:
    explicit Package(const zip::Reader& zip) : zip_(zip) {}

    bool has(const std::string& part) const { return zip_.contains(part); }

    /// Parsed part, or nullptr when absent. Parse errors propagate.
    const xml::Node* part(const std::string& name) {
        auto it = cache_.find(name);
        if (it != cache_.end()) return it->second.get();
        std::unique_ptr<xml::Node> node;
        if (zip_.contains(name)) node = std::make_unique<xml::Node>(xml::parse(zip_.read(name)));
        return cache_.emplace(name, std::move(node)).first->second.get();
    }

    std::vector<Relationship> relationships(const std::string& source_part) {
        const auto dir = directory_of(source_part);
        const auto file = source_part.substr(dir.size());
        const std::string rels_name = dir + "_rels/" + file + ".rels";
        std::vector<Relationship> out;
        const xml::Node* root = nullptr;
        try {
            root = part(rels_name);
        } catch (const Error&) {
            return out;
        }
        if (!root) return out;
        for (const auto* rel : root->children_named("Relationship")) {
            Relationship r;
            r.id = std::string(rel->attr("Id").value_or(""));
            r.type = std::string(rel->attr("Type").value_or(""));
            const auto target = rel->attr("Target").value_or("");
            r.external = rel->attr("TargetMode").value_or("") == "External";
            r.target = r.external ? std::string(target) : resolve_target(source_part, target);
            out.push_back(std::move(r));
        }
        return out;
    }

    std::optional<Relationship> first_of_type(const std::string& source_part, std::string_view suffix) {
        for (auto& r : relationships(source_part))
            if (type_is(r, suffix)) return r;
        return std::nullopt;
    }

private:
    const zip::Reader& zip_;
    std::map<std::string, std::unique_ptr<xml::Node>> cache_;
};

// ---------------------------------------------------------------------------
// Theme and colors

struct Theme {
    std::map<std::string, std::string, std::less<>> colors{
        {"dk1", "000000"}, {"lt1", "FFFFFF"}, {"dk2", "44546A"}, {"lt2", "E7E6E6"},
        {"accent1", "4472C4"}, {"accent2", "ED7D31"}, {"accent3", "A5A5A5"}, {"accent4", "FFC000"},
        {"accent5", "5B9BD5"}, {"accent6", "70AD47"}, {"hlink", "0563C1"}, {"folHlink", "954F72"}};
    std::string minor_font = "Calibri";
    std::string major_font = "Calibri";
};

std::string system_color(const xml::Node& n) {
    if (auto last = n.attr("lastClr")) return std::string(*last);
    const auto val = n.attr("val").value_or("");
    if (val == "window" || val == "btnHighlight" || val == "highlightText") return "FFFFFF";
    return "000000";
}

std::string preset_color(std::string_view name) {
    static const std::map<std::string_view, std::string_view> table{
        {"black", "000000"}, {"white", "FFFFFF"}, {"red", "FF0000"}, {"green", "008000"}, {"blue", "0000FF"},
        {"yellow", "FFFF00"}, {"gray", "808080"}, {"grey", "808080"}, {"orange", "FFA500"}, {"purple", "800080"},
        {"navy", "000080"}, {"teal", "008080"}, {"silver", "C0C0C0"}, {"maroon", "800000"}, {"lime", "00FF00"},
        {"aqua", "00FFFF"}, {"cyan", "00FFFF"}, {"fuchsia", "FF00FF"}, {"magenta", "FF00FF"}, {"olive", "808000"}};
    auto it = table.find(name);
    return it == table.end() ? "000000" : std::string(it->second);
}

std::string scheme_lookup(const Theme& theme, std::string_view key) {
    std::string_view k = key;
    if (k == "tx1") k = "dk1";
    else if (k == "bg1") k = "lt1";
    else if (k == "tx2") k = "dk2";
    else if (k == "bg2") k = "lt2";
    else if (k == "phClr") k = "accent1";
    auto it = theme.colors.find(k);
    return it == theme.colors.end() ? "000000" : it->second;
}

/// `node` is one of srgbClr/schemeClr/sysClr/prstClr/scrgbClr/hslClr.
std::optional<Color> color_from_node(const xml::Node& node, const Theme& theme) {
    const auto local = node.local_name();
    std::string hex;
    if (local == "srgbClr") hex = std::string(node.attr("val").value_or("000000"));
    else if (local == "schemeClr") hex = scheme_lookup(theme, node.attr("val").value_or("tx1"));
    else if (local == "sysClr") hex = system_color(node);
    else if (local == "prstClr") hex = preset_color(node.attr("val").value_or("black"));
    else if (local == "scrgbClr") {
        auto pct = [&](const char* a) { return static_cast<int>(std::lround(to_int(node.attr(a)).value_or(0) * 255.0 / 100000.0)); };
        hex = to_hex({pct("r"), pct("g"), pct("b")});
    } else if (local == "hslClr") {
        Hsl h{to_int(node.attr("hue")).value_or(0) / 60000.0, to_int(node.attr("sat")).value_or(0) / 100000.0,
              to_int(node.attr("lum")).value_or(0) / 100000.0};
        hex = to_hex(to_rgb(h));
    } else {
        return std::nullopt;
    }
    Rgb rgb;
    if (!parse_hex(hex, rgb)) rgb = {};

    Color c;
    for (const auto& mod : node.children) {
        const double v = to_int(mod.attr("val")).value_or(100000) / 100000.0;
        const auto m = mod.local_name();
        if (m == "alpha") {
            c.alpha = std::clamp(v, 0.0, 1.0);
        } else if (m == "lumMod" || m == "lumOff") {
            Hsl h = to_hsl(rgb);
            h.l = m == "lumMod" ? h.l * v : h.l + v;
            rgb = to_rgb(h);
        } else if (m == "tint") {
            auto t = [&](int ch) { return static_cast<int>(std::lround(ch * v + 255.0 * (1.0 - v))); };
            rgb = {t(rgb.r), t(rgb.g), t(rgb.b)};
        } else if (m == "shade") {
            auto s = [&](int ch) { return static_cast<int>(std::lround(ch * v)); };
            rgb = {s(rgb.r), s(rgb.g), s(rgb.b)};
        }
    }
    c.rgb = to_hex(rgb);
    return c;
}

/// First color child of `holder`.
std::optional<Color> color_in(const xml::Node* holder, const Theme& theme) {
    if (!holder) return std::nullopt;
    for (const auto& c : holder->children)
        if (auto color = color_from_node(c, theme)) return color;
    return std::nullopt;
}

Theme load_theme(Package& pkg, const std::string& presentation_part) {
    Theme theme;
    std::string theme_part;
    if (auto r = pkg.first_of_type(presentation_part, "/theme")) theme_part = r->target;
    else if (pkg.has("ppt/theme/theme1.xml")) theme_part = "ppt/theme/theme1.xml";
    if (theme_part.empty()) return theme;
    const xml::Node* root = nullptr;
    try {
        root = pkg.part(theme_part);
    } catch (const Error&) {
        return theme;
    }
    if (!root) return theme;
    if (const auto* scheme = root->find("clrScheme")) {
        for (const auto& slot : scheme->children) {
            Theme bare;  // scheme slots hold literal colors
            if (auto c = color_in(&slot, bare)) theme.colors[std::string(slot.local_name())] = c->rgb;
        }
    }
    if (const auto* fonts = root->find("fontScheme")) {
        if (const auto* minor = fonts->path({"minorFont", "latin"}))
            theme.minor_font = std::string(minor->attr("typeface").value_or(theme.minor_font));
        if (const auto* major = fonts->path({"majorFont", "latin"}))
            theme.major_font = std::string(major->attr("typeface").value_or(theme.major_font));
    }
    return theme;
}

// ---------------------------------------------------------------------------
// Shapes

struct Transform {
    double ax = 1, bx = 0, ay = 1, by = 0;
    double rotation = 0;

    Geometry apply(Geometry g) const {
        Geometry out;
        out.x = std::llround(ax * static_cast<double>(g.x) + bx);
        out.y = std::llround(ay * static_cast<double>(g.y) + by);
        out.width = std::llround(ax * static_cast<double>(g.width));
        out.height = std::llround(ay * static_cast<double>(g.height));
        out.rotation = std::fmod(g.rotation + rotation, 360.0);
        return out;
    }
};

std::optional<Geometry> read_xfrm(const xml::Node* xfrm) {
    if (!xfrm) return std::nullopt;
    const auto* off = xfrm->child("off");
    const auto* ext = xfrm->child("ext");
    if (!off || !ext) return std::nullopt;
    Geometry g;
    g.x = to_int(off->attr("x")).value_or(0);
    g.y = to_int(off->attr("y")).value_or(0);
    g.width = std::max<long long>(0, to_int(ext->attr("cx")).value_or(0));
    g.height = std::max<long long>(0, to_int(ext->attr("cy")).value_or(0));
    g.rotation = static_cast<double>(to_int(xfrm->attr("rot")).value_or(0)) / 60000.0;
    return g;
}

struct PlaceholderRef {
    std::string type;  // defaults to "body" like PowerPoint
    std::optional<long long> idx;
};

std::optional<PlaceholderRef> placeholder_of(const xml::Node& shape) {
    const xml::Node* nv = nullptr;
    for (const auto& c : shape.children)
        if (c.local_name().substr(0, 2) == "nv") nv = &c;
    if (!nv) return std::nullopt;
    const auto* ph = nv->path({"nvPr", "ph"});
    if (!ph) return std::nullopt;
    PlaceholderRef ref;
    ref.type = std::string(ph->attr("type").value_or("body"));
    if (ref.type == "ctrTitle") ref.type = "title";
    if (ref.type == "subTitle") ref.type = "body";
    ref.idx = to_int(ph->attr("idx"));
    return ref;
}

struct SlideContext {
    Package& pkg;
    const Theme& theme;
    std::size_t slide_index;
    const xml::Node* layout = nullptr;
    const xml::Node* master = nullptr;
    IngestReport& report;
    std::vector<Element> elements;

    void skip(SkipReason reason, std::string detail) { report.skipped.push_back({slide_index, reason, std::move(detail)}); }
};

// Matching placeholder shape on `owner` (a layout or master): by idx first,
// then by type.
const xml::Node* matching_placeholder(const xml::Node* owner, const PlaceholderRef& ref, bool need_geometry) {
    if (!owner) return nullptr;
    const auto* tree = owner->path({"cSld", "spTree"});
    if (!tree) return nullptr;
    const xml::Node* by_type = nullptr;
    for (const auto& sp : tree->children) {
        auto other = placeholder_of(sp);
        if (!other) continue;
        if (need_geometry && !sp.path({"spPr", "xfrm"})) continue;
        if (ref.idx && other->idx == ref.idx) return &sp;
        if (!by_type && other->type == ref.type) by_type = &sp;
    }
    return by_type;
}

// Geometry of a placeholder on the layout, then the master.
std::optional<Geometry> inherited_geometry(const SlideContext& ctx, const PlaceholderRef& ref) {
    for (const xml::Node* owner : {ctx.layout, ctx.master})
        if (const auto* sp = matching_placeholder(owner, ref, true)) return read_xfrm(sp->path({"spPr", "xfrm"}));
    return std::nullopt;
}

// First-level paragraph properties inherited by a placeholder, outermost
// first: master text styles, master placeholder, layout placeholder.
std::vector<const xml::Node*> inherited_paragraph_styles(const SlideContext& ctx, const PlaceholderRef& ref) {
    std::vector<const xml::Node*> chain;
    if (ctx.master) {
        const char* style = ref.type == "title" ? "titleStyle" : "bodyStyle";
        if (const auto* lvl = ctx.master->path({"txStyles", style, "lvl1pPr"})) chain.push_back(lvl);
    }
    for (const xml::Node* owner : {ctx.master, ctx.layout})
        if (const auto* sp = matching_placeholder(owner, ref, false))
            if (const auto* lvl = sp->path({"txBody", "lstStyle", "lvl1pPr"})) chain.push_back(lvl);
    return chain;
}

Fill read_fill_from(const xml::Node* holder, const Theme& theme, bool& found) {
    Fill f;
    found = false;
    if (!holder) return f;
    for (const auto& c : holder->children) {
        const auto name = c.local_name();
        if (name == "noFill") {
            found = true;
            return f;
        }
        if (name == "solidFill") {
            found = true;
            if (auto color = color_in(&c, theme)) {
                f.mode = FillMode::solid;
                f.colors = {*color};
            }
            return f;
        }
        if (name == "gradFill") {
            found = true;
            std::vector<std::pair<long long, Color>> stops;
            if (const auto* lst = c.child("gsLst"))
                for (const auto* gs : lst->children_named("gs"))
                    if (auto color = color_in(gs, theme)) stops.emplace_back(to_int(gs->attr("pos")).value_or(0), *color);
            std::stable_sort(stops.begin(), stops.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto& s : stops) f.colors.push_back(s.second);
            if (f.colors.size() == 1) f.colors.push_back(f.colors.front());
            f.mode = f.colors.empty() ? FillMode::none : FillMode::gradient;
            return f;
        }
        if (name == "pattFill") {
            found = true;
            if (auto fg = color_in(c.child("fgClr"), theme)) f.colors.push_back(*fg);
            if (auto bg = color_in(c.child("bgClr"), theme)) f.colors.push_back(*bg);
            f.mode = f.colors.empty() ? FillMode::none : FillMode::pattern;
            return f;
        }
        if (name == "blipFill" || name == "grpFill") {
            found = true;
            return f;
        }
    }
    return f;
}

Fill shape_fill(const xml::Node& shape, const Theme& theme, bool is_line) {
    const auto* sppr = shape.child("spPr");
    bool found = false;
    Fill f = read_fill_from(is_line ? (sppr ? sppr->child("ln") : nullptr) : sppr, theme, found);
    if (found) return f;
    // Fall back to the shape style reference.
    if (const auto* style = shape.child("style")) {
        const auto* ref = style->child(is_line ? "lnRef" : "fillRef");
        if (ref && to_int(ref->attr("idx")).value_or(0) > 0)
            if (auto color = color_in(ref, theme)) return {FillMode::solid, {*color}, 0.0};
    }
    return {};
}

std::string resolve_font(std::string_view typeface, const Theme& theme) {
    if (typeface.empty() || typeface == "+mn-lt" || typeface == "+mn-ea" || typeface == "+mn-cs") return theme.minor_font;
    if (typeface == "+mj-lt" || typeface == "+mj-ea" || typeface == "+mj-cs") return theme.major_font;
    return std::string(typeface);
}

struct RunStyle {
    std::optional<double> size;
    std::optional<std::string> font;
    std::optional<Color> color;

    void overlay(const xml::Node* rpr, const Theme& theme) {
        if (!rpr) return;
        if (auto sz = to_int(rpr->attr("sz")); sz && *sz > 0) size = static_cast<double>(*sz) / 100.0;
        if (const auto* latin = rpr->child("latin")) font = resolve_font(latin->attr("typeface").value_or(""), theme);
        bool found = false;
        Fill f = read_fill_from(rpr, theme, found);
        if (found && f.mode == FillMode::solid) color = f.colors.front();
    }
};

void apply_paragraph_props(const xml::Node* ppr, TextFrame& tf) {
    if (!ppr) return;
    if (auto algn = ppr->attr("algn")) {
        if (*algn == "ctr") tf.alignment = Alignment::center;
        else if (*algn == "r") tf.alignment = Alignment::right;
        else if (*algn == "just" || *algn == "dist" || *algn == "justLow" || *algn == "thaiDist") tf.alignment = Alignment::justify;
        else tf.alignment = Alignment::left;
    }
    if (const auto* pct = ppr->path({"lnSpc", "spcPct"}))
        if (auto v = to_int(pct->attr("val")); v && *v > 0) tf.line_spacing = static_cast<double>(*v) / 100000.0;
}

std::optional<TextFrame> read_text(const xml::Node& shape, const Theme& theme,
                                   const std::vector<const xml::Node*>& inherited = {}) {
    const auto* body = shape.child("txBody");
    if (!body) return std::nullopt;

    TextFrame tf;
    RunStyle base;
    if (const auto* style = shape.child("style"))
        if (const auto* font_ref = style->child("fontRef")) {
            if (auto c = color_in(font_ref, theme)) base.color = c;
            base.font = font_ref->attr("idx").value_or("minor") == "major" ? theme.major_font : theme.minor_font;
        }
    for (const auto* lvl : inherited) {
        base.overlay(lvl->child("defRPr"), theme);
        apply_paragraph_props(lvl, tf);
    }
    if (const auto* lvl1 = body->path({"lstStyle", "lvl1pPr"})) {
        base.overlay(lvl1->child("defRPr"), theme);
        apply_paragraph_props(lvl1, tf);
    }

    std::string pending_breaks;
    bool first_paragraph = true;
    for (const auto* p : body->children_named("p")) {
        if (!first_paragraph) pending_breaks += '\n';
        const auto* ppr = p->child("pPr");
        if (first_paragraph) apply_paragraph_props(ppr, tf);
        first_paragraph = false;
        RunStyle para = base;
        if (ppr) para.overlay(ppr->child("defRPr"), theme);

        for (const auto& r : p->children) {
            const auto kind = r.local_name();
            if (kind == "br") {
                pending_breaks += '\n';
                continue;
            }
            if (kind != "r" && kind != "fld") continue;
            RunStyle style = para;
            style.overlay(r.child("rPr"), theme);
            const auto* t = r.child("t");
            TextRun run;
            run.text = pending_breaks + (t ? t->text : std::string());
            run.font_name = style.font.value_or(theme.minor_font);
            run.font_size = style.size.value_or(kDefaultFontSize);
            run.color = style.color.value_or(Color{scheme_lookup(theme, "tx1"), 1.0});
            if (run.text.empty()) continue;
            pending_breaks.clear();
            auto& runs = tf.runs;
            if (!runs.empty() && runs.back().font_name == run.font_name && runs.back().font_size == run.font_size &&
                runs.back().color == run.color)
                runs.back().text += run.text;
            else
                runs.push_back(std::move(run));
        }
    }
    if (tf.runs.empty()) return std::nullopt;
    // Trailing empty paragraphs carry no text.
    bool all_whitespace = std::all_of(tf.runs.begin(), tf.runs.end(), [](const TextRun& r) {
        return r.text.find_first_not_of(" \n\t") == std::string::npos;
    });
    if (all_whitespace) return std::nullopt;
    return tf;
}

void walk_tree(SlideContext& ctx, const xml::Node& tree, const Transform& xf);

void add_element(SlideContext& ctx, Element e) {
    e.id = "e" + std::to_string(ctx.elements.size());
    ctx.elements.push_back(std::move(e));
    ++ctx.report.parsed_elements;
}

void handle_sp(SlideContext& ctx, const xml::Node& sp, const Transform& xf) {
    const auto* sppr = sp.child("spPr");
    const auto ph = placeholder_of(sp);
    if (ph && (ph->type == "tbl" || ph->type == "chart" || ph->type == "dgm" || ph->type == "clipArt")) {
        ctx.skip(ph->type == "tbl" ? SkipReason::table : ph->type == "chart" ? SkipReason::chart : SkipReason::other,
                 "empty " + ph->type + " placeholder");
        return;
    }

    std::optional<Geometry> geom = read_xfrm(sppr ? sppr->child("xfrm") : nullptr);
    if (!geom && ph) geom = inherited_geometry(ctx, *ph);
    if (!geom) {
        ctx.skip(SkipReason::other, "shape without resolvable position");
        return;
    }

    Element e;
    e.position = xf.apply(*geom);
    if (ph && (ph->type == "pic" || ph->type == "media")) {
        e.kind = Placeholder{ph->type == "media" ? MediaKind::video : MediaKind::image};
        add_element(ctx, std::move(e));
        return;
    }

    std::string name = "rectangle";
    if (sppr && sppr->child("custGeom")) {
        ctx.skip(SkipReason::unsupported_shape, "custom geometry");
        return;
    }
    if (const auto* prst = sppr ? sppr->child("prstGeom") : nullptr) {
        const auto preset = prst->attr("prst").value_or("rect");
        auto mapped = ShapeRegistry::instance().name_for_preset(preset);
        if (!mapped) {
            ctx.skip(SkipReason::unsupported_shape, "preset " + std::string(preset));
            return;
        }
        name = *mapped;
    }
    e.kind = AutoShape{name};
    e.fill = shape_fill(sp, ctx.theme, name == "line");
    e.text = read_text(sp, ctx.theme, ph ? inherited_paragraph_styles(ctx, *ph) : std::vector<const xml::Node*>{});
    add_element(ctx, std::move(e));
}

void handle_connector(SlideContext& ctx, const xml::Node& cxn, const Transform& xf) {
    const auto* sppr = cxn.child("spPr");
    const auto* prst = sppr ? sppr->child("prstGeom") : nullptr;
    const auto preset = prst ? prst->attr("prst").value_or("line") : std::string_view("line");
    auto geom = read_xfrm(sppr ? sppr->child("xfrm") : nullptr);
    if ((preset != "line" && preset != "straightConnector1") || !geom) {
        ctx.skip(SkipReason::unsupported_shape, "connector " + std::string(preset));
        return;
    }
    Element e;
    e.kind = AutoShape{"line"};
    e.position = xf.apply(*geom);
    e.fill = shape_fill(cxn, ctx.theme, true);
    add_element(ctx, std::move(e));
}

void handle_pic(SlideContext& ctx, const xml::Node& pic, const Transform& xf) {
    const auto* sppr = pic.child("spPr");
    std::optional<Geometry> geom = read_xfrm(sppr ? sppr->child("xfrm") : nullptr);
    const auto ph = placeholder_of(pic);
    if (!geom && ph) geom = inherited_geometry(ctx, *ph);
    if (!geom) {
        ctx.skip(SkipReason::other, "picture without resolvable position");
        return;
    }
    const auto* nvpr = pic.path({"nvPicPr", "nvPr"});
    bool video = false;
    if (nvpr) {
        if (nvpr->child("audioFile") || nvpr->child("audioCd") || nvpr->child("wavAudioFile")) {
            ctx.skip(SkipReason::other, "audio");
            return;
        }
        video = nvpr->child("videoFile") || nvpr->child("quickTimeFile") || nvpr->find("media");
    }
    Element e;
    e.kind = Placeholder{video ? MediaKind::video : MediaKind::image};
    e.position = xf.apply(*geom);
    add_element(ctx, std::move(e));
    ctx.skip(SkipReason::media_payload_dropped, video ? "video" : "image");
}

void handle_graphic_frame(SlideContext& ctx, const xml::Node& frame) {
    const auto* data = frame.find("graphicData");
    const auto uri = data ? data->attr("uri").value_or("") : std::string_view();
    if (uri.find("/table") != std::string_view::npos) ctx.skip(SkipReason::table, "table");
    else if (uri.find("chart") != std::string_view::npos) ctx.skip(SkipReason::chart, "chart");
    else ctx.skip(SkipReason::other, "graphic frame " + std::string(uri));
}

void handle_group(SlideContext& ctx, const xml::Node& grp, const Transform& parent) {
    Transform local;
    if (const auto* xfrm = grp.path({"grpSpPr", "xfrm"})) {
        const auto* off = xfrm->child("off");
        const auto* ext = xfrm->child("ext");
        const auto* ch_off = xfrm->child("chOff");
        const auto* ch_ext = xfrm->child("chExt");
        if (off && ext && ch_off && ch_ext) {
            const double cx = static_cast<double>(to_int(ch_ext->attr("cx")).value_or(0));
            const double cy = static_cast<double>(to_int(ch_ext->attr("cy")).value_or(0));
            local.ax = cx > 0 ? static_cast<double>(to_int(ext->attr("cx")).value_or(0)) / cx : 1.0;
            local.ay = cy > 0 ? static_cast<double>(to_int(ext->attr("cy")).value_or(0)) / cy : 1.0;
            local.bx = static_cast<double>(to_int(off->attr("x")).value_or(0)) - local.ax * static_cast<double>(to_int(ch_off->attr("x")).value_or(0));
            local.by = static_cast<double>(to_int(off->attr("y")).value_or(0)) - local.ay * static_cast<double>(to_int(ch_off->attr("y")).value_or(0));
        }
        local.rotation = static_cast<double>(to_int(xfrm->attr("rot")).value_or(0)) / 60000.0;
    }
    Transform combined;
    combined.ax = parent.ax * local.ax;
    combined.bx = parent.ax * local.bx + parent.bx;
    combined.ay = parent.ay * local.ay;
    combined.by = parent.ay * local.by + parent.by;
    combined.rotation = parent.rotation + local.rotation;
    walk_tree(ctx, grp, combined);
}

void walk_tree(SlideContext& ctx, const xml::Node& tree, const Transform& xf) {
    for (const auto& child : tree.children) {
        const auto name = child.local_name();
        if (name == "sp") handle_sp(ctx, child, xf);
        else if (name == "pic") handle_pic(ctx, child, xf);
        else if (name == "grpSp") handle_group(ctx, child, xf);
        else if (name == "cxnSp") handle_connector(ctx, child, xf);
        else if (name == "graphicFrame") handle_graphic_frame(ctx, child);
        else if (name == "AlternateContent" || name == "contentPart") ctx.skip(SkipReason::other, std::string(name));
    }
}

}  // namespace

std::string_view to_string(SkipReason r) { return to_string_impl(r); }

IngestResult load_pptx(std::string_view bytes, std::string_view source_name) {
    zip::Reader zip(bytes);
    Package pkg(zip);

    std::string presentation_part;
    if (auto office = pkg.first_of_type("", "/officeDocument"); office && pkg.has(office->target))
        presentation_part = office->target;
    else if (pkg.has("ppt/presentation.xml"))
        presentation_part = "ppt/presentation.xml";
    else
        throw Error(ErrorKind::missing_presentation_part, "missing presentation part");

    const xml::Node* presentation = nullptr;
    try {
        presentation = pkg.part(presentation_part);
    } catch (const Error& e) {
        throw Error(ErrorKind::ingest, std::string("unreadable presentation part: ") + e.what());
    }
    if (!presentation || presentation->local_name() != "presentation")
        throw Error(ErrorKind::missing_presentation_part, "missing presentation part");

    IngestResult result;
    Emu width = 12192000, height = 6858000;
    if (const auto* size = presentation->child("sldSz")) {
        width = to_int(size->attr("cx")).value_or(width);
        height = to_int(size->attr("cy")).value_or(height);
    }
    if (width <= 0 || height <= 0) throw Error(ErrorKind::ingest, "invalid slide size");

    const Theme theme = load_theme(pkg, presentation_part);

    if (auto core = pkg.first_of_type("", "/core-properties")) {
        try {
            if (const auto* root = pkg.part(core->target))
                if (const auto* title = root->child("title")) result.deck.metadata.title = title->text;
        } catch (const Error&) {
        }
    }

    std::map<std::string, std::string> slide_targets;
    for (const auto& rel : pkg.relationships(presentation_part))
        if (type_is(rel, "/slide")) slide_targets[rel.id] = rel.target;

    std::size_t slide_index = 0;
    if (const auto* list = presentation->child("sldIdLst")) {
        for (const auto* sld : list->children_named("sldId")) {
            const std::size_t index = slide_index++;
            auto rid = sld->attr("r:id");
            auto target = rid ? slide_targets.find(std::string(*rid)) : slide_targets.end();
            if (target == slide_targets.end()) {
                result.report.skipped.push_back({index, SkipReason::other, "slide relationship missing"});
                continue;
            }
            const std::string& part_name = target->second;
            SlideContext ctx{pkg, theme, index, nullptr, nullptr, result.report, {}};
            const auto parsed_before = result.report.parsed_elements;
            const auto skipped_before = result.report.skipped.size();
            try {
                const xml::Node* slide = pkg.part(part_name);
                if (!slide) throw Error(ErrorKind::ingest, "slide part missing");
                if (auto layout = pkg.first_of_type(part_name, "/slideLayout")) {
                    try {
                        ctx.layout = pkg.part(layout->target);
                        if (auto master = pkg.first_of_type(layout->target, "/slideMaster")) ctx.master = pkg.part(master->target);
                    } catch (const Error&) {
                        ctx.layout = nullptr;
                        ctx.master = nullptr;
                    }
                }
                const auto* tree = slide->path({"cSld", "spTree"});
                if (!tree) throw Error(ErrorKind::ingest, "slide has no shape tree");
                walk_tree(ctx, *tree, Transform{});
            } catch (const Error& e) {
                result.report.parsed_elements = parsed_before;
                result.report.skipped.resize(skipped_before);
                result.report.skipped.push_back({index, SkipReason::other, std::string("malformed slide: ") + e.what()});
                continue;
            }
            SlideDoc doc;
            doc.source_id = std::string(source_name) + "#slide" + std::to_string(index + 1);
            doc.canvas_width = width;
            doc.canvas_height = height;
            doc.elements = std::move(ctx.elements);
            result.deck.slides.push_back(std::move(doc));
        }
    }
    result.deck.metadata.slide_count = result.deck.slides.size();
    return result;
}

}  // namespace slidelab
