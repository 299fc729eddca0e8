#include "slidelab/slide_json.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

#include <nlohmann/json.hpp>

#include "slidelab/error.hpp"
#include "slidelab/shape_registry.hpp"
#include "slidelab/validate.hpp"

namespace slidelab {

using ojson = nlohmann::ordered_json;

namespace {

ojson color_json(const Color& c) {
    ojson j;
    j["rgb"] = c.rgb;
    j["alpha"] = c.alpha;
    return j;
}

ojson element_json(const Element& e, bool write_status) {
    ojson j;
    j["id"] = e.id;
    if (write_status) j["status"] = std::string(to_string(e.status));
    ojson kind;
    if (const auto* a = std::get_if<AutoShape>(&e.kind))
        kind["auto_shape"] = a->name;
    else
        kind["placeholder"] = std::string(to_string(std::get<Placeholder>(e.kind).media));
    j["kind"] = std::move(kind);

    ojson pos;
    pos["x"] = e.position.x;
    pos["y"] = e.position.y;
    pos["width"] = e.position.width;
    pos["height"] = e.position.height;
    pos["rotation"] = e.position.rotation;
    j["position"] = std::move(pos);

    ojson fill;
    fill["mode"] = std::string(to_string(e.fill.mode));
    fill["colors"] = ojson::array();
    for (const auto& c : e.fill.colors) fill["colors"].push_back(color_json(c));
    fill["transparency"] = e.fill.transparency;
    j["fill"] = std::move(fill);

    if (e.text) {
        ojson text;
        text["runs"] = ojson::array();
        for (const auto& r : e.text->runs) {
            ojson run;
            run["text"] = r.text;
            run["font_name"] = r.font_name;
            run["font_size"] = r.font_size;
            run["color"] = color_json(r.color);
            text["runs"].push_back(std::move(run));
        }
        text["line_spacing"] = e.text->line_spacing;
        text["alignment"] = std::string(to_string(e.text->alignment));
        j["text"] = std::move(text);
    }
    return j;
}

// Reads one schema object, enforcing key rules according to the mode.
class Reader {
public:
    explicit Reader(ParseMode mode) : mode_(mode) {}

    SlideDoc doc(const ojson& j) {
        const std::string path = "$";
        expect_object(j, path);
        check_keys(j, path, {"source_id", "canvas_width", "canvas_height", "elements"}, {});
        SlideDoc d;
        d.source_id = string_at(j, path, "source_id");
        d.canvas_width = integer_at(j, path, "canvas_width");
        d.canvas_height = integer_at(j, path, "canvas_height");
        const ojson& els = member(j, path, "elements");
        if (!els.is_array()) throw SchemaError(path + ".elements", "expected array");
        for (std::size_t i = 0; i < els.size(); ++i)
            d.elements.push_back(element(els[i], path + ".elements[" + std::to_string(i) + "]"));
        return d;
    }

private:
    bool tolerant() const { return mode_ == ParseMode::tolerant; }

    static void expect_object(const ojson& j, const std::string& path) {
        if (!j.is_object()) throw SchemaError(path, "expected object");
    }

    void check_keys(const ojson& j, const std::string& path, std::initializer_list<const char*> order,
                    std::initializer_list<const char*> optional) const {
        const std::vector<std::string> expected(order.begin(), order.end());
        std::ptrdiff_t last = -1;
        for (const auto& [key, value] : j.items()) {
            auto it = std::find(expected.begin(), expected.end(), key);
            if (it == expected.end()) {
                if (tolerant()) continue;
                throw SchemaError(path + "." + key, "unknown key");
            }
            const auto idx = it - expected.begin();
            if (!tolerant() && idx < last) throw SchemaError(path + "." + key, "key out of canonical order");
            last = idx;
        }
        if (tolerant()) return;
        for (const auto& key : expected) {
            const bool opt = std::any_of(optional.begin(), optional.end(), [&](const char* o) { return key == o; });
            if (!opt && !j.contains(key)) throw SchemaError(path + "." + key, "missing required key");
        }
    }

    static const ojson& member(const ojson& j, const std::string& path, const char* key) {
        auto it = j.find(key);
        if (it == j.end()) throw SchemaError(path + "." + key, "missing required key");
        return *it;
    }

    static std::string string_at(const ojson& j, const std::string& path, const char* key) {
        const ojson& v = member(j, path, key);
        if (!v.is_string()) throw SchemaError(path + "." + key, "expected string");
        return v.get<std::string>();
    }

    static Emu integer_at(const ojson& j, const std::string& path, const char* key) {
        const ojson& v = member(j, path, key);
        if (!v.is_number_integer()) throw SchemaError(path + "." + key, "expected integer");
        return v.get<Emu>();
    }

    double number_at(const ojson& j, const std::string& path, const char* key, double fallback) const {
        auto it = j.find(key);
        if (it == j.end()) {
            if (tolerant()) return fallback;
            throw SchemaError(path + "." + key, "missing required key");
        }
        if (!it->is_number()) throw SchemaError(path + "." + key, "expected number");
        return it->get<double>();
    }

    Color color(const ojson& j, const std::string& path) const {
        expect_object(j, path);
        check_keys(j, path, {"rgb", "alpha"}, {});
        Color c;
        c.rgb = string_at(j, path, "rgb");
        if (tolerant()) std::transform(c.rgb.begin(), c.rgb.end(), c.rgb.begin(), [](unsigned char ch) { return std::toupper(ch); });
        if (c.rgb.size() != 6 ||
            !std::all_of(c.rgb.begin(), c.rgb.end(), [](char ch) { return (ch >= '0' && ch <= '9') || (ch >= 'A' && ch <= 'F'); }))
            throw SchemaError(path + ".rgb", "expected six uppercase hex digits");
        c.alpha = number_at(j, path, "alpha", 1.0);
        return c;
    }

public:
    Element element(const ojson& j, const std::string& path) const {
        expect_object(j, path);
        check_keys(j, path, {"id", "status", "kind", "position", "fill", "text"}, {"status", "text"});
        Element e;
        e.id = string_at(j, path, "id");
        if (auto it = j.find("status"); it != j.end()) {
            if (!it->is_string()) throw SchemaError(path + ".status", "expected string");
            auto s = status_from(it->get<std::string>());
            if (!s) throw SchemaError(path + ".status", "expected TENTATIVE or FINAL");
            e.status = *s;
        }

        const std::string kpath = path + ".kind";
        const ojson& kind = member(j, path, "kind");
        expect_object(kind, kpath);
        if (kind.contains("auto_shape")) {
            check_keys(kind, kpath, {"auto_shape"}, {});
            std::string name = string_at(kind, kpath, "auto_shape");
            if (!ShapeRegistry::instance().contains(name))
                throw ScopeError(e.id, "element " + e.id + ": auto_shape \"" + name + "\" is outside the design scope");
            e.kind = AutoShape{std::move(name)};
        } else if (kind.contains("placeholder")) {
            check_keys(kind, kpath, {"placeholder"}, {});
            auto media = media_kind_from(string_at(kind, kpath, "placeholder"));
            if (!media) throw SchemaError(kpath + ".placeholder", "expected image or video");
            e.kind = Placeholder{*media};
        } else {
            throw SchemaError(kpath, "expected auto_shape or placeholder");
        }

        const std::string ppath = path + ".position";
        const ojson& pos = member(j, path, "position");
        expect_object(pos, ppath);
        check_keys(pos, ppath, {"x", "y", "width", "height", "rotation"}, {});
        e.position.x = integer_at(pos, ppath, "x");
        e.position.y = integer_at(pos, ppath, "y");
        e.position.width = integer_at(pos, ppath, "width");
        e.position.height = integer_at(pos, ppath, "height");
        e.position.rotation = number_at(pos, ppath, "rotation", 0.0);

        const std::string fpath = path + ".fill";
        const ojson& fill = member(j, path, "fill");
        expect_object(fill, fpath);
        check_keys(fill, fpath, {"mode", "colors", "transparency"}, {});
        auto mode = fill_mode_from(string_at(fill, fpath, "mode"));
        if (!mode) throw SchemaError(fpath + ".mode", "expected solid, gradient, pattern or none");
        e.fill.mode = *mode;
        if (auto it = fill.find("colors"); it != fill.end()) {
            if (!it->is_array()) throw SchemaError(fpath + ".colors", "expected array");
            for (std::size_t i = 0; i < it->size(); ++i)
                e.fill.colors.push_back(color((*it)[i], fpath + ".colors[" + std::to_string(i) + "]"));
        } else if (!tolerant()) {
            throw SchemaError(fpath + ".colors", "missing required key");
        }
        e.fill.transparency = number_at(fill, fpath, "transparency", 0.0);

        if (auto it = j.find("text"); it != j.end() && !it->is_null()) {
            const std::string tpath = path + ".text";
            expect_object(*it, tpath);
            check_keys(*it, tpath, {"runs", "line_spacing", "alignment"}, {});
            TextFrame tf;
            const ojson& runs = member(*it, tpath, "runs");
            if (!runs.is_array()) throw SchemaError(tpath + ".runs", "expected array");
            for (std::size_t i = 0; i < runs.size(); ++i) {
                const std::string rpath = tpath + ".runs[" + std::to_string(i) + "]";
                const ojson& r = runs[i];
                expect_object(r, rpath);
                check_keys(r, rpath, {"text", "font_name", "font_size", "color"}, {});
                TextRun run;
                run.text = string_at(r, rpath, "text");
                run.font_name = string_at(r, rpath, "font_name");
                run.font_size = number_at(r, rpath, "font_size", 18.0);
                if (auto c = r.find("color"); c != r.end())
                    run.color = color(*c, rpath + ".color");
                else if (!tolerant())
                    throw SchemaError(rpath + ".color", "missing required key");
                tf.runs.push_back(std::move(run));
            }
            tf.line_spacing = number_at(*it, tpath, "line_spacing", 1.0);
            if (auto a = it->find("alignment"); a != it->end()) {
                if (!a->is_string()) throw SchemaError(tpath + ".alignment", "expected string");
                auto al = alignment_from(a->get<std::string>());
                if (!al) throw SchemaError(tpath + ".alignment", "expected left, center, right or justify");
                tf.alignment = *al;
            } else if (!tolerant()) {
                throw SchemaError(tpath + ".alignment", "missing required key");
            }
            e.text = std::move(tf);
        }
        return e;
    }

private:
    ParseMode mode_;
};

}  // namespace

Json to_json_value(const SlideDoc& doc) {
    ensure_valid(doc);
    const bool write_status = doc.any_tentative();
    ojson j;
    j["source_id"] = doc.source_id;
    j["canvas_width"] = doc.canvas_width;
    j["canvas_height"] = doc.canvas_height;
    j["elements"] = ojson::array();
    for (const auto& e : doc.elements) j["elements"].push_back(element_json(e, write_status));
    return j;
}

std::string to_json(const SlideDoc& doc) { return to_json_value(doc).dump(); }

SlideDoc from_json_value(const Json& j, ParseMode mode) { return Reader(mode).doc(j); }

Json element_to_json_value(const Element& e) { return element_json(e, true); }

Element element_from_json_value(const Json& j) { return Reader(ParseMode::strict).element(j, "$"); }

SlideDoc from_json(std::string_view text, ParseMode mode) {
    std::string buffer = mode == ParseMode::tolerant ? strip_trailing_commas(text) : std::string(text);
    ojson j;
    try {
        j = ojson::parse(buffer);
    } catch (const ojson::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    return Reader(mode).doc(j);
}

std::size_t estimate_token_length(std::string_view text) { return (text.size() + 3) / 4; }

std::string strip_trailing_commas(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            out += c;
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == ',') {
            std::size_t k = i + 1;
            while (k < text.size() && (text[k] == ' ' || text[k] == '\n' || text[k] == '\r' || text[k] == '\t')) ++k;
            if (k < text.size() && (text[k] == '}' || text[k] == ']')) continue;
        }
        out += c;
    }
    return out;
}

}  // namespace slidelab
