#include "slidelab/model.hpp"

#include <charconv>

namespace slidelab {

std::string kind_label(const ShapeKind& k) {
    if (const auto* a = std::get_if<AutoShape>(&k)) return a->name;
    return "placeholder:" + std::string(to_string(std::get<Placeholder>(k).media));
}

const Element* SlideDoc::find(std::string_view id) const {
    for (const auto& e : elements)
        if (e.id == id) return &e;
    return nullptr;
}

Element* SlideDoc::find(std::string_view id) {
    for (auto& e : elements)
        if (e.id == id) return &e;
    return nullptr;
}

std::ptrdiff_t SlideDoc::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
        if (elements[i].id == id) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

std::set<std::string> SlideDoc::tentative_ids() const {
    std::set<std::string> out;
    for (const auto& e : elements)
        if (e.tentative()) out.insert(e.id);
    return out;
}

bool SlideDoc::any_tentative() const {
    for (const auto& e : elements)
        if (e.tentative()) return true;
    return false;
}

std::string_view to_string(MediaKind m) { return m == MediaKind::image ? "image" : "video"; }

std::string_view to_string(FillMode m) {
    switch (m) {
        case FillMode::solid: return "solid";
        case FillMode::gradient: return "gradient";
        case FillMode::pattern: return "pattern";
        case FillMode::none: return "none";
    }
    return "none";
}

std::string_view to_string(Alignment a) {
    switch (a) {
        case Alignment::left: return "left";
        case Alignment::center: return "center";
        case Alignment::right: return "right";
        case Alignment::justify: return "justify";
    }
    return "left";
}

std::string_view to_string(Status s) { return s == Status::tentative ? "TENTATIVE" : "FINAL"; }

std::optional<MediaKind> media_kind_from(std::string_view s) {
    if (s == "image") return MediaKind::image;
    if (s == "video") return MediaKind::video;
    return std::nullopt;
}

std::optional<FillMode> fill_mode_from(std::string_view s) {
    if (s == "solid") return FillMode::solid;
    if (s == "gradient") return FillMode::gradient;
    if (s == "pattern") return FillMode::pattern;
    if (s == "none") return FillMode::none;
    return std::nullopt;
}

std::optional<Alignment> alignment_from(std::string_view s) {
    if (s == "left") return Alignment::left;
    if (s == "center") return Alignment::center;
    if (s == "right") return Alignment::right;
    if (s == "justify") return Alignment::justify;
    return std::nullopt;
}

std::optional<Status> status_from(std::string_view s) {
    if (s == "TENTATIVE") return Status::tentative;
    if (s == "FINAL") return Status::final;
    return std::nullopt;
}

SlideDoc with_all_final(SlideDoc doc) {
    for (auto& e : doc.elements) e.status = Status::final;
    return doc;
}

SlideDoc with_all_tentative(SlideDoc doc) {
    for (auto& e : doc.elements) e.status = Status::tentative;
    return doc;
}

std::string fresh_element_id(const SlideDoc& doc) {
    long long next = 0;
    for (const auto& e : doc.elements) {
        if (e.id.size() < 2 || e.id[0] != 'e') continue;
        long long n = 0;
        auto [p, ec] = std::from_chars(e.id.data() + 1, e.id.data() + e.id.size(), n);
        if (ec == std::errc{} && p == e.id.data() + e.id.size() && n >= next) next = n + 1;
    }
    std::string id = "e" + std::to_string(next);
    while (doc.find(id)) id = "e" + std::to_string(++next);
    return id;
}

}  // namespace slidelab
