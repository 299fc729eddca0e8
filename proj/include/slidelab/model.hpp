#pragma once

// Slide data model: a slide is an ordered list of design elements on a
// fixed-size canvas. Geometry is integer EMU throughout.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace slidelab {

using Emu = std::int64_t;

inline constexpr Emu kEmuPerInch = 914400;
inline constexpr Emu kEmuPerPoint = 12700;
/// 96 dpi, the default render resolution.
inline constexpr Emu kEmuPerPixel = 9525;

enum class MediaKind { image, video };

struct AutoShape {
    std::string name;  // one of the registry names, see shape_registry.hpp
    bool operator==(const AutoShape&) const = default;
};

struct Placeholder {
    MediaKind media = MediaKind::image;
    bool operator==(const Placeholder&) const = default;
};

using ShapeKind = std::variant<AutoShape, Placeholder>;

inline bool is_placeholder(const ShapeKind& k) { return std::holds_alternative<Placeholder>(k); }
std::string kind_label(const ShapeKind& k);

struct Geometry {
    Emu x = 0;
    Emu y = 0;
    Emu width = 0;
    Emu height = 0;
    double rotation = 0.0;  // degrees

    Emu right() const { return x + width; }
    Emu bottom() const { return y + height; }
    bool operator==(const Geometry&) const = default;
};

struct Color {
    std::string rgb = "000000";  // six uppercase hex digits
    double alpha = 1.0;
    bool operator==(const Color&) const = default;
};

enum class FillMode { solid, gradient, pattern, none };

struct Fill {
    FillMode mode = FillMode::none;
    std::vector<Color> colors;
    double transparency = 0.0;
    bool operator==(const Fill&) const = default;
};

enum class Alignment { left, center, right, justify };

struct TextRun {
    std::string text;
    std::string font_name;
    double font_size = 18.0;  // points
    Color color;
    bool operator==(const TextRun&) const = default;
};

struct TextFrame {
    std::vector<TextRun> runs;
    double line_spacing = 1.0;
    Alignment alignment = Alignment::left;
    bool operator==(const TextFrame&) const = default;
};

enum class Status { final, tentative };

struct Element {
    std::string id;
    ShapeKind kind = AutoShape{"rectangle"};
    Geometry position;
    Fill fill;
    std::optional<TextFrame> text;
    Status status = Status::final;

    bool tentative() const { return status == Status::tentative; }
    bool has_text() const { return text.has_value(); }
    bool operator==(const Element&) const = default;
};

struct SlideDoc {
    std::string source_id;
    Emu canvas_width = 12192000;
    Emu canvas_height = 6858000;
    std::vector<Element> elements;

    const Element* find(std::string_view id) const;
    Element* find(std::string_view id);
    /// Position in z-order, or -1.
    std::ptrdiff_t index_of(std::string_view id) const;

    std::set<std::string> tentative_ids() const;
    bool any_tentative() const;
    bool operator==(const SlideDoc&) const = default;
};

std::string_view to_string(MediaKind m);
std::string_view to_string(FillMode m);
std::string_view to_string(Alignment a);
std::string_view to_string(Status s);

std::optional<MediaKind> media_kind_from(std::string_view s);
std::optional<FillMode> fill_mode_from(std::string_view s);
std::optional<Alignment> alignment_from(std::string_view s);
std::optional<Status> status_from(std::string_view s);

/// Copy of `doc` with every status reset to FINAL.
SlideDoc with_all_final(SlideDoc doc);
/// Copy of `doc` with every element TENTATIVE.
SlideDoc with_all_tentative(SlideDoc doc);

/// Smallest "e{n}" id not used in `doc`, with n greater than every numeric
/// suffix already present.
std::string fresh_element_id(const SlideDoc& doc);

}  // namespace slidelab
