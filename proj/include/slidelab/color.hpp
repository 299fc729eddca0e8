#pragma once

#include <array>
#include <string>
#include <string_view>

namespace slidelab {

struct Rgb {
    int r = 0, g = 0, b = 0;  // 0..255
};

struct Hsl {
    double h = 0;  // degrees [0,360)
    double s = 0;  // [0,1]
    double l = 0;  // [0,1]
};

/// Parses six hex digits (either case); returns false on bad input.
bool parse_hex(std::string_view hex, Rgb& out);
std::string to_hex(Rgb c);

Hsl to_hsl(Rgb c);
Rgb to_rgb(Hsl c);

/// Rotates the hue of `hex` by `degrees`, keeping saturation and lightness.
std::string rotate_hue(std::string_view hex, double degrees);

inline constexpr std::string_view kDefaultTextRgb = "000000";
inline constexpr std::string_view kDefaultFillRgb = "FFFFFF";

inline bool is_default_rgb(std::string_view rgb) { return rgb == kDefaultTextRgb || rgb == kDefaultFillRgb; }

}  // namespace slidelab
