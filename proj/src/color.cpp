#include "slidelab/color.hpp"

#include <algorithm>
#include <cmath>

namespace slidelab {

namespace {
int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

double hue_to_channel(double p, double q, double t) {
    if (t < 0) t += 1;
    if (t > 1) t -= 1;
    if (t < 1.0 / 6) return p + (q - p) * 6 * t;
    if (t < 0.5) return q;
    if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
    return p;
}
}  // namespace

bool parse_hex(std::string_view hex, Rgb& out) {
    if (hex.size() != 6) return false;
    int v[6];
    for (int i = 0; i < 6; ++i)
        if ((v[i] = hex_digit(hex[i])) < 0) return false;
    out = {v[0] * 16 + v[1], v[2] * 16 + v[3], v[4] * 16 + v[5]};
    return true;
}

std::string to_hex(Rgb c) {
    static const char* digits = "0123456789ABCDEF";
    std::string s(6, '0');
    const int ch[3] = {std::clamp(c.r, 0, 255), std::clamp(c.g, 0, 255), std::clamp(c.b, 0, 255)};
    for (int i = 0; i < 3; ++i) {
        s[2 * i] = digits[ch[i] >> 4];
        s[2 * i + 1] = digits[ch[i] & 15];
    }
    return s;
}

Hsl to_hsl(Rgb c) {
    const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    Hsl out;
    out.l = (mx + mn) / 2;
    if (mx == mn) return out;
    const double d = mx - mn;
    out.s = out.l > 0.5 ? d / (2 - mx - mn) : d / (mx + mn);
    double h;
    if (mx == r) h = (g - b) / d + (g < b ? 6 : 0);
    else if (mx == g) h = (b - r) / d + 2;
    else h = (r - g) / d + 4;
    out.h = h * 60.0;
    return out;
}

Rgb to_rgb(Hsl c) {
    const double h = std::fmod(std::fmod(c.h, 360.0) + 360.0, 360.0) / 360.0;
    const double s = std::clamp(c.s, 0.0, 1.0), l = std::clamp(c.l, 0.0, 1.0);
    double r = l, g = l, b = l;
    if (s > 0) {
        const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
        const double p = 2 * l - q;
        r = hue_to_channel(p, q, h + 1.0 / 3);
        g = hue_to_channel(p, q, h);
        b = hue_to_channel(p, q, h - 1.0 / 3);
    }
    auto to8 = [](double v) { return static_cast<int>(std::lround(v * 255.0)); };
    return {to8(r), to8(g), to8(b)};
}

std::string rotate_hue(std::string_view hex, double degrees) {
    Rgb c;
    if (!parse_hex(hex, c)) return std::string(hex);
    Hsl h = to_hsl(c);
    h.h += degrees;
    return to_hex(to_rgb(h));
}

}  // namespace slidelab
