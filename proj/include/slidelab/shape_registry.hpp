#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slidelab {

/// The closed set of auto-shape names in the design scope, loaded from the
/// shipped shapes.txt. Each name maps to one DrawingML preset geometry.
class ShapeRegistry {
public:
    struct Entry {
        std::string name;
        std::string preset;
    };

    static const ShapeRegistry& instance();

    /// Parses "<name> <preset>" lines; '#' starts a comment.
    static ShapeRegistry parse(std::string_view text);

    bool contains(std::string_view name) const;
    std::optional<std::string> preset_for(std::string_view name) const;
    std::optional<std::string> name_for_preset(std::string_view preset) const;
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_;
};

}  // namespace slidelab
