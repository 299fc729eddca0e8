#include "slidelab/shape_registry.hpp"

#include <sstream>

#include "slidelab/resources.hpp"

namespace slidelab {

const ShapeRegistry& ShapeRegistry::instance() {
    static const ShapeRegistry registry = parse(resource("shapes.txt"));
    return registry;
}

ShapeRegistry ShapeRegistry::parse(std::string_view text) {
    ShapeRegistry reg;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        Entry e;
        if (fields >> e.name >> e.preset) reg.entries_.push_back(std::move(e));
    }
    return reg;
}

bool ShapeRegistry::contains(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return true;
    return false;
}

std::optional<std::string> ShapeRegistry::preset_for(std::string_view name) const {
    for (const auto& e : entries_)
        if (e.name == name) return e.preset;
    return std::nullopt;
}

std::optional<std::string> ShapeRegistry::name_for_preset(std::string_view preset) const {
    for (const auto& e : entries_)
        if (e.preset == preset) return e.name;
    return std::nullopt;
}

}  // namespace slidelab
