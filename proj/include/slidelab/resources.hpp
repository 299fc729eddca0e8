#pragma once

#include <map>
#include <string_view>

namespace slidelab {

/// Files shipped under resources/, compiled into the library.
const std::map<std::string_view, std::string_view>& embedded_resources();

/// Throws Error(io) when `name` is not a shipped resource.
std::string_view resource(std::string_view name);

}  // namespace slidelab
