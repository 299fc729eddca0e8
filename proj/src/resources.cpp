#include "slidelab/resources.hpp"

#include <string>

#include "slidelab/error.hpp"

namespace slidelab {

std::string_view resource(std::string_view name) {
    const auto& table = embedded_resources();
    auto it = table.find(name);
    if (it == table.end()) throw Error(ErrorKind::io, "no such resource: " + std::string(name));
    return it->second;
}

}  // namespace slidelab
