#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "slidelab/pptx.hpp"

namespace slidelab::gen {

inline std::string fixture_path(const std::string& name) { return std::string(SLIDELAB_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline IngestResult load_fixture_deck(const std::string& name) {
    return load_pptx(read_fixture(name + ".pptx"), name);
}

}  // namespace slidelab::gen
