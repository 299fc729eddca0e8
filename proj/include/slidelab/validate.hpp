#pragma once

#include <string>
#include <vector>

#include "slidelab/model.hpp"

namespace slidelab {

struct Violation {
    std::vector<std::string> element_ids;  // empty for document-level rules
    std::string rule;
    std::string detail;
    bool operator==(const Violation&) const = default;
};

/// Every invariant of the slide model; empty iff the document is valid.
std::vector<Violation> validate(const SlideDoc& doc);

/// Throws ValidationError listing the offending ids when `doc` is invalid.
void ensure_valid(const SlideDoc& doc);

}  // namespace slidelab
