#pragma once

#include <string>
#include <vector>

#include "slidelab/model.hpp"

namespace slidelab {

enum class ChangeKind { added, removed, modified };

struct ElementDiff {
    std::string id;
    ChangeKind change = ChangeKind::modified;
    /// Field paths such as "position.x" or "text.runs"; only for `modified`.
    std::vector<std::string> fields;
    bool operator==(const ElementDiff&) const = default;
};

/// Pseudo id used for document-level differences (canvas size, source id).
inline constexpr const char* kDocumentDiffId = "$document";

struct DiffOptions {
    bool ignore_status = false;
};

/// Elements are matched by id. Relative order changes among common elements
/// show up as a "z_order" field. Empty iff the documents are equal (modulo
/// statuses when ignore_status is set).
std::vector<ElementDiff> diff(const SlideDoc& a, const SlideDoc& b, DiffOptions opts = {});

/// Field paths that differ between two elements with the same id.
std::vector<std::string> element_field_changes(const Element& a, const Element& b, bool ignore_status);

std::string_view to_string(ChangeKind c);

}  // namespace slidelab
