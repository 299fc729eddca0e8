#pragma once

// Minimal non-validating XML DOM, sufficient for OOXML parts. Names keep
// their prefix ("p:sp"); lookups compare local names so documents that use
// unusual prefixes still resolve. DTDs are skipped, never expanded.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slidelab::xml {

struct Node {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Node> children;
    /// Character data directly inside this element, entities decoded.
    std::string text;

    std::string_view local_name() const;

    /// First child with the given local name.
    const Node* child(std::string_view local) const;
    std::vector<const Node*> children_named(std::string_view local) const;
    /// Follows a chain of local names.
    const Node* path(std::initializer_list<std::string_view> locals) const;
    /// First descendant (depth-first) with the given local name.
    const Node* find(std::string_view local) const;

    /// Attribute by exact name, falling back to a local-name match.
    std::optional<std::string_view> attr(std::string_view name) const;
};

/// Throws slidelab::Error(parse) on malformed input.
Node parse(std::string_view text);

std::string escape(std::string_view raw);

}  // namespace slidelab::xml
