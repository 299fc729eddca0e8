#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "slidelab/model.hpp"

namespace slidelab {

enum class ParseMode {
    /// Canonical key order, no unknown keys, every field present.
    strict,
    /// Any key order, unknown keys ignored, trailing commas removed, optional
    /// numeric fields defaulted. Used for model output.
    tolerant,
};

/// Canonical serialization. Throws ValidationError when `doc` violates an
/// invariant.
std::string to_json(const SlideDoc& doc);

/// Throws ParseError, SchemaError or ScopeError.
SlideDoc from_json(std::string_view text, ParseMode mode = ParseMode::strict);

/// Order-preserving JSON value, used wherever documents are embedded in
/// larger files (logs, traces, datasets).
using Json = nlohmann::ordered_json;

Json to_json_value(const SlideDoc& doc);
SlideDoc from_json_value(const Json& j, ParseMode mode = ParseMode::strict);
/// A single element; "status" is always written.
Json element_to_json_value(const Element& e);
Element element_from_json_value(const Json& j);

/// Budget proxy: ceil(bytes / 4). Not a tokenizer.
std::size_t estimate_token_length(std::string_view text);

inline constexpr std::size_t kTokenBudget = 2048;

/// Removes commas that directly precede '}' or ']' outside string literals.
std::string strip_trailing_commas(std::string_view text);

}  // namespace slidelab
