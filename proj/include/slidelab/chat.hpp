#pragma once

// Chat template shared by training-pair generation and the remote backends:
// a fixed system prompt per role plus the slide JSON as the user turn.

#include <string>
#include <string_view>
#include <vector>

#include "slidelab/model.hpp"

namespace slidelab {

enum class Role { reviewer, contributor };

std::string_view to_string(Role r);

struct ChatMessage {
    std::string role;
    std::string content;
    bool operator==(const ChatMessage&) const = default;
};

/// Versioned system prompt shipped under resources/prompts/.
std::string_view system_prompt(Role r);

/// Reviewer input has its statuses reset to FINAL; contributor input keeps
/// them. Throws Error(budget) when the user turn exceeds the token budget.
std::vector<ChatMessage> format_prompt(Role role, const SlideDoc& doc);

/// Strips prose and code fences around the outermost JSON object and trims
/// unmatched trailing closers. Returns the candidate text; never throws.
std::string repair_response(std::string_view text);

/// Tolerant parse after the repair pass. Throws Error(parse/schema/scope)
/// when the response is still unusable.
SlideDoc parse_response(Role role, std::string_view text);

}  // namespace slidelab
