#include "slidelab/chat.hpp"

#include "slidelab/error.hpp"
#include "slidelab/resources.hpp"
#include "slidelab/slide_json.hpp"

namespace slidelab {

std::string_view to_string(Role r) { return r == Role::reviewer ? "reviewer" : "contributor"; }

std::string_view system_prompt(Role r) {
    return resource(r == Role::reviewer ? "prompts/reviewer.txt" : "prompts/contributor.txt");
}

std::vector<ChatMessage> format_prompt(Role role, const SlideDoc& doc) {
    std::string user = to_json(role == Role::reviewer ? with_all_final(doc) : doc);
    const auto tokens = estimate_token_length(user);
    if (tokens >= kTokenBudget)
        throw Error(ErrorKind::budget, "slide " + doc.source_id + " needs " + std::to_string(tokens) +
                                           " proxy tokens, budget is " + std::to_string(kTokenBudget));
    return {{"system", std::string(system_prompt(role))}, {"user", std::move(user)}};
}

std::string repair_response(std::string_view text) {
    const auto open = text.find('{');
    if (open == std::string_view::npos) return std::string(text);
    text.remove_prefix(open);

    // Walk the object, tracking nesting outside strings; stop at the point
    // where the outermost object closes.
    std::vector<char> stack;
    bool in_string = false, escaped = false;
    std::size_t end = std::string_view::npos;
    for (std::size_t i = 0; i < text.size() && end == std::string_view::npos; ++i) {
        const char c = text[i];
        if (in_string) {
            if (escaped) escaped = false;
            else if (c == '\\') escaped = true;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == '{' || c == '[') stack.push_back(c);
        else if (c == '}' || c == ']') {
            if (stack.empty()) continue;
            stack.pop_back();
            if (stack.empty()) end = i + 1;
        }
    }
    if (end != std::string_view::npos) return std::string(text.substr(0, end));

    // Unterminated: a single missing final brace is repaired, anything
    // more is a truncated generation and stays broken.
    std::string out(text);
    while (!out.empty() && (out.back() == ' ' || out.back() == '\n' || out.back() == '\r' || out.back() == '\t' ||
                            out.back() == '`'))
        out.pop_back();
    if (!in_string && stack.size() == 1 && !out.empty() && (out.back() == '}' || out.back() == ']')) out += '}';
    return out;
}

SlideDoc parse_response(Role, std::string_view text) {
    return from_json(repair_response(text), ParseMode::tolerant);
}

}  // namespace slidelab
