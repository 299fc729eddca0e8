#include "slidelab/xml.hpp"

#include <cstdint>

#include "slidelab/error.hpp"

namespace slidelab::xml {

namespace {

constexpr std::size_t kMaxDepth = 256;

std::string_view local_of(std::string_view qname) {
    auto colon = qname.find(':');
    return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Node document() {
        skip_misc();
        if (at_end() || s_[pos_] != '<') fail("expected root element");
        Node root = element(0);
        skip_misc();
        if (!at_end()) fail("content after root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorKind::parse, "xml: " + what + " at byte " + std::to_string(pos_));
    }

    bool at_end() const { return pos_ >= s_.size(); }
    bool starts_with(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

    void skip_ws() {
        while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
    }

    void skip_past(std::string_view terminator) {
        auto end = s_.find(terminator, pos_);
        if (end == std::string_view::npos) fail("unterminated construct");
        pos_ = end + terminator.size();
    }

    // Prolog, comments, processing instructions and doctype.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("\xEF\xBB\xBF")) pos_ += 3;
            else if (starts_with("<?")) skip_past("?>");
            else if (starts_with("<!--")) skip_past("-->");
            else if (starts_with("<!DOCTYPE")) skip_doctype();
            else return;
        }
    }

    void skip_doctype() {
        int depth = 0;
        while (!at_end()) {
            const char c = s_[pos_++];
            if (c == '[') ++depth;
            else if (c == ']') --depth;
            else if (c == '>' && depth <= 0) return;
        }
        fail("unterminated doctype");
    }

    std::string name() {
        const auto start = pos_;
        while (!at_end()) {
            const char c = s_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '>' || c == '/' || c == '=' || c == '<') break;
            ++pos_;
        }
        if (pos_ == start) fail("expected name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::string decode(std::string_view raw) const {
        std::string out;
        out.reserve(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != '&') {
                out += raw[i];
                continue;
            }
            const auto semi = raw.find(';', i);
            if (semi == std::string_view::npos) throw Error(ErrorKind::parse, "xml: unterminated entity");
            const auto ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "amp") out += '&';
            else if (ent == "quot") out += '"';
            else if (ent == "apos") out += '\'';
            else if (!ent.empty() && ent[0] == '#') {
                std::uint32_t cp = 0;
                const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
                const auto digits = ent.substr(hex ? 2 : 1);
                if (digits.empty() || digits.size() > 8) throw Error(ErrorKind::parse, "xml: bad character reference");
                for (char c : digits) {
                    int v;
                    if (c >= '0' && c <= '9') v = c - '0';
                    else if (hex && c >= 'a' && c <= 'f') v = c - 'a' + 10;
                    else if (hex && c >= 'A' && c <= 'F') v = c - 'A' + 10;
                    else throw Error(ErrorKind::parse, "xml: bad character reference");
                    cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
                }
                if (cp > 0x10FFFF) throw Error(ErrorKind::parse, "xml: character reference out of range");
                append_utf8(out, cp);
            } else {
                throw Error(ErrorKind::parse, "xml: unknown entity &" + std::string(ent) + ";");
            }
            i = semi;
        }
        return out;
    }

    // Iterative element parser; `depth` is the nesting of the first element.
    Node element(std::size_t) {
        std::vector<Node> stack;
        for (;;) {
            // At '<' of a start tag.
            ++pos_;
            Node node;
            node.name = name();
            bool self_closing = false;
            for (;;) {
                skip_ws();
                if (at_end()) fail("unterminated start tag");
                if (s_[pos_] == '/') {
                    if (!starts_with("/>")) fail("expected />");
                    pos_ += 2;
                    self_closing = true;
                    break;
                }
                if (s_[pos_] == '>') {
                    ++pos_;
                    break;
                }
                std::string key = name();
                skip_ws();
                if (at_end() || s_[pos_] != '=') fail("expected =");
                ++pos_;
                skip_ws();
                if (at_end() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("expected quoted attribute value");
                const char q = s_[pos_++];
                const auto end = s_.find(q, pos_);
                if (end == std::string_view::npos) fail("unterminated attribute value");
                node.attributes.emplace_back(std::move(key), decode(s_.substr(pos_, end - pos_)));
                pos_ = end + 1;
            }
            if (self_closing) {
                if (stack.empty()) return node;
                stack.back().children.push_back(std::move(node));
            } else {
                if (stack.size() >= kMaxDepth) fail("nesting too deep");
                stack.push_back(std::move(node));
            }

            // Content until the next start tag, or close tags.
            for (;;) {
                if (at_end()) fail("unexpected end of document");
                if (s_[pos_] != '<') {
                    const auto end = s_.find('<', pos_);
                    if (end == std::string_view::npos) fail("unexpected end of document");
                    stack.back().text += decode(s_.substr(pos_, end - pos_));
                    pos_ = end;
                    continue;
                }
                if (starts_with("<!--")) {
                    skip_past("-->");
                } else if (starts_with("<![CDATA[")) {
                    pos_ += 9;
                    const auto end = s_.find("]]>", pos_);
                    if (end == std::string_view::npos) fail("unterminated CDATA");
                    stack.back().text += s_.substr(pos_, end - pos_);
                    pos_ = end + 3;
                } else if (starts_with("<?")) {
                    skip_past("?>");
                } else if (starts_with("</")) {
                    pos_ += 2;
                    const auto closing = name();
                    skip_ws();
                    if (at_end() || s_[pos_] != '>') fail("expected >");
                    ++pos_;
                    if (closing != stack.back().name) fail("mismatched close tag </" + closing + ">");
                    Node done = std::move(stack.back());
                    stack.pop_back();
                    if (stack.empty()) return done;
                    stack.back().children.push_back(std::move(done));
                } else {
                    break;  // next start tag
                }
            }
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view Node::local_name() const { return local_of(name); }

const Node* Node::child(std::string_view local) const {
    for (const auto& c : children)
        if (c.local_name() == local) return &c;
    return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view local) const {
    std::vector<const Node*> out;
    for (const auto& c : children)
        if (c.local_name() == local) out.push_back(&c);
    return out;
}

const Node* Node::path(std::initializer_list<std::string_view> locals) const {
    const Node* cur = this;
    for (auto l : locals) {
        cur = cur->child(l);
        if (!cur) return nullptr;
    }
    return cur;
}

const Node* Node::find(std::string_view local) const {
    for (const auto& c : children) {
        if (c.local_name() == local) return &c;
        if (const Node* hit = c.find(local)) return hit;
    }
    return nullptr;
}

std::optional<std::string_view> Node::attr(std::string_view name) const {
    for (const auto& [k, v] : attributes)
        if (k == name) return std::string_view(v);
    if (name.find(':') == std::string_view::npos) return std::nullopt;
    const auto local = local_of(name);
    for (const auto& [k, v] : attributes)
        if (k.find(':') != std::string::npos && local_of(k) == local && k.substr(0, 5) != "xmlns") return std::string_view(v);
    return std::nullopt;
}

Node parse(std::string_view text) { return Parser(text).document(); }

std::string escape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            case '\n': out += "&#10;"; break;
            case '\t': out += "&#9;"; break;
            case '\r': out += "&#13;"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) break;  // not representable in XML 1.0
                out += c;
        }
    }
    return out;
}

}  // namespace slidelab::xml
