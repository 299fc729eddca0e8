#include "slidelab/diff.hpp"

#include <map>

namespace slidelab {

std::string_view to_string(ChangeKind c) {
    switch (c) {
        case ChangeKind::added: return "added";
        case ChangeKind::removed: return "removed";
        case ChangeKind::modified: return "modified";
    }
    return "modified";
}

std::vector<std::string> element_field_changes(const Element& a, const Element& b, bool ignore_status) {
    std::vector<std::string> f;
    if (a.kind != b.kind) f.emplace_back("kind");
    if (a.position.x != b.position.x) f.emplace_back("position.x");
    if (a.position.y != b.position.y) f.emplace_back("position.y");
    if (a.position.width != b.position.width) f.emplace_back("position.width");
    if (a.position.height != b.position.height) f.emplace_back("position.height");
    if (a.position.rotation != b.position.rotation) f.emplace_back("position.rotation");
    if (a.fill.mode != b.fill.mode) f.emplace_back("fill.mode");
    if (a.fill.colors != b.fill.colors) f.emplace_back("fill.colors");
    if (a.fill.transparency != b.fill.transparency) f.emplace_back("fill.transparency");
    if (a.text.has_value() != b.text.has_value()) {
        f.emplace_back("text");
    } else if (a.text) {
        if (a.text->runs != b.text->runs) f.emplace_back("text.runs");
        if (a.text->line_spacing != b.text->line_spacing) f.emplace_back("text.line_spacing");
        if (a.text->alignment != b.text->alignment) f.emplace_back("text.alignment");
    }
    if (!ignore_status && a.status != b.status) f.emplace_back("status");
    return f;
}

std::vector<ElementDiff> diff(const SlideDoc& a, const SlideDoc& b, DiffOptions opts) {
    std::vector<ElementDiff> out;

    std::vector<std::string> doc_fields;
    if (a.source_id != b.source_id) doc_fields.emplace_back("source_id");
    if (a.canvas_width != b.canvas_width) doc_fields.emplace_back("canvas_width");
    if (a.canvas_height != b.canvas_height) doc_fields.emplace_back("canvas_height");
    if (!doc_fields.empty()) out.push_back({kDocumentDiffId, ChangeKind::modified, std::move(doc_fields)});

    // Rank of each shared id within the shared subsequence of each side.
    std::map<std::string, std::size_t> rank_a, rank_b;
    for (const auto& e : a.elements)
        if (b.find(e.id)) rank_a.emplace(e.id, rank_a.size());
    for (const auto& e : b.elements)
        if (a.find(e.id)) rank_b.emplace(e.id, rank_b.size());

    for (const auto& ea : a.elements) {
        const Element* eb = b.find(ea.id);
        if (!eb) {
            out.push_back({ea.id, ChangeKind::removed, {}});
            continue;
        }
        auto fields = element_field_changes(ea, *eb, opts.ignore_status);
        if (rank_a[ea.id] != rank_b[ea.id]) fields.emplace_back("z_order");
        if (!fields.empty()) out.push_back({ea.id, ChangeKind::modified, std::move(fields)});
    }
    for (const auto& eb : b.elements)
        if (!a.find(eb.id)) out.push_back({eb.id, ChangeKind::added, {}});
    return out;
}

}  // namespace slidelab
