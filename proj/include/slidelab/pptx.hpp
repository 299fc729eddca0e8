#pragma once

// Reading and writing .pptx packages. Ingest maps the in-scope subset of
// PresentationML onto SlideDoc; anything else is skipped and reported.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "slidelab/model.hpp"

namespace slidelab {

struct DeckMetadata {
    std::string title;
    std::size_t slide_count = 0;
    bool operator==(const DeckMetadata&) const = default;
};

struct Deck {
    std::vector<SlideDoc> slides;
    DeckMetadata metadata;
    bool operator==(const Deck&) const = default;
};

enum class SkipReason { unsupported_shape, table, chart, media_payload_dropped, other };

struct SkipEntry {
    std::size_t slide_index = 0;  // 0-based position in presentation order
    SkipReason reason = SkipReason::other;
    std::string detail;
    bool operator==(const SkipEntry&) const = default;
};

struct IngestReport {
    std::size_t parsed_elements = 0;
    std::vector<SkipEntry> skipped;
    bool operator==(const IngestReport&) const = default;
};

struct IngestResult {
    Deck deck;
    IngestReport report;
};

/// Throws Error(not_an_archive) or Error(missing_presentation_part). A slide
/// whose XML is malformed is skipped and reported instead.
IngestResult load_pptx(std::string_view bytes, std::string_view source_name = "deck");

/// Writes a minimal PresentationML package. Throws ValidationError when a
/// slide is invalid.
std::string export_pptx(const Deck& deck);

std::string_view to_string(SkipReason r);

/// Deck file: {"title":..,"slide_count":..,"slides":[canonical slides]}.
std::string deck_to_json(const Deck& deck);
Deck deck_from_json(std::string_view text);
std::string report_to_json(const IngestReport& report);

}  // namespace slidelab
