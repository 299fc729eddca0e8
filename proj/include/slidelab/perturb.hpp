#pragma once

// Seeded perturbations that turn a finished slide into a plausible rough
// draft, with a log precise enough to undo every step.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slidelab/chat.hpp"
#include "slidelab/model.hpp"
#include "slidelab/slide_json.hpp"

namespace slidelab {

enum class PerturbationKind { shape_removal, shape_duplication, position_shift, color_alteration, text_attribute_reset, fill_reset };

/// Metric categories; every perturbation kind belongs to exactly one.
enum class Category { shape_placement, shape_removal, color_attributes, text_attributes };

const std::vector<PerturbationKind>& all_perturbation_kinds();
const std::vector<Category>& all_categories();
Category category_of(PerturbationKind k);
std::string_view to_string(PerturbationKind k);
std::string_view to_string(Category c);
std::optional<PerturbationKind> perturbation_kind_from(std::string_view s);
/// Comma separated kind names; "all" selects every kind. Throws Error(validation).
std::set<PerturbationKind> parse_kind_list(std::string_view list);

/// Fonts treated as "default" by both the perturbation engine and the
/// heuristic reviewer.
const std::vector<std::string>& default_fonts();
bool is_default_font(std::string_view name);

struct Magnitudes {
    /// position_shift offset, as a fraction of the canvas dimension.
    double shift_min = 0.02;
    double shift_max = 0.10;
    /// color_alteration: probability of resetting to defaults instead of a random hue.
    double default_color_probability = 0.5;
    /// shape_duplication offset, as a fraction of the element's own size.
    double duplicate_offset = 0.01;
};

struct PerturbConfig {
    std::uint64_t seed = 0;
    double severity = 0.3;
    std::set<PerturbationKind> enabled_kinds{all_perturbation_kinds().begin(), all_perturbation_kinds().end()};
    Magnitudes magnitudes;
};

struct LogEntry {
    /// For duplication this is the id of the inserted copy.
    std::string element_id;
    PerturbationKind kind = PerturbationKind::position_shift;
    /// Element before the change; for duplication, the element that was copied.
    std::optional<Element> original;
    /// Element after the change; absent for removal.
    std::optional<Element> applied;
    /// z-order index of the removed or inserted element.
    std::size_t index = 0;
    bool operator==(const LogEntry&) const = default;
};

struct PerturbationLog {
    std::vector<LogEntry> entries;
    std::uint64_t seed = 0;
    double severity = 0.0;
    std::vector<std::string> warnings;
    bool operator==(const PerturbationLog&) const = default;

    /// Ids of the entries that can be flagged (everything but removals).
    std::set<std::string> flaggable_ids() const;
    const LogEntry* entry_for(std::string_view element_id) const;
};

struct PerturbResult {
    SlideDoc perturbed;
    PerturbationLog log;
};

/// Throws ValidationError for an invalid doc and Error(precondition) for a
/// severity outside [0,1].
PerturbResult perturb(const SlideDoc& doc, const PerturbConfig& config);

/// Undoes `log` on `perturbed`, newest entry first. Throws Error(consistency)
/// when the log does not match the document.
SlideDoc revert(const SlideDoc& perturbed, const PerturbationLog& log);

/// Perturbed doc with every non-removal logged element TENTATIVE.
SlideDoc ground_truth_labels(const SlideDoc& perturbed, const PerturbationLog& log);

Json log_to_json(const PerturbationLog& log);
PerturbationLog log_from_json(const Json& j);

struct ChatSample {
    ChatMessage system;
    ChatMessage user;
    ChatMessage assistant;
};

struct TrainingPair {
    ChatSample reviewer_sample;
    ChatSample contributor_sample;
    SlideDoc perturbed;
    PerturbationLog log;
};

/// Throws Error(budget) naming the slide when a user message exceeds the
/// token budget.
TrainingPair make_training_pair(const SlideDoc& doc, const PerturbConfig& config);

struct DatasetManifest {
    std::size_t total = 0;
    std::size_t failed = 0;
    std::uint64_t seed = 0;
    double severity = 0.0;
    std::map<PerturbationKind, std::size_t> per_kind;
    std::vector<std::string> errors;
};

/// Streams one JSON line per slide to `out`. Slide i uses seed ^ i.
/// Failures are recorded in the manifest and the batch continues.
DatasetManifest batch_generate(const std::vector<SlideDoc>& source, const PerturbConfig& config, std::ostream& out);

Json manifest_to_json(const DatasetManifest& m);

}  // namespace slidelab
