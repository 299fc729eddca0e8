#pragma once

// Reviewer accuracy, contributor responsiveness, and blinded pairwise
// judgement bundles.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slidelab/model.hpp"
#include "slidelab/orchestrator.hpp"
#include "slidelab/perturb.hpp"

namespace slidelab {

struct CategoryMetrics {
    /// Null when support is 0 or nothing in the category was flagged.
    std::optional<double> precision;
    /// Null when support is 0.
    std::optional<double> recall;
    int support = 0;
    int true_positives = 0;
    /// Share of the uncategorized false positives charged to this category,
    /// proportional to its support.
    double false_positive_share = 0.0;
};

struct ReviewerMetrics {
    std::map<Category, CategoryMetrics> per_category;
    int flagged = 0;
    int false_positives = 0;
    /// Ignores categories: true positives over everything flagged.
    std::optional<double> overall_precision;
    std::optional<double> overall_recall;
    std::optional<double> macro_precision;
    std::optional<double> macro_recall;
};

/// `labeled` is reviewer output on the perturbed slide. Removal entries are
/// not scored (the element is absent); shape_removal is scored over
/// duplication entries. Throws Error(consistency) when a scored log id is
/// missing from `labeled`.
ReviewerMetrics reviewer_metrics(const SlideDoc& labeled, const PerturbationLog& log);

struct Responsiveness {
    int flagged = 0;
    int altered = 0;
    /// Null when nothing was flagged.
    std::optional<double> overall;
    /// Only filled when a log is given; flagged elements without a log entry
    /// count toward `overall` only.
    std::map<Category, std::optional<double>> per_category;
};

/// Fraction of TENTATIVE elements of `labeled_in` that `revised` removed or
/// changed (statuses ignored).
Responsiveness responsiveness(const SlideDoc& labeled_in, const SlideDoc& revised, const PerturbationLog* log = nullptr);

struct MetricsReport {
    ReviewerMetrics reviewer;
    Responsiveness responsiveness;
};

/// Scores the first reviewer pass of `trace` against `log` and the
/// contributor pass that followed it. Throws Error(precondition) when the
/// trace has no reviewer pass with a following snapshot.
MetricsReport evaluate_trace(const RefinementTrace& trace, const PerturbationLog& log);

Json metrics_to_json(const MetricsReport& r);
/// Plain-text table, one row per category.
std::string metrics_table(const MetricsReport& r);

// ---- pairwise judgement ----

struct JudgementBundle {
    std::string bundle_id;
    std::uint64_t seed = 0;
    /// True when candidate A is the baseline.
    bool swapped = false;
    std::string prompt;
    std::string draft_svg;
    std::string candidate_a_svg;
    std::string candidate_b_svg;

    std::string side_of_ours() const { return swapped ? "B" : "A"; }
};

/// Blinds (ours, baseline) into A/B from `seed` alone.
JudgementBundle export_judgement(const SlideDoc& draft, const SlideDoc& ours, const SlideDoc& baseline, std::uint64_t seed,
                                 std::string bundle_id = {});

/// Writes draft.svg, candidate_a.svg, candidate_b.svg, prompt.txt and
/// mapping.json under dir/<bundle_id>/. Throws Error(io).
void write_bundle(const JudgementBundle& b, const std::filesystem::path& dir);

struct BundleMapping {
    std::string bundle_id;
    std::string candidate_a;  // "ours" or "baseline"
    std::string candidate_b;
};

Json mapping_to_json(const JudgementBundle& b);
BundleMapping mapping_from_json(const Json& j);

enum class Verdict { a, b, tie };

struct VerdictRecord {
    std::string bundle_id;
    Verdict verdict = Verdict::tie;
};

/// Accepts "A", "B", "tie" in any case. Throws SchemaError.
Verdict verdict_from(std::string_view s);

struct WinRate {
    double ours = 0, baseline = 0, tie = 0;
    int total = 0;
};

/// Throws UnknownIdsError for verdicts naming unknown bundles and
/// Error(precondition) for an empty verdict list.
WinRate win_rate(const std::vector<BundleMapping>& mappings, const std::vector<VerdictRecord>& verdicts);

}  // namespace slidelab
