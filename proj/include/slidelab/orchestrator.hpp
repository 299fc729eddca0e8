#pragma once

// Iterative review/contribute loop, branching, and user labeling.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slidelab/backend.hpp"
#include "slidelab/slide_json.hpp"

namespace slidelab {

struct RefineOptions {
    /// Upper bound on contributor passes.
    int max_iterations = 5;
    bool early_stop = true;
    /// Label every element TENTATIVE for the first pass instead of asking
    /// the reviewer.
    bool initial_all_tentative = true;
};

enum class StopReason { converged, max_iterations, backend_error };

std::string_view to_string(StopReason r);

/// One labeling of snapshots[input_snapshot]. The contributor output for it
/// (if any) is snapshots[input_snapshot + 1].
struct LabelPass {
    std::size_t input_snapshot = 0;
    std::set<std::string> labels;
    /// "initial", "reviewer" or "user".
    std::string origin;
    bool operator==(const LabelPass&) const = default;
};

struct RefinementTrace {
    RefineOptions options;
    /// [0] is the input; one more per contributor pass. All FINAL.
    std::vector<SlideDoc> snapshots;
    /// Reviewer output per review pass, in order.
    std::vector<std::set<std::string>> flagged_sets;
    std::vector<LabelPass> passes;
    StopReason stop_reason = StopReason::converged;
    int iterations_used = 0;
    /// Set when stop_reason is backend_error.
    std::optional<std::string> error;
    std::string error_raw;

    const SlideDoc& final_doc() const { return snapshots.back(); }
};

/// Never throws for backend failures; they end the trace instead.
/// Throws ValidationError for an invalid input and Error(precondition) for
/// max_iterations < 1.
RefinementTrace refine(const SlideDoc& doc, const Reviewer& reviewer, const Contributor& contributor,
                       const RefineOptions& opts = {});

struct Branch {
    std::string branch_id;
    SlideDoc doc;
    RefinementTrace trace;
};

struct BranchFailure {
    std::string branch_id;
    std::string message;
    std::string raw;
};

struct BranchSet {
    SlideDoc parent;
    std::vector<Branch> branches;
    std::vector<BranchFailure> failures;
    const Branch* find(std::string_view branch_id) const;
};

/// n contributor passes over the all-TENTATIVE parent, run concurrently.
/// Branch 0 is the plain contribution; the rest use variants derived from
/// `seed`. Throws Error(precondition) for n < 1 and BackendError when every
/// branch fails.
BranchSet branch(const SlideDoc& doc, const Contributor& contributor, int n, std::uint64_t seed);

/// Exactly `ids` TENTATIVE. Throws UnknownIdsError listing ids not in doc.
SlideDoc apply_user_labels(const SlideDoc& doc, const std::vector<std::string>& ids);

struct ConvergenceHistogram {
    /// iterations_used -> number of converged traces.
    std::map<int, int> counts;
    int converged = 0;
    int not_converged = 0;
    double not_converged_fraction() const;
};

/// Throws Error(precondition) for an empty list.
ConvergenceHistogram convergence_histogram(const std::vector<RefinementTrace>& traces);

Json trace_to_json(const RefinementTrace& t);
RefinementTrace trace_from_json(const Json& j);
Json histogram_to_json(const ConvergenceHistogram& h);

}  // namespace slidelab
