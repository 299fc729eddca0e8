#pragma once

// Reviewer and contributor roles. A reviewer only sets statuses; a
// contributor rewrites TENTATIVE elements and returns an all-FINAL slide.
// Implementations are safe to call concurrently.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "slidelab/model.hpp"
#include "slidelab/perturb.hpp"

namespace slidelab {

class Reviewer {
public:
    virtual ~Reviewer() = default;
    virtual std::string name() const = 0;
    /// Incoming statuses are ignored. Throws BackendError on failure.
    virtual SlideDoc review(const SlideDoc& doc) const = 0;
};

class Contributor {
public:
    virtual ~Contributor() = default;
    virtual std::string name() const = 0;
    /// Throws BackendError on failure.
    virtual SlideDoc contribute(const SlideDoc& labeled) const = 0;
    /// Branch variation; variant 0 is the plain contribution.
    virtual SlideDoc contribute_variant(const SlideDoc& labeled, std::uint64_t variant) const {
        (void)variant;
        return contribute(labeled);
    }
};

// Oracle backends: exact answers from the perturbation ground truth.

/// Flags logged elements that still differ from their original (and
/// duplicates that are still present). On the perturbed slide this is
/// exactly the set of non-removal log ids.
std::unique_ptr<Reviewer> make_oracle_reviewer(PerturbationLog log);

/// Restores TENTATIVE elements to `original`, drops TENTATIVE elements that
/// are not in it, and re-inserts removed originals when anything was
/// flagged.
std::unique_ptr<Contributor> make_oracle_contributor(SlideDoc original);

// Heuristic backends: deterministic rules, no ground truth needed.

struct HeuristicOptions {
    /// Two edges closer than this fraction of the canvas are "on" the same line.
    double align_tolerance = 0.005;
    /// Edges farther than the tolerance but within this fraction of a
    /// dominant line are misaligned.
    double align_window = 0.05;
    /// Near-duplicate threshold on intersection over union.
    double duplicate_iou = 0.9;
    /// Replacement when the slide has no non-default font.
    std::string house_font = "Montserrat";
    int grid_columns = 8;
};

enum class HeuristicRule { outside_canvas, default_font, near_duplicate, default_colors, misaligned };

std::string_view to_string(HeuristicRule r);

struct Finding {
    std::string element_id;
    HeuristicRule rule;
    bool operator==(const Finding&) const = default;
};

/// Every rule hit, in rule order then z-order.
std::vector<Finding> heuristic_findings(const SlideDoc& doc, const HeuristicOptions& opts = {});

/// Intersection over union of two boxes; empty extents count as 1 EMU.
double iou(const Geometry& a, const Geometry& b);

std::unique_ptr<Reviewer> make_heuristic_reviewer(HeuristicOptions opts = {});
std::unique_ptr<Contributor> make_heuristic_contributor(HeuristicOptions opts = {});

// Remote backends: chat-completions style HTTP endpoint.

struct RemoteModelConfig {
    /// http://host[:port]/path
    std::string endpoint;
    std::string model;
    std::string api_key;
    int max_tokens = 2048;
    double temperature = 0.2;
    /// Extra attempts after the first failed or unparseable response.
    int max_retries = 2;
    /// Requests in flight across every backend sharing this config's limiter.
    int max_in_flight = 4;
    int timeout_seconds = 120;
};

/// Reads SLIDELAB_REMOTE_URL, SLIDELAB_REMOTE_MODEL, SLIDELAB_API_KEY.
RemoteModelConfig remote_config_from_env();

/// Throws Error(validation) for a bad config (e.g. max_tokens over budget).
std::unique_ptr<Reviewer> make_remote_reviewer(RemoteModelConfig config);
std::unique_ptr<Contributor> make_remote_contributor(RemoteModelConfig config);

}  // namespace slidelab
