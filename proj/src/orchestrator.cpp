#include "slidelab/orchestrator.hpp"

#include <future>

#include "slidelab/error.hpp"
#include "slidelab/validate.hpp"

namespace slidelab {

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::max_iterations: return "max_iterations";
        case StopReason::backend_error: return "backend_error";
    }
    return "";
}

namespace {

SlideDoc labeled(const SlideDoc& doc, const std::set<std::string>& labels) {
    SlideDoc out = doc;
    for (auto& e : out.elements) e.status = labels.count(e.id) ? Status::tentative : Status::final;
    return out;
}

std::set<std::string> all_ids(const SlideDoc& d) {
    std::set<std::string> ids;
    for (const auto& e : d.elements) ids.insert(e.id);
    return ids;
}

}  // namespace

RefinementTrace refine(const SlideDoc& doc, const Reviewer& reviewer, const Contributor& contributor,
                       const RefineOptions& opts) {
    if (opts.max_iterations < 1) throw Error(ErrorKind::precondition, "max_iterations must be >= 1");
    ensure_valid(doc);

    RefinementTrace t;
    t.options = opts;
    t.snapshots.push_back(with_all_final(doc));

    const auto fail = [&](const Error& e) {
        t.stop_reason = StopReason::backend_error;
        t.error = e.what();
        if (auto* b = dynamic_cast<const BackendError*>(&e)) t.error_raw = b->raw();
        t.iterations_used = static_cast<int>(t.snapshots.size()) - 1;
        return t;
    };
    const auto review = [&](std::size_t index) {
        const auto flagged = reviewer.review(t.snapshots[index]).tentative_ids();
        t.flagged_sets.push_back(flagged);
        t.passes.push_back({index, flagged, "reviewer"});
        return flagged;
    };

    std::set<std::string> labels;
    if (opts.initial_all_tentative) {
        labels = all_ids(t.snapshots[0]);
        t.passes.push_back({0, labels, "initial"});
    } else {
        try {
            labels = review(0);
        } catch (const Error& e) {
            return fail(e);
        }
        if (labels.empty() && opts.early_stop) {
            t.stop_reason = StopReason::converged;
            return t;
        }
    }

    for (;;) {
        // A pass with no labels is the clean confirmation round; the
        // contributor returns its input unchanged.
        try {
            auto next = with_all_final(contributor.contribute(labeled(t.snapshots.back(), labels)));
            ensure_valid(next);
            t.snapshots.push_back(std::move(next));
        } catch (const Error& e) {
            return fail(e);
        }
        const int it = static_cast<int>(t.snapshots.size()) - 1;
        if (labels.empty() && opts.early_stop) {
            t.stop_reason = StopReason::converged;
            break;
        }
        try {
            labels = review(t.snapshots.size() - 1);
        } catch (const Error& e) {
            return fail(e);
        }
        if (it == opts.max_iterations) {
            t.stop_reason = labels.empty() ? StopReason::converged : StopReason::max_iterations;
            break;
        }
    }
    t.iterations_used = static_cast<int>(t.snapshots.size()) - 1;
    return t;
}

const Branch* BranchSet::find(std::string_view branch_id) const {
    for (const auto& b : branches)
        if (b.branch_id == branch_id) return &b;
    return nullptr;
}

BranchSet branch(const SlideDoc& doc, const Contributor& contributor, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::precondition, "branch count must be >= 1");
    ensure_valid(doc);
    BranchSet set;
    set.parent = with_all_final(doc);
    const SlideDoc input = with_all_tentative(set.parent);

    std::vector<std::future<SlideDoc>> jobs;
    for (int i = 0; i < n; ++i) {
        const std::uint64_t variant = i == 0 ? 0 : seed + static_cast<std::uint64_t>(i);
        jobs.push_back(std::async(std::launch::async, [&contributor, &input, variant] {
            return contributor.contribute_variant(input, variant);
        }));
    }
    for (int i = 0; i < n; ++i) {
        const std::string id = "b" + std::to_string(i);
        try {
            Branch b;
            b.branch_id = id;
            b.doc = with_all_final(jobs[static_cast<std::size_t>(i)].get());
            b.trace.options.max_iterations = 1;
            b.trace.snapshots = {set.parent, b.doc};
            b.trace.passes = {{0, all_ids(set.parent), "initial"}};
            b.trace.iterations_used = 1;
            b.trace.stop_reason = StopReason::max_iterations;
            set.branches.push_back(std::move(b));
        } catch (const BackendError& e) {
            set.failures.push_back({id, e.what(), e.raw()});
        } catch (const Error& e) {
            set.failures.push_back({id, e.what(), {}});
        }
    }
    if (set.branches.empty())
        throw BackendError("every branch failed: " + set.failures.front().message, set.failures.front().raw);
    return set;
}

SlideDoc apply_user_labels(const SlideDoc& doc, const std::vector<std::string>& ids) {
    std::vector<std::string> missing;
    for (const auto& id : ids)
        if (!doc.find(id)) missing.push_back(id);
    if (!missing.empty()) throw UnknownIdsError(missing);
    return labeled(doc, {ids.begin(), ids.end()});
}

double ConvergenceHistogram::not_converged_fraction() const {
    const int total = converged + not_converged;
    return total ? static_cast<double>(not_converged) / total : 0.0;
}

ConvergenceHistogram convergence_histogram(const std::vector<RefinementTrace>& traces) {
    if (traces.empty()) throw Error(ErrorKind::precondition, "no traces");
    ConvergenceHistogram h;
    for (const auto& t : traces) {
        if (t.stop_reason == StopReason::converged) {
            ++h.counts[t.iterations_used];
            ++h.converged;
        } else {
            ++h.not_converged;
        }
    }
    return h;
}

Json trace_to_json(const RefinementTrace& t) {
    Json j;
    j["options"] = {{"max_iterations", t.options.max_iterations},
                    {"early_stop", t.options.early_stop},
                    {"initial_all_tentative", t.options.initial_all_tentative}};
    j["stop_reason"] = std::string(to_string(t.stop_reason));
    j["iterations_used"] = t.iterations_used;
    j["snapshots"] = Json::array();
    for (const auto& s : t.snapshots) j["snapshots"].push_back(to_json_value(s));
    j["flagged_sets"] = Json::array();
    for (const auto& f : t.flagged_sets) j["flagged_sets"].push_back(f);
    j["passes"] = Json::array();
    for (const auto& p : t.passes)
        j["passes"].push_back({{"input_snapshot", p.input_snapshot}, {"labels", p.labels}, {"origin", p.origin}});
    if (t.error) {
        j["error"] = *t.error;
        if (!t.error_raw.empty()) j["error_raw"] = t.error_raw;
    }
    return j;
}

RefinementTrace trace_from_json(const Json& j) {
    try {
        RefinementTrace t;
        const auto& o = j.at("options");
        t.options.max_iterations = o.at("max_iterations").get<int>();
        t.options.early_stop = o.at("early_stop").get<bool>();
        t.options.initial_all_tentative = o.at("initial_all_tentative").get<bool>();
        const auto reason = j.at("stop_reason").get<std::string>();
        bool known = false;
        for (auto r : {StopReason::converged, StopReason::max_iterations, StopReason::backend_error})
            if (to_string(r) == reason) {
                t.stop_reason = r;
                known = true;
            }
        if (!known) throw SchemaError("$.stop_reason", "unknown stop reason \"" + reason + "\"");
        t.iterations_used = j.at("iterations_used").get<int>();
        for (const auto& s : j.at("snapshots")) t.snapshots.push_back(from_json_value(s));
        for (const auto& f : j.at("flagged_sets")) t.flagged_sets.push_back(f.get<std::set<std::string>>());
        for (const auto& p : j.at("passes"))
            t.passes.push_back({p.at("input_snapshot").get<std::size_t>(), p.at("labels").get<std::set<std::string>>(),
                                p.at("origin").get<std::string>()});
        if (j.contains("error")) t.error = j["error"].get<std::string>();
        if (j.contains("error_raw")) t.error_raw = j["error_raw"].get<std::string>();
        if (t.snapshots.empty() || static_cast<int>(t.snapshots.size()) != t.iterations_used + 1)
            throw SchemaError("$.snapshots", "expected iterations_used + 1 snapshots");
        return t;
    } catch (const Json::exception& e) {
        throw SchemaError("$", std::string("malformed trace: ") + e.what());
    }
}

Json histogram_to_json(const ConvergenceHistogram& h) {
    Json counts = Json::object();
    for (const auto& [k, v] : h.counts) counts[std::to_string(k)] = v;
    return {{"counts", counts},
            {"converged", h.converged},
            {"not_converged", h.not_converged},
            {"not_converged_fraction", h.not_converged_fraction()}};
}

}  // namespace slidelab
