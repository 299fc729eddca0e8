#include "slidelab/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "slidelab/diff.hpp"
#include "slidelab/error.hpp"
#include "slidelab/render.hpp"
#include "slidelab/resources.hpp"
#include "slidelab/rng.hpp"

namespace slidelab {

namespace {

std::optional<double> mean(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

bool altered(const Element& before, const SlideDoc& revised) {
    const Element* after = revised.find(before.id);
    return !after || !element_field_changes(before, *after, true).empty();
}

}  // namespace

ReviewerMetrics reviewer_metrics(const SlideDoc& labeled, const PerturbationLog& log) {
    ReviewerMetrics m;
    for (auto c : all_categories()) m.per_category[c];

    std::set<std::string> logged;
    for (const auto& e : log.entries) {
        if (e.kind == PerturbationKind::shape_removal) continue;
        const Element* el = labeled.find(e.element_id);
        if (!el) throw Error(ErrorKind::consistency, "logged element \"" + e.element_id + "\" is not in the labeled slide");
        logged.insert(e.element_id);
        auto& cm = m.per_category[category_of(e.kind)];
        ++cm.support;
        if (el->tentative()) ++cm.true_positives;
    }

    int total_support = 0, total_tp = 0;
    for (const auto& [c, cm] : m.per_category) {
        total_support += cm.support;
        total_tp += cm.true_positives;
    }
    for (const auto& e : labeled.elements) {
        if (!e.tentative()) continue;
        ++m.flagged;
        if (!logged.count(e.id)) ++m.false_positives;
    }

    std::vector<double> precisions, recalls;
    for (auto& [c, cm] : m.per_category) {
        if (cm.support == 0) continue;
        cm.false_positive_share = static_cast<double>(m.false_positives) * cm.support / total_support;
        cm.recall = static_cast<double>(cm.true_positives) / cm.support;
        const double denom = cm.true_positives + cm.false_positive_share;
        if (denom > 0) cm.precision = cm.true_positives / denom;
        recalls.push_back(*cm.recall);
        if (cm.precision) precisions.push_back(*cm.precision);
    }
    if (m.flagged > 0) m.overall_precision = static_cast<double>(total_tp) / m.flagged;
    if (total_support > 0) m.overall_recall = static_cast<double>(total_tp) / total_support;
    m.macro_precision = mean(precisions);
    m.macro_recall = mean(recalls);
    return m;
}

Responsiveness responsiveness(const SlideDoc& labeled_in, const SlideDoc& revised, const PerturbationLog* log) {
    Responsiveness r;
    std::map<Category, std::pair<int, int>> per;  // flagged, altered
    for (const auto& e : labeled_in.elements) {
        if (!e.tentative()) continue;
        const bool changed = altered(e, revised);
        ++r.flagged;
        if (changed) ++r.altered;
        if (log)
            if (const LogEntry* entry = log->entry_for(e.id)) {
                auto& [f, a] = per[category_of(entry->kind)];
                ++f;
                if (changed) ++a;
            }
    }
    if (r.flagged > 0) r.overall = static_cast<double>(r.altered) / r.flagged;
    if (log)
        for (auto c : all_categories()) {
            const auto it = per.find(c);
            r.per_category[c] = it == per.end() ? std::nullopt
                                                : std::optional<double>(static_cast<double>(it->second.second) / it->second.first);
        }
    return r;
}

MetricsReport evaluate_trace(const RefinementTrace& trace, const PerturbationLog& log) {
    const auto pass = std::find_if(trace.passes.begin(), trace.passes.end(),
                                   [](const LabelPass& p) { return p.origin == "reviewer" && p.input_snapshot == 0; });
    if (pass == trace.passes.end() || trace.snapshots.empty())
        throw Error(ErrorKind::precondition,
                    "trace has no reviewer pass over the input slide (refine with initial_all_tentative off)");
    SlideDoc labeled = trace.snapshots[0];
    for (auto& e : labeled.elements) e.status = pass->labels.count(e.id) ? Status::tentative : Status::final;

    MetricsReport r;
    r.reviewer = reviewer_metrics(labeled, log);
    const SlideDoc& revised = trace.snapshots.size() > 1 ? trace.snapshots[1] : trace.snapshots[0];
    r.responsiveness = responsiveness(labeled, revised, &log);
    return r;
}

Json metrics_to_json(const MetricsReport& r) {
    Json cats = Json::object();
    for (const auto& [c, cm] : r.reviewer.per_category)
        cats[std::string(to_string(c))] = {{"precision", opt(cm.precision)},
                                           {"recall", opt(cm.recall)},
                                           {"support", cm.support},
                                           {"true_positives", cm.true_positives},
                                           {"false_positive_share", cm.false_positive_share}};
    Json resp = Json::object();
    for (const auto& [c, v] : r.responsiveness.per_category) resp[std::string(to_string(c))] = opt(v);
    return {{"reviewer",
             {{"per_category", cats},
              {"flagged", r.reviewer.flagged},
              {"false_positives", r.reviewer.false_positives},
              {"overall_precision", opt(r.reviewer.overall_precision)},
              {"overall_recall", opt(r.reviewer.overall_recall)},
              {"macro_precision", opt(r.reviewer.macro_precision)},
              {"macro_recall", opt(r.reviewer.macro_recall)}}},
            {"responsiveness",
             {{"overall", opt(r.responsiveness.overall)},
              {"flagged", r.responsiveness.flagged},
              {"altered", r.responsiveness.altered},
              {"per_category", resp}}}};
}

std::string metrics_table(const MetricsReport& r) {
    const auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string("    -");
        char buf[16];
        std::snprintf(buf, sizeof buf, "%5.3f", *v);
        return std::string(buf);
    };
    std::ostringstream o;
    o << "category           precision  recall  support  responsiveness\n";
    for (const auto& [c, cm] : r.reviewer.per_category) {
        char name[32];
        std::snprintf(name, sizeof name, "%-18s", std::string(to_string(c)).c_str());
        std::optional<double> resp;
        if (auto it = r.responsiveness.per_category.find(c); it != r.responsiveness.per_category.end()) resp = it->second;
        char support[16];
        std::snprintf(support, sizeof support, "%7d", cm.support);
        o << name << " " << "    " << cell(cm.precision) << "   " << cell(cm.recall) << "  " << support << "  "
          << "       " << cell(resp) << "\n";
    }
    o << "overall precision " << cell(r.reviewer.overall_precision) << ", recall " << cell(r.reviewer.overall_recall)
      << ", responsiveness " << cell(r.responsiveness.overall) << "\n";
    return o.str();
}

JudgementBundle export_judgement(const SlideDoc& draft, const SlideDoc& ours, const SlideDoc& baseline, std::uint64_t seed,
                                 std::string bundle_id) {
    JudgementBundle b;
    b.bundle_id = bundle_id.empty() ? "bundle-" + std::to_string(seed) : std::move(bundle_id);
    b.seed = seed;
    b.swapped = (mix64(seed) & 1u) != 0;
    b.prompt = std::string(resource("prompts/judge.txt"));
    b.draft_svg = render_svg(draft);
    b.candidate_a_svg = render_svg(b.swapped ? baseline : ours);
    b.candidate_b_svg = render_svg(b.swapped ? ours : baseline);
    return b;
}

Json mapping_to_json(const JudgementBundle& b) {
    return {{"bundle_id", b.bundle_id},
            {"seed", b.seed},
            {"candidate_a", b.swapped ? "baseline" : "ours"},
            {"candidate_b", b.swapped ? "ours" : "baseline"}};
}

BundleMapping mapping_from_json(const Json& j) {
    try {
        BundleMapping m{j.at("bundle_id").get<std::string>(), j.at("candidate_a").get<std::string>(),
                        j.at("candidate_b").get<std::string>()};
        const std::set<std::string> sides{m.candidate_a, m.candidate_b};
        if (sides != std::set<std::string>{"ours", "baseline"})
            throw SchemaError("$", "mapping must assign ours and baseline to A and B");
        return m;
    } catch (const Json::exception& e) {
        throw SchemaError("$", std::string("malformed mapping: ") + e.what());
    }
}

void write_bundle(const JudgementBundle& b, const std::filesystem::path& dir) {
    const auto root = dir / b.bundle_id;
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + root.string() + ": " + ec.message());
    const auto put = [&](const std::string& name, const std::string& content) {
        std::ofstream out(root / name, std::ios::binary);
        out << content;
        if (!out) throw Error(ErrorKind::io, "cannot write " + (root / name).string());
    };
    put("draft.svg", b.draft_svg);
    put("candidate_a.svg", b.candidate_a_svg);
    put("candidate_b.svg", b.candidate_b_svg);
    put("prompt.txt", b.prompt);
    put("mapping.json", mapping_to_json(b).dump(2) + "\n");
}

Verdict verdict_from(std::string_view s) {
    std::string v(s);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "a") return Verdict::a;
    if (v == "b") return Verdict::b;
    if (v == "tie") return Verdict::tie;
    throw SchemaError("$.verdict", "expected A, B or tie, got \"" + std::string(s) + "\"");
}

WinRate win_rate(const std::vector<BundleMapping>& mappings, const std::vector<VerdictRecord>& verdicts) {
    if (verdicts.empty()) throw Error(ErrorKind::precondition, "no verdicts");
    std::map<std::string, const BundleMapping*> by_id;
    for (const auto& m : mappings) by_id[m.bundle_id] = &m;
    std::vector<std::string> unknown;
    for (const auto& v : verdicts)
        if (!by_id.count(v.bundle_id)) unknown.push_back(v.bundle_id);
    if (!unknown.empty()) throw UnknownIdsError(unknown);

    WinRate w;
    int ours = 0, baseline = 0, tie = 0;
    for (const auto& v : verdicts) {
        const auto* m = by_id[v.bundle_id];
        if (v.verdict == Verdict::tie) ++tie;
        else if ((v.verdict == Verdict::a ? m->candidate_a : m->candidate_b) == "ours") ++ours;
        else ++baseline;
    }
    w.total = static_cast<int>(verdicts.size());
    w.ours = static_cast<double>(ours) / w.total;
    w.baseline = static_cast<double>(baseline) / w.total;
    w.tie = static_cast<double>(tie) / w.total;
    return w;
}

}  // namespace slidelab
