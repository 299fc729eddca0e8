#include "slidelab/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "slidelab/color.hpp"
#include "slidelab/error.hpp"
#include "slidelab/rng.hpp"
#include "slidelab/validate.hpp"

namespace slidelab {

const std::vector<PerturbationKind>& all_perturbation_kinds() {
    static const std::vector<PerturbationKind> kinds{
        PerturbationKind::shape_removal,    PerturbationKind::shape_duplication,    PerturbationKind::position_shift,
        PerturbationKind::color_alteration, PerturbationKind::text_attribute_reset, PerturbationKind::fill_reset};
    return kinds;
}

const std::vector<Category>& all_categories() {
    static const std::vector<Category> cats{Category::shape_placement, Category::shape_removal, Category::color_attributes,
                                            Category::text_attributes};
    return cats;
}

Category category_of(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::shape_removal:
        case PerturbationKind::shape_duplication: return Category::shape_removal;
        case PerturbationKind::position_shift: return Category::shape_placement;
        case PerturbationKind::color_alteration:
        case PerturbationKind::fill_reset: return Category::color_attributes;
        case PerturbationKind::text_attribute_reset: return Category::text_attributes;
    }
    return Category::shape_placement;
}

std::string_view to_string(PerturbationKind k) {
    switch (k) {
        case PerturbationKind::shape_removal: return "shape_removal";
        case PerturbationKind::shape_duplication: return "shape_duplication";
        case PerturbationKind::position_shift: return "position_shift";
        case PerturbationKind::color_alteration: return "color_alteration";
        case PerturbationKind::text_attribute_reset: return "text_attribute_reset";
        case PerturbationKind::fill_reset: return "fill_reset";
    }
    return "";
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::shape_placement: return "shape_placement";
        case Category::shape_removal: return "shape_removal";
        case Category::color_attributes: return "color_attributes";
        case Category::text_attributes: return "text_attributes";
    }
    return "";
}

std::optional<PerturbationKind> perturbation_kind_from(std::string_view s) {
    for (auto k : all_perturbation_kinds())
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::set<PerturbationKind> parse_kind_list(std::string_view list) {
    std::set<PerturbationKind> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        auto name = list.substr(start, end - start);
        while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
        while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
        if (name == "all") {
            out.insert(all_perturbation_kinds().begin(), all_perturbation_kinds().end());
        } else if (!name.empty()) {
            auto k = perturbation_kind_from(name);
            if (!k) throw Error(ErrorKind::validation, "unknown perturbation kind \"" + std::string(name) + "\"");
            out.insert(*k);
        }
        start = end + 1;
    }
    return out;
}

const std::vector<std::string>& default_fonts() {
    static const std::vector<std::string> fonts{"Arial", "Roboto", "Calibri"};
    return fonts;
}

bool is_default_font(std::string_view name) {
    const auto& f = default_fonts();
    return std::find(f.begin(), f.end(), name) != f.end();
}

std::set<std::string> PerturbationLog::flaggable_ids() const {
    std::set<std::string> ids;
    for (const auto& e : entries)
        if (e.kind != PerturbationKind::shape_removal) ids.insert(e.element_id);
    return ids;
}

const LogEntry* PerturbationLog::entry_for(std::string_view element_id) const {
    for (const auto& e : entries)
        if (e.kind != PerturbationKind::shape_removal && e.element_id == element_id) return &e;
    return nullptr;
}

namespace {

std::size_t text_bearing(const SlideDoc& d) {
    return static_cast<std::size_t>(std::count_if(d.elements.begin(), d.elements.end(), [](const Element& e) { return e.has_text(); }));
}

bool applicable(PerturbationKind k, const Element& e, const SlideDoc& d) {
    const bool shape = !is_placeholder(e.kind);
    switch (k) {
        case PerturbationKind::shape_removal: return shape && !(e.has_text() && text_bearing(d) <= 1);
        case PerturbationKind::shape_duplication: return true;
        case PerturbationKind::position_shift: return true;
        case PerturbationKind::color_alteration: return e.fill.mode != FillMode::none || e.has_text();
        case PerturbationKind::text_attribute_reset: return e.has_text();
        case PerturbationKind::fill_reset: return shape;
    }
    return false;
}

Emu signed_offset(Rng& rng, Emu dimension, const Magnitudes& m) {
    const double frac = rng.uniform_real(m.shift_min, m.shift_max);
    const Emu magnitude = std::max<Emu>(1, std::llround(frac * static_cast<double>(dimension)));
    return rng.chance(0.5) ? magnitude : -magnitude;
}

std::string random_hue_rgb(Rng& rng) {
    for (;;) {
        Hsl h{rng.uniform_real(0.0, 360.0), rng.uniform_real(0.45, 0.85), rng.uniform_real(0.35, 0.65)};
        auto hex = to_hex(to_rgb(h));
        if (!is_default_rgb(hex)) return hex;
    }
}

void alter_colors(Element& e, Rng& rng, bool to_defaults) {
    for (auto& c : e.fill.colors) c.rgb = to_defaults ? std::string(kDefaultFillRgb) : random_hue_rgb(rng);
    if (e.text)
        for (auto& r : e.text->runs) r.color.rgb = to_defaults ? std::string(kDefaultTextRgb) : random_hue_rgb(rng);
}

// Applies `k` to d.elements[i]; returns the log entry.
// `source` reserves ids, so a copy never reuses the id of a removed element.
LogEntry apply(PerturbationKind k, SlideDoc& d, const SlideDoc& source, std::size_t i, Rng& rng, const Magnitudes& m) {
    LogEntry entry;
    entry.kind = k;
    entry.element_id = d.elements[i].id;
    entry.index = i;
    Element& e = d.elements[i];
    switch (k) {
        case PerturbationKind::shape_removal:
            entry.original = e;
            d.elements.erase(d.elements.begin() + static_cast<std::ptrdiff_t>(i));
            return entry;
        case PerturbationKind::shape_duplication: {
            entry.original = e;
            Element copy = e;
            SlideDoc taken = d;
            for (const auto& o : source.elements)
                if (!taken.find(o.id)) taken.elements.push_back(o);
            copy.id = fresh_element_id(taken);
            copy.status = Status::final;
            copy.position.x += std::llround(m.duplicate_offset * static_cast<double>(e.position.width));
            copy.position.y += std::llround(m.duplicate_offset * static_cast<double>(e.position.height));
            entry.element_id = copy.id;
            entry.index = i + 1;
            entry.applied = copy;
            d.elements.insert(d.elements.begin() + static_cast<std::ptrdiff_t>(i + 1), std::move(copy));
            return entry;
        }
        case PerturbationKind::position_shift: {
            entry.original = e;
            const auto axis = rng.index(3);
            if (axis != 1) e.position.x += signed_offset(rng, d.canvas_width, m);
            if (axis != 0) e.position.y += signed_offset(rng, d.canvas_height, m);
            break;
        }
        case PerturbationKind::color_alteration: {
            entry.original = e;
            alter_colors(e, rng, rng.chance(m.default_color_probability));
            while (e == *entry.original) alter_colors(e, rng, false);
            break;
        }
        case PerturbationKind::text_attribute_reset: {
            entry.original = e;
            std::vector<std::string> choices;
            for (const auto& f : default_fonts())
                if (f != e.text->runs.front().font_name) choices.push_back(f);
            const auto& font = choices[rng.index(choices.size())];
            for (auto& r : e.text->runs) {
                r.font_name = font;
                r.font_size = 18.0;
            }
            e.text->alignment = Alignment::left;
            break;
        }
        case PerturbationKind::fill_reset: {
            entry.original = e;
            const Fill white{FillMode::solid, {{std::string(kDefaultFillRgb), 1.0}}, 0.0};
            e.fill = e.fill == white ? Fill{} : white;
            break;
        }
    }
    entry.applied = e;
    return entry;
}

}  // namespace

PerturbResult perturb(const SlideDoc& doc, const PerturbConfig& config) {
    ensure_valid(doc);
    if (!(config.severity >= 0.0 && config.severity <= 1.0))
        throw Error(ErrorKind::precondition, "severity must lie in [0,1]");
    const auto& m = config.magnitudes;
    if (!(m.shift_min >= 0.0 && m.shift_min <= m.shift_max)) throw Error(ErrorKind::precondition, "invalid shift magnitudes");

    PerturbResult out{doc, {}};
    out.log.seed = config.seed;
    out.log.severity = config.severity;
    if (config.severity == 0.0) return out;
    if (doc.elements.empty()) {
        out.log.warnings.push_back("empty slide, nothing to perturb");
        return out;
    }

    Rng rng(config.seed);
    SlideDoc& d = out.perturbed;
    const std::size_t target =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(config.severity * static_cast<double>(doc.elements.size()))), 1,
                                doc.elements.size());

    std::vector<std::string> order;
    for (const auto& e : doc.elements) order.push_back(e.id);
    rng.shuffle(order);

    std::size_t done = 0;
    for (const auto& id : order) {
        if (done == target) break;
        const auto idx = d.index_of(id);
        std::vector<PerturbationKind> kinds;
        for (auto k : all_perturbation_kinds())
            if (config.enabled_kinds.count(k) && applicable(k, d.elements[static_cast<std::size_t>(idx)], d)) kinds.push_back(k);
        if (kinds.empty()) continue;
        const auto k = kinds[rng.index(kinds.size())];
        out.log.entries.push_back(apply(k, d, doc, static_cast<std::size_t>(idx), rng, m));
        ++done;
    }
    if (done < target)
        out.log.warnings.push_back("only " + std::to_string(done) + " of " + std::to_string(target) +
                                   " elements had an applicable perturbation");
    return out;
}

SlideDoc revert(const SlideDoc& perturbed, const PerturbationLog& log) {
    SlideDoc d = perturbed;
    for (auto it = log.entries.rbegin(); it != log.entries.rend(); ++it) {
        const auto& e = *it;
        const auto idx = d.index_of(e.element_id);
        switch (e.kind) {
            case PerturbationKind::shape_removal:
                if (idx >= 0 || !e.original || e.index > d.elements.size())
                    throw Error(ErrorKind::consistency, "cannot restore removed element " + e.element_id);
                d.elements.insert(d.elements.begin() + static_cast<std::ptrdiff_t>(e.index), *e.original);
                break;
            case PerturbationKind::shape_duplication:
                if (idx < 0) throw Error(ErrorKind::consistency, "duplicate " + e.element_id + " not present");
                d.elements.erase(d.elements.begin() + idx);
                break;
            default:
                if (idx < 0 || !e.original) throw Error(ErrorKind::consistency, "element " + e.element_id + " not present");
                d.elements[static_cast<std::size_t>(idx)] = *e.original;
                break;
        }
    }
    return d;
}

SlideDoc ground_truth_labels(const SlideDoc& perturbed, const PerturbationLog& log) {
    SlideDoc d = with_all_final(perturbed);
    for (const auto& id : log.flaggable_ids())
        if (auto* e = d.find(id)) e->status = Status::tentative;
    return d;
}

Json log_to_json(const PerturbationLog& log) {
    Json j;
    j["seed"] = log.seed;
    j["severity"] = log.severity;
    j["entries"] = Json::array();
    for (const auto& e : log.entries) {
        Json entry;
        entry["element_id"] = e.element_id;
        entry["kind"] = std::string(to_string(e.kind));
        entry["category"] = std::string(to_string(category_of(e.kind)));
        entry["index"] = e.index;
        entry["original"] = e.original ? element_to_json_value(*e.original) : Json();
        entry["applied"] = e.applied ? element_to_json_value(*e.applied) : Json();
        j["entries"].push_back(std::move(entry));
    }
    j["warnings"] = log.warnings;
    return j;
}

PerturbationLog log_from_json(const Json& j) {
    try {
        PerturbationLog log;
        log.seed = j.at("seed").get<std::uint64_t>();
        log.severity = j.at("severity").get<double>();
        for (const auto& e : j.at("entries")) {
            LogEntry entry;
            entry.element_id = e.at("element_id").get<std::string>();
            auto kind = perturbation_kind_from(e.at("kind").get<std::string>());
            if (!kind) throw SchemaError("$.entries.kind", "unknown perturbation kind");
            entry.kind = *kind;
            entry.index = e.at("index").get<std::size_t>();
            if (!e.at("original").is_null()) entry.original = element_from_json_value(e.at("original"));
            if (!e.at("applied").is_null()) entry.applied = element_from_json_value(e.at("applied"));
            log.entries.push_back(std::move(entry));
        }
        if (auto w = j.find("warnings"); w != j.end()) log.warnings = w->get<std::vector<std::string>>();
        return log;
    } catch (const Json::exception& e) {
        throw SchemaError("$", std::string("perturbation log: ") + e.what());
    }
}

TrainingPair make_training_pair(const SlideDoc& doc, const PerturbConfig& config) {
    auto [perturbed, log] = perturb(doc, config);
    const SlideDoc labeled = ground_truth_labels(perturbed, log);

    TrainingPair pair;
    const auto reviewer = format_prompt(Role::reviewer, perturbed);
    pair.reviewer_sample = {reviewer[0], reviewer[1], {"assistant", to_json(labeled)}};
    const auto contributor = format_prompt(Role::contributor, labeled);
    pair.contributor_sample = {contributor[0], contributor[1], {"assistant", to_json(with_all_final(doc))}};
    pair.perturbed = std::move(perturbed);
    pair.log = std::move(log);
    return pair;
}

namespace {
Json sample_json(const ChatSample& s) {
    Json j = Json::array();
    for (const auto* m : {&s.system, &s.user, &s.assistant}) j.push_back({{"role", m->role}, {"content", m->content}});
    return j;
}
}  // namespace

DatasetManifest batch_generate(const std::vector<SlideDoc>& source, const PerturbConfig& config, std::ostream& out) {
    DatasetManifest manifest;
    manifest.seed = config.seed;
    manifest.severity = config.severity;
    for (auto k : all_perturbation_kinds()) manifest.per_kind[k] = 0;
    for (std::size_t i = 0; i < source.size(); ++i) {
        PerturbConfig slide_config = config;
        slide_config.seed = config.seed ^ static_cast<std::uint64_t>(i);
        try {
            const auto pair = make_training_pair(source[i], slide_config);
            Json line;
            line["slide_index"] = i;
            line["source_id"] = source[i].source_id;
            line["reviewer"] = sample_json(pair.reviewer_sample);
            line["contributor"] = sample_json(pair.contributor_sample);
            line["log"] = log_to_json(pair.log);
            out << line.dump() << '\n';
            for (const auto& e : pair.log.entries) ++manifest.per_kind[e.kind];
            ++manifest.total;
        } catch (const Error& e) {
            ++manifest.failed;
            manifest.errors.push_back("slide " + std::to_string(i) + " (" + source[i].source_id + "): " + e.what());
        }
    }
    return manifest;
}

Json manifest_to_json(const DatasetManifest& m) {
    Json j;
    j["total"] = m.total;
    j["failed"] = m.failed;
    j["seed"] = m.seed;
    j["severity"] = m.severity;
    Json kinds = Json::object();
    for (const auto& [k, n] : m.per_kind) kinds[std::string(to_string(k))] = n;
    j["per_kind"] = std::move(kinds);
    j["errors"] = m.errors;
    return j;
}

}  // namespace slidelab
