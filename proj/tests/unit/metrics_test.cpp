#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "slidelab/error.hpp"
#include "slidelab/metrics.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/recount.hpp"

using namespace slidelab;

namespace {

Element text_box(std::string id, Emu x) {
    Element e;
    e.id = std::move(id);
    e.position = {x, 100000, 1000000, 500000};
    e.fill.mode = FillMode::solid;
    e.fill.colors = {{"224466", 1.0}};
    return e;
}

LogEntry entry(std::string id, PerturbationKind k) {
    LogEntry e;
    e.element_id = std::move(id);
    e.kind = k;
    return e;
}

}  // namespace

TEST(ReviewerMetrics, HandCountedColorCase) {
    SlideDoc d;
    d.source_id = "m";
    for (int i = 0; i < 4; ++i) d.elements.push_back(text_box("e" + std::to_string(i), i * 1000000));
    PerturbationLog log;
    log.entries = {entry("e0", PerturbationKind::color_alteration), entry("e1", PerturbationKind::fill_reset)};
    d.elements[0].status = Status::tentative;  // caught
    d.elements[3].status = Status::tentative;  // clean element
    const auto m = reviewer_metrics(d, log);
    const auto& color = m.per_category.at(Category::color_attributes);
    EXPECT_DOUBLE_EQ(*color.precision, 0.5);
    EXPECT_DOUBLE_EQ(*color.recall, 0.5);
    EXPECT_EQ(color.support, 2);
    EXPECT_FALSE(m.per_category.at(Category::text_attributes).precision);
    EXPECT_FALSE(m.per_category.at(Category::text_attributes).recall);
    EXPECT_DOUBLE_EQ(*m.overall_precision, 0.5);
}

TEST(ReviewerMetrics, NothingFlagged) {
    SlideDoc d;
    d.source_id = "m";
    d.elements = {text_box("e0", 0), text_box("e1", 2000000)};
    PerturbationLog log;
    log.entries = {entry("e1", PerturbationKind::position_shift)};
    const auto m = reviewer_metrics(d, log);
    const auto& c = m.per_category.at(Category::shape_placement);
    EXPECT_DOUBLE_EQ(*c.recall, 0.0);
    EXPECT_FALSE(c.precision);
    EXPECT_FALSE(m.overall_precision);
}

TEST(ReviewerMetrics, MissingLoggedIdIsConsistencyError) {
    SlideDoc d;
    d.source_id = "m";
    d.elements = {text_box("e0", 0)};
    PerturbationLog log;
    log.entries = {entry("e7", PerturbationKind::position_shift)};
    try {
        reviewer_metrics(d, log);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::consistency);
    }
    log.entries = {entry("e7", PerturbationKind::shape_removal)};
    EXPECT_NO_THROW(reviewer_metrics(d, log));
}

TEST(ReviewerMetrics, OracleIsPerfect) {
    const auto slides = gen::load_fixture_deck("corpus").deck.slides;
    for (std::size_t i = 0; i < slides.size(); ++i) {
        PerturbConfig c;
        c.seed = i;
        c.severity = 0.5;
        const auto p = perturb(slides[i], c);
        const auto labeled = make_oracle_reviewer(p.log)->review(p.perturbed);
        const auto m = reviewer_metrics(labeled, p.log);
        for (const auto& [cat, cm] : m.per_category) {
            if (cm.support == 0) continue;
            EXPECT_DOUBLE_EQ(*cm.precision, 1.0);
            EXPECT_DOUBLE_EQ(*cm.recall, 1.0);
        }
        const auto revised = make_oracle_contributor(slides[i])->contribute(labeled);
        const auto r = responsiveness(labeled, revised, &p.log);
        if (r.flagged) EXPECT_DOUBLE_EQ(*r.overall, 1.0);
    }
}

TEST(ReviewerMetrics, MatchesBruteForceRecount) {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const auto d = gen::random_doc(rng, {.min_elements = 1, .max_elements = 6});
        PerturbConfig c;
        c.seed = rng.next();
        c.severity = rng.uniform_real(0.0, 1.0);
        const auto p = perturb(d, c);
        auto labeled = p.perturbed;
        for (auto& e : labeled.elements) e.status = rng.chance(0.5) ? Status::tentative : Status::final;
        const auto m = reviewer_metrics(labeled, p.log);
        const auto want = gen::recount_reviewer(labeled, p.log);
        for (auto cat : all_categories()) {
            EXPECT_EQ(m.per_category.at(cat).precision, want.precision.at(cat));
            EXPECT_EQ(m.per_category.at(cat).recall, want.recall.at(cat));
        }
        EXPECT_EQ(m.overall_precision, want.overall_precision);
    }
}

TEST(Responsiveness, Counting) {
    SlideDoc in;
    in.source_id = "r";
    in.elements = {text_box("e0", 0), text_box("e1", 2000000), text_box("e2", 4000000), text_box("e3", 6000000)};
    for (auto& e : in.elements) e.status = Status::tentative;
    in.elements[3].status = Status::final;

    auto unchanged = with_all_final(in);
    EXPECT_DOUBLE_EQ(*responsiveness(in, unchanged).overall, 0.0);

    auto out = unchanged;
    out.elements[0].position.x += 5;
    out.elements.erase(out.elements.begin() + 1);  // removal counts as altered
    const auto r = responsiveness(in, out);
    EXPECT_EQ(r.flagged, 3);
    EXPECT_EQ(r.altered, 2);
    EXPECT_DOUBLE_EQ(*r.overall, 2.0 / 3.0);
    EXPECT_TRUE(r.per_category.empty());
    EXPECT_FALSE(responsiveness(unchanged, unchanged).overall);
}

TEST(Responsiveness, MatchesBruteForceRecount) {
    Rng rng(32);
    for (int i = 0; i < 300; ++i) {
        auto in = gen::random_doc(rng, {.min_elements = 1, .max_elements = 6});
        for (auto& e : in.elements) e.status = rng.chance(0.5) ? Status::tentative : Status::final;
        auto out = with_all_final(in);
        for (auto& e : out.elements)
            if (rng.chance(0.3)) e.position.y += 1;
        if (!out.elements.empty() && rng.chance(0.3)) out.elements.pop_back();
        const auto r = responsiveness(in, out);
        EXPECT_EQ(r.overall, gen::recount_responsiveness(in, out));
    }
}

TEST(EvaluateTrace, OracleTraceIsAllOnes) {
    const auto slides = gen::load_fixture_deck("corpus").deck.slides;
    PerturbConfig c;
    c.seed = 3;
    c.severity = 0.75;
    const auto p = perturb(slides[10], c);
    RefineOptions o;
    o.initial_all_tentative = false;
    const auto t = refine(p.perturbed, *make_oracle_reviewer(p.log), *make_oracle_contributor(slides[10]), o);
    const auto r = evaluate_trace(t, p.log);
    EXPECT_DOUBLE_EQ(*r.reviewer.overall_precision, 1.0);
    EXPECT_DOUBLE_EQ(*r.responsiveness.overall, 1.0);
    const auto j = metrics_to_json(r);
    EXPECT_TRUE(j["reviewer"]["per_category"].contains("color_attributes"));
    EXPECT_NE(metrics_table(r).find("shape_placement"), std::string::npos);

    const auto initial = refine(p.perturbed, *make_oracle_reviewer(p.log), *make_oracle_contributor(slides[10]));
    EXPECT_THROW(evaluate_trace(initial, p.log), Error);
}

TEST(Judgement, DeterministicBlinding) {
    const auto slides = gen::load_fixture_deck("corpus").deck.slides;
    const auto a = export_judgement(slides[0], slides[1], slides[2], 7);
    const auto b = export_judgement(slides[0], slides[1], slides[2], 7);
    EXPECT_EQ(a.swapped, b.swapped);
    EXPECT_EQ(a.candidate_a_svg, b.candidate_a_svg);
    EXPECT_NE(a.prompt.find("VERDICT"), std::string::npos);

    std::set<bool> seen;
    for (std::uint64_t s = 0; s < 10; ++s) seen.insert(export_judgement(slides[0], slides[1], slides[2], s).swapped);
    EXPECT_EQ(seen.size(), 2u);

    const auto same = export_judgement(slides[0], slides[1], slides[1], 1);
    EXPECT_EQ(same.candidate_a_svg, same.candidate_b_svg);
}

TEST(Judgement, BundleOnDisk) {
    const auto slides = gen::load_fixture_deck("corpus").deck.slides;
    const auto dir = std::filesystem::temp_directory_path() / "slidelab_bundle_test";
    std::filesystem::remove_all(dir);
    const auto b = export_judgement(slides[0], slides[1], slides[2], 3, "case-1");
    write_bundle(b, dir);
    for (const char* f : {"draft.svg", "candidate_a.svg", "candidate_b.svg", "prompt.txt", "mapping.json"})
        EXPECT_TRUE(std::filesystem::exists(dir / "case-1" / f)) << f;
    std::ifstream in(dir / "case-1" / "mapping.json");
    const auto m = mapping_from_json(Json::parse(in));
    EXPECT_EQ(m.bundle_id, "case-1");
    EXPECT_EQ(m.candidate_a == "ours", !b.swapped);
    std::filesystem::remove_all(dir);
}

TEST(WinRate, Arithmetic) {
    const std::vector<BundleMapping> maps{{"b1", "ours", "baseline"}, {"b2", "baseline", "ours"}, {"b3", "ours", "baseline"},
                                          {"b4", "ours", "baseline"}};
    const auto w = win_rate(maps, {{"b1", Verdict::a}, {"b2", Verdict::b}, {"b3", Verdict::b}, {"b4", Verdict::tie}});
    EXPECT_DOUBLE_EQ(w.ours, 0.5);
    EXPECT_DOUBLE_EQ(w.baseline, 0.25);
    EXPECT_DOUBLE_EQ(w.tie, 0.25);

    const auto all = win_rate(maps, {{"b1", Verdict::a}, {"b2", Verdict::b}});
    EXPECT_DOUBLE_EQ(all.ours, 1.0);

    EXPECT_THROW(win_rate(maps, {{"zz", Verdict::a}}), UnknownIdsError);
    EXPECT_THROW(win_rate(maps, {}), Error);
    EXPECT_EQ(verdict_from("tie"), Verdict::tie);
    EXPECT_EQ(verdict_from("B"), Verdict::b);
    EXPECT_THROW(verdict_from("C"), SchemaError);
}

TEST(WinRate, BlindingInvariance) {
    // Flipping every mapping and every A/B verdict gives the same result.
    Rng rng(8);
    std::vector<BundleMapping> maps, flipped;
    std::vector<VerdictRecord> verdicts, flipped_verdicts;
    for (int i = 0; i < 40; ++i) {
        const std::string id = "b" + std::to_string(i);
        const bool swap = rng.chance(0.5);
        maps.push_back({id, swap ? "baseline" : "ours", swap ? "ours" : "baseline"});
        flipped.push_back({id, maps.back().candidate_b, maps.back().candidate_a});
        const auto v = static_cast<Verdict>(rng.index(3));
        verdicts.push_back({id, v});
        flipped_verdicts.push_back({id, v == Verdict::a ? Verdict::b : v == Verdict::b ? Verdict::a : Verdict::tie});
    }
    const auto x = win_rate(maps, verdicts);
    const auto y = win_rate(flipped, flipped_verdicts);
    EXPECT_DOUBLE_EQ(x.ours, y.ours);
    EXPECT_DOUBLE_EQ(x.baseline, y.baseline);
    EXPECT_DOUBLE_EQ(x.ours + x.baseline + x.tie, 1.0);
}
