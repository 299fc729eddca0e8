#include <gtest/gtest.h>

#include "slidelab/error.hpp"
#include "slidelab/pptx.hpp"
#include "slidelab/rng.hpp"
#include "slidelab/slide_json.hpp"
#include "slidelab/validate.hpp"
#include "slidelab/zip.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace slidelab;

namespace {

const std::vector<std::string> kFixtureDecks{"textbox", "chart", "table", "gradient", "group", "media", "theme", "corpus"};

// Export and ingest keep geometry, kind, fill mode/colors and text styling.
void expect_round_trip_equal(const SlideDoc& a, const SlideDoc& b) {
    ASSERT_EQ(a.elements.size(), b.elements.size());
    EXPECT_EQ(a.canvas_width, b.canvas_width);
    EXPECT_EQ(a.canvas_height, b.canvas_height);
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        const auto& x = a.elements[i];
        const auto& y = b.elements[i];
        EXPECT_EQ(x.kind, y.kind);
        EXPECT_EQ(x.position, y.position);
        EXPECT_EQ(x.fill, y.fill);
        EXPECT_EQ(x.text, y.text);
    }
}

}  // namespace

TEST(Ingest, SingleTextBox) {
    const auto r = gen::load_fixture_deck("textbox");
    ASSERT_EQ(r.deck.slides.size(), 1u);
    EXPECT_EQ(r.deck.metadata.slide_count, 1u);
    EXPECT_EQ(r.deck.metadata.title, "textbox");
    const auto& d = r.deck.slides[0];
    EXPECT_EQ(d.source_id, "textbox#slide1");
    ASSERT_EQ(d.elements.size(), 1u);
    const auto& e = d.elements[0];
    EXPECT_EQ(e.id, "e0");
    EXPECT_EQ(e.kind, ShapeKind(AutoShape{"rectangle"}));
    EXPECT_EQ(e.position, (Geometry{914400, 914400, 5486400, 914400, 0.0}));
    EXPECT_EQ(e.fill.mode, FillMode::none);
    ASSERT_TRUE(e.text);
    ASSERT_EQ(e.text->runs.size(), 1u);
    EXPECT_EQ(e.text->runs[0], (TextRun{"Hello world", "Georgia", 24.0, {"1F3A5F", 1.0}}));
    EXPECT_EQ(e.status, Status::final);
    EXPECT_EQ(r.report.parsed_elements, 1u);
    EXPECT_TRUE(r.report.skipped.empty());
}

TEST(Ingest, ChartIsSkippedAndReported) {
    const auto r = gen::load_fixture_deck("chart");
    ASSERT_EQ(r.deck.slides.size(), 1u);
    EXPECT_EQ(r.deck.slides[0].elements.size(), 1u);
    ASSERT_EQ(r.report.skipped.size(), 1u);
    EXPECT_EQ(r.report.skipped[0].reason, SkipReason::chart);
    EXPECT_EQ(r.report.skipped[0].slide_index, 0u);
}

TEST(Ingest, TableIsSkippedAndReported) {
    const auto r = gen::load_fixture_deck("table");
    ASSERT_EQ(r.deck.slides[0].elements.size(), 1u);
    EXPECT_EQ(r.deck.slides[0].elements[0].kind, ShapeKind(AutoShape{"oval"}));
    ASSERT_EQ(r.report.skipped.size(), 1u);
    EXPECT_EQ(r.report.skipped[0].reason, SkipReason::table);
}

TEST(Ingest, GradientStops) {
    const auto r = gen::load_fixture_deck("gradient");
    const auto& f = r.deck.slides[0].elements.at(0).fill;
    EXPECT_EQ(f.mode, FillMode::gradient);
    EXPECT_EQ(f.colors, (std::vector<Color>{{"1D3557", 1.0}, {"A8DADC", 1.0}}));
}

TEST(Ingest, GroupsAreFlattened) {
    const auto r = gen::load_fixture_deck("group");
    const auto& els = r.deck.slides[0].elements;
    ASSERT_EQ(els.size(), 3u);
    EXPECT_EQ(els[0].position, (Geometry{1000000, 1000000, 2000000, 1000000, 0.0}));
    EXPECT_EQ(els[1].position, (Geometry{3500000, 2500000, 1000000, 1000000, 0.0}));
    EXPECT_EQ(els[1].kind, ShapeKind(AutoShape{"oval"}));
    EXPECT_EQ(els[2].kind, ShapeKind(AutoShape{"rounded_rectangle"}));
}

TEST(Ingest, PicturesKeepGeometryOnly) {
    const auto r = gen::load_fixture_deck("media");
    const auto& els = r.deck.slides[0].elements;
    ASSERT_EQ(els.size(), 2u);
    EXPECT_EQ(els[0].kind, ShapeKind(Placeholder{MediaKind::image}));
    EXPECT_FALSE(els[0].text);
    EXPECT_EQ(els[0].position, (Geometry{914400, 914400, 3657600, 2743200, 0.0}));
    ASSERT_EQ(r.report.skipped.size(), 1u);
    EXPECT_EQ(r.report.skipped[0].reason, SkipReason::media_payload_dropped);
}

TEST(Ingest, ThemeColorsAndInheritedPlaceholders) {
    const auto r = gen::load_fixture_deck("theme");
    const auto& els = r.deck.slides[0].elements;
    ASSERT_EQ(els.size(), 2u);
    // Title geometry and text style come from the layout and master.
    EXPECT_GT(els[0].position.width, 0);
    ASSERT_TRUE(els[0].text);
    EXPECT_EQ(els[0].text->runs[0].text, "Inherited title");
    EXPECT_EQ(els[0].text->runs[0].font_size, 44.0);
    EXPECT_EQ(els[0].text->alignment, Alignment::center);
    // accent2 of the default theme
    EXPECT_EQ(els[1].fill.colors.at(0).rgb, "C0504D");
}

TEST(Ingest, EveryFixtureElementValidates) {
    for (const auto& name : kFixtureDecks) {
        const auto r = gen::load_fixture_deck(name);
        std::size_t count = 0;
        for (const auto& s : r.deck.slides) {
            EXPECT_TRUE(validate(s).empty()) << name;
            count += s.elements.size();
        }
        EXPECT_EQ(count, r.report.parsed_elements) << name;
    }
}

TEST(Ingest, CorpusFitsTokenBudget) {
    const auto r = gen::load_fixture_deck("corpus");
    ASSERT_EQ(r.deck.slides.size(), 50u);
    for (const auto& s : r.deck.slides) EXPECT_LT(estimate_token_length(to_json(s)), kTokenBudget) << s.source_id;
}

TEST(Ingest, EmptyZipIsMissingPresentationPart) {
    const auto bytes = zip::Writer{}.finish();
    try {
        (void)load_pptx(bytes);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::missing_presentation_part);
        EXPECT_STREQ(e.what(), "missing presentation part");
    }
}

TEST(Ingest, NonZipInput) {
    try {
        (void)load_pptx("%PDF-1.4 not a deck");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_an_archive);
    }
}

TEST(Ingest, MalformedSlideIsSkippedNotFatal) {
    Deck deck;
    Rng rng(5);
    for (int i = 0; i < 3; ++i) deck.slides.push_back(gen::random_doc(rng, {.min_elements = 1, .max_elements = 4}));
    const auto bytes = export_pptx(deck);
    zip::Reader in(bytes);
    zip::Writer out;
    for (const auto& n : in.names()) out.add(n, n == "ppt/slides/slide2.xml" ? std::string("<p:sld><broken") : in.read(n));
    const auto r = load_pptx(std::move(out).finish());
    EXPECT_EQ(r.deck.slides.size(), 2u);
    bool found = false;
    for (const auto& s : r.report.skipped) found = found || (s.slide_index == 1 && s.reason == SkipReason::other);
    EXPECT_TRUE(found);
}

TEST(Ingest, FuzzedArchivesNeverEscapeAsUnreportedFailures) {
    const auto good = gen::read_fixture("textbox.pptx");
    Rng rng(1234);
    for (int i = 0; i < 300; ++i) {
        auto bytes = good;
        const auto flips = rng.uniform_int(1, 16);
        for (int f = 0; f < flips; ++f) bytes[rng.index(bytes.size())] = static_cast<char>(rng.next());
        try {
            const auto r = load_pptx(bytes);
            for (const auto& s : r.deck.slides) EXPECT_TRUE(validate(s).empty());
        } catch (const Error&) {
        }
    }
}

TEST(Export, EmptyDeckIsLoadable) {
    const auto r = load_pptx(export_pptx(Deck{}));
    EXPECT_TRUE(r.deck.slides.empty());
    EXPECT_EQ(r.deck.metadata.slide_count, 0u);
}

TEST(Export, RejectsInvalidSlides) {
    Deck deck;
    deck.slides.emplace_back();
    deck.slides[0].canvas_width = 0;
    EXPECT_THROW((void)export_pptx(deck), ValidationError);
}

TEST(Export, FixtureDecksRoundTrip) {
    for (const auto& name : kFixtureDecks) {
        SCOPED_TRACE(name);
        const auto first = gen::load_fixture_deck(name);
        const auto bytes = export_pptx(first.deck);
        EXPECT_EQ(bytes, export_pptx(first.deck));
        const auto second = load_pptx(bytes, name);
        ASSERT_EQ(first.deck.slides.size(), second.deck.slides.size());
        EXPECT_EQ(second.deck.metadata.title, name);
        for (std::size_t i = 0; i < first.deck.slides.size(); ++i)
            expect_round_trip_equal(first.deck.slides[i], second.deck.slides[i]);
        // Only media drops survive a second pass; their count is stable.
        std::size_t media_first = 0, media_second = 0;
        for (const auto& s : first.report.skipped) media_first += s.reason == SkipReason::media_payload_dropped;
        for (const auto& s : second.report.skipped) media_second += s.reason == SkipReason::media_payload_dropped;
        EXPECT_EQ(media_first, media_second);
        EXPECT_EQ(load_pptx(export_pptx(second.deck), name).report, second.report);
    }
}

TEST(Export, RandomDocsRoundTrip) {
    Rng rng(77);
    for (int i = 0; i < 60; ++i) {
        Deck deck;
        // One canvas per deck; the package has a single slide size.
        const auto first = gen::random_doc(rng, {.min_elements = 0, .max_elements = 8});
        deck.slides.push_back(first);
        const auto back = load_pptx(export_pptx(deck)).deck;
        ASSERT_EQ(back.slides.size(), 1u);
        const auto& a = first.elements;
        const auto& b = back.slides[0].elements;
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_EQ(a[k].kind, b[k].kind);
            EXPECT_EQ(a[k].position.x, b[k].position.x);
            EXPECT_EQ(a[k].position.y, b[k].position.y);
            EXPECT_EQ(a[k].position.width, b[k].position.width);
            EXPECT_EQ(a[k].position.height, b[k].position.height);
            EXPECT_EQ(a[k].fill.mode, b[k].fill.mode);
            EXPECT_EQ(a[k].fill.colors.size(), b[k].fill.colors.size());
            if (a[k].text && !a[k].text->runs[0].text.empty()) {
                ASSERT_TRUE(b[k].text);
                EXPECT_EQ(b[k].text->alignment, a[k].text->alignment);
                EXPECT_EQ(b[k].text->runs.front().font_name, a[k].text->runs.front().font_name);
                EXPECT_EQ(b[k].text->runs.front().font_size, a[k].text->runs.front().font_size);
            }
        }
    }
}

TEST(DeckJson, RoundTrip) {
    const auto r = gen::load_fixture_deck("corpus");
    const auto text = deck_to_json(r.deck);
    EXPECT_EQ(deck_from_json(text), r.deck);
    EXPECT_THROW((void)deck_from_json(R"({"title":"x","slide_count":3,"slides":[]})"), SchemaError);
}
