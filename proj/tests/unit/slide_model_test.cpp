#include <gtest/gtest.h>

#include <algorithm>

#include <nlohmann/json.hpp>

#include "slidelab/diff.hpp"
#include "slidelab/error.hpp"
#include "slidelab/shape_registry.hpp"
#include "slidelab/slide_json.hpp"
#include "slidelab/validate.hpp"
#include "support/generators.hpp"

using namespace slidelab;

namespace {

SlideDoc red_square_doc() {
    SlideDoc d;
    d.source_id = "fixture/red";
    Element e;
    e.id = "e0";
    e.kind = AutoShape{"rectangle"};
    e.position = {0, 0, 914400, 914400, 0.0};
    e.fill = {FillMode::solid, {{"FF0000", 1.0}}, 0.0};
    d.elements.push_back(e);
    return d;
}

// Rebuilds every object of a JSON tree with its keys in a random order.
nlohmann::ordered_json permute_keys(const nlohmann::ordered_json& j, Rng& rng) {
    if (j.is_array()) {
        auto out = nlohmann::ordered_json::array();
        for (const auto& v : j) out.push_back(permute_keys(v, rng));
        return out;
    }
    if (!j.is_object()) return j;
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    rng.shuffle(keys);
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& k : keys) out[k] = permute_keys(j.at(k), rng);
    return out;
}

std::size_t count_occurrences(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(ShapeRegistry, HasThirtyFourUniqueNames) {
    const auto& entries = ShapeRegistry::instance().entries();
    ASSERT_EQ(entries.size(), 34u);
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            EXPECT_NE(entries[i].name, entries[j].name);
            EXPECT_NE(entries[i].preset, entries[j].preset);
        }
    EXPECT_TRUE(ShapeRegistry::instance().contains("rounded_rectangle"));
    EXPECT_FALSE(ShapeRegistry::instance().contains("smart_art"));
    EXPECT_EQ(ShapeRegistry::instance().name_for_preset("flowChartConnector"), "circle");
}

TEST(ToJson, EmptyDocument) {
    SlideDoc d;
    EXPECT_EQ(to_json(d), R"({"source_id":"","canvas_width":12192000,"canvas_height":6858000,"elements":[]})");
}

TEST(ToJson, RedSquareFixture) {
    const std::string expected =
        R"({"source_id":"fixture/red","canvas_width":12192000,"canvas_height":6858000,"elements":[)"
        R"({"id":"e0","kind":{"auto_shape":"rectangle"},"position":{"x":0,"y":0,"width":914400,"height":914400,"rotation":0.0},)"
        R"("fill":{"mode":"solid","colors":[{"rgb":"FF0000","alpha":1.0}],"transparency":0.0}}]})";
    const auto d = red_square_doc();
    EXPECT_EQ(to_json(d), expected);
    EXPECT_EQ(from_json(expected), d);
}

TEST(ToJson, StatusWrittenOnlyWhenSomethingIsTentative) {
    auto d = red_square_doc();
    auto second = d.elements[0];
    second.id = "e1";
    d.elements.push_back(second);
    EXPECT_EQ(count_occurrences(to_json(d), "\"status\""), 0u);

    d.elements[1].status = Status::tentative;
    const auto text = to_json(d);
    EXPECT_EQ(count_occurrences(text, "\"status\":\"TENTATIVE\""), 1u);
    EXPECT_EQ(count_occurrences(text, "\"status\":\"FINAL\""), 1u);
    EXPECT_EQ(from_json(text), d);
}

TEST(ToJson, RejectsInvalidDocumentNamingIds) {
    auto d = red_square_doc();
    d.elements[0].fill = {FillMode::gradient, {{"FF0000", 1.0}}, 0.0};
    try {
        (void)to_json(d);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.element_ids(), std::vector<std::string>{"e0"});
    }
}

TEST(FromJson, UnknownShapeIsScopeError) {
    auto text = to_json(red_square_doc());
    text.replace(text.find("rectangle"), 9, "smart_art");
    try {
        (void)from_json(text);
        FAIL() << "expected ScopeError";
    } catch (const ScopeError& e) {
        EXPECT_EQ(e.element_id(), "e0");
        EXPECT_NE(std::string(e.what()).find("smart_art"), std::string::npos);
    }
}

TEST(FromJson, MalformedJsonReportsOffset) {
    try {
        (void)from_json(R"({"source_id":"x",)");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parse);
        EXPECT_GT(e.offset(), 0u);
    }
}

TEST(FromJson, SchemaViolationCarriesFieldPath) {
    auto text = to_json(red_square_doc());
    text.replace(text.find("\"x\":0"), 5, "\"x\":\"zero\"");
    try {
        (void)from_json(text);
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.path(), "$.elements[0].position.x");
    }
}

TEST(FromJson, StrictRejectsUnknownKeysAndReordering) {
    const auto canonical = to_json(red_square_doc());
    auto extra = canonical;
    extra.insert(1, R"("note":"hi",)");
    EXPECT_THROW((void)from_json(extra), SchemaError);
    EXPECT_EQ(from_json(extra, ParseMode::tolerant), red_square_doc());

    Rng rng(7);
    const auto permuted = permute_keys(nlohmann::ordered_json::parse(canonical), rng).dump();
    ASSERT_NE(permuted, canonical);
    EXPECT_THROW((void)from_json(permuted), SchemaError);
}

TEST(FromJson, TolerantAcceptsTrailingCommasAndDefaults) {
    const std::string text =
        R"({"elements":[{"id":"e0","kind":{"auto_shape":"oval"},"position":{"x":1,"y":2,"width":3,"height":4,},)"
        R"("fill":{"mode":"solid","colors":[{"rgb":"00ff00"},],},},],"canvas_width":100,"canvas_height":50,"source_id":"s",})";
    const auto d = from_json(text, ParseMode::tolerant);
    ASSERT_EQ(d.elements.size(), 1u);
    EXPECT_EQ(d.elements[0].fill.colors[0].rgb, "00FF00");
    EXPECT_EQ(d.elements[0].fill.colors[0].alpha, 1.0);
    EXPECT_EQ(d.elements[0].position.rotation, 0.0);
    EXPECT_EQ(strip_trailing_commas(R"({"a":",}",})"), R"({"a":",}"})");
}

TEST(FromJson, TolerantPermutationProperty) {
    Rng rng(20240501);
    for (int i = 0; i < 100; ++i) {
        const auto d = gen::random_doc(rng);
        const auto permuted = permute_keys(nlohmann::ordered_json::parse(to_json(d)), rng).dump();
        ASSERT_EQ(from_json(permuted, ParseMode::tolerant), d) << permuted;
    }
}

TEST(JsonCodec, RoundTripAndCanonicalityProperty) {
    Rng rng(1);
    for (int i = 0; i < 300; ++i) {
        const auto d = gen::random_doc(rng);
        ASSERT_TRUE(validate(d).empty());
        const auto text = to_json(d);
        const auto back = from_json(text);
        ASSERT_EQ(back, d) << text;
        ASSERT_EQ(to_json(back), text);
    }
}

TEST(Diff, IdentityIsEmpty) {
    Rng rng(3);
    const auto d = gen::random_doc(rng, {.min_elements = 3});
    EXPECT_TRUE(diff(d, d).empty());
}

TEST(Diff, ShiftedElement) {
    auto a = red_square_doc();
    auto b = a;
    b.elements[0].position.x += 100;
    const auto d = diff(a, b);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0], (ElementDiff{"e0", ChangeKind::modified, {"position.x"}}));
}

TEST(Diff, RemovedElementAndSymmetry) {
    Rng rng(4);
    const auto a = gen::random_doc(rng, {.min_elements = 4});
    auto b = a;
    const auto removed = b.elements[2].id;
    b.elements.erase(b.elements.begin() + 2);
    const auto forward = diff(a, b);
    ASSERT_EQ(forward.size(), 1u);
    EXPECT_EQ(forward[0], (ElementDiff{removed, ChangeKind::removed, {}}));
    const auto backward = diff(b, a);
    ASSERT_EQ(backward.size(), 1u);
    EXPECT_EQ(backward[0], (ElementDiff{removed, ChangeKind::added, {}}));
}

TEST(Diff, ReorderAndStatus) {
    auto a = red_square_doc();
    auto second = a.elements[0];
    second.id = "e1";
    a.elements.push_back(second);
    auto b = a;
    std::swap(b.elements[0], b.elements[1]);
    EXPECT_EQ(diff(a, b).size(), 2u);

    b = a;
    b.elements[1].status = Status::tentative;
    EXPECT_EQ(diff(a, b).size(), 1u);
    EXPECT_TRUE(diff(a, b, {.ignore_status = true}).empty());
}

TEST(Validate, Examples) {
    EXPECT_TRUE(validate(red_square_doc()).empty());

    auto dup = red_square_doc();
    dup.elements.push_back(dup.elements[0]);
    auto v = validate(dup);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].rule, "id.unique");
    EXPECT_EQ(v[0].element_ids, (std::vector<std::string>{"e0", "e0"}));

    auto grad = red_square_doc();
    grad.elements[0].fill.mode = FillMode::gradient;
    v = validate(grad);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].rule, "fill.gradient");
}

TEST(Validate, PlaceholderWithTextAndRunRules) {
    auto d = red_square_doc();
    d.elements[0].kind = Placeholder{MediaKind::image};
    d.elements[0].fill = {};
    d.elements[0].text = TextFrame{{{"hi", "Lato", 12, {}}}, 1.0, Alignment::left};
    EXPECT_EQ(validate(d).at(0).rule, "placeholder.text");

    auto r = red_square_doc();
    r.elements[0].text = TextFrame{{{"", "Lato", 12, {}}, {"x", "Lato", 12, {}}}, 1.0, Alignment::left};
    EXPECT_EQ(validate(r).at(0).rule, "text.empty_run");
    r.elements[0].text->runs.pop_back();
    EXPECT_TRUE(validate(r).empty());

    SlideDoc bad;
    bad.canvas_width = 0;
    EXPECT_EQ(validate(bad).at(0).rule, "canvas.extent");
}

TEST(TokenEstimate, Formula) {
    EXPECT_EQ(estimate_token_length(""), 0u);
    EXPECT_EQ(estimate_token_length(std::string(4096, 'a')), 1024u);
    EXPECT_EQ(estimate_token_length("abcde"), 2u);
}
