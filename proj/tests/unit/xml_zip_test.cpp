#include <gtest/gtest.h>

#include "slidelab/error.hpp"
#include "slidelab/rng.hpp"
#include "slidelab/xml.hpp"
#include "slidelab/zip.hpp"

using namespace slidelab;

TEST(Xml, ParsesNamespacesEntitiesAndCdata) {
    const auto root = xml::parse(R"(<?xml version="1.0"?>
<!DOCTYPE x [<!ENTITY boom "boom">]>
<p:sld xmlns:p="urn:p" xmlns:a="urn:a"><a:t>a &amp; b &#x41;&#66;</a:t><a:t><![CDATA[<raw>]]></a:t><p:e v='1'/></p:sld>)");
    EXPECT_EQ(root.name, "p:sld");
    EXPECT_EQ(root.local_name(), "sld");
    const auto ts = root.children_named("t");
    ASSERT_EQ(ts.size(), 2u);
    EXPECT_EQ(ts[0]->text, "a & b AB");
    EXPECT_EQ(ts[1]->text, "<raw>");
    EXPECT_EQ(root.child("e")->attr("v"), "1");
    EXPECT_EQ(root.attr("xmlns:p"), "urn:p");
}

TEST(Xml, RejectsMalformed) {
    for (const char* bad : {"", "<a>", "<a></b>", "<a b=1/>", "<a>&bogus;</a>", "<a/><b/>", "text"}) {
        EXPECT_THROW((void)xml::parse(bad), Error) << bad;
    }
}

TEST(Xml, DeepNestingIsAnErrorNotACrash) {
    std::string deep;
    for (int i = 0; i < 100000; ++i) deep += "<a>";
    EXPECT_THROW((void)xml::parse(deep), Error);
}

TEST(Xml, Escape) { EXPECT_EQ(xml::escape("<a & \"b\">"), "&lt;a &amp; &quot;b&quot;&gt;"); }

TEST(Zip, WriterReaderRoundTrip) {
    zip::Writer w;
    std::string big(100000, 'x');
    w.add("a.txt", "hello");
    w.add("dir/b.bin", big);
    w.add("stored", "raw", false);
    const auto bytes = std::move(w).finish();

    zip::Reader r(bytes);
    EXPECT_EQ(r.names(), (std::vector<std::string>{"a.txt", "dir/b.bin", "stored"}));
    EXPECT_EQ(r.read("a.txt"), "hello");
    EXPECT_EQ(r.read("dir/b.bin"), big);
    EXPECT_EQ(r.read("stored"), "raw");
    EXPECT_FALSE(r.contains("missing"));
    EXPECT_THROW((void)r.read("missing"), Error);
}

TEST(Zip, WriterIsDeterministic) {
    auto make = [] {
        zip::Writer w;
        w.add("x", "payload");
        return std::move(w).finish();
    };
    EXPECT_EQ(make(), make());
}

TEST(Zip, NotAnArchive) {
    try {
        zip::Reader r("definitely not a zip file");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_an_archive);
    }
}

TEST(Zip, CorruptionIsAlwaysAReportedError) {
    zip::Writer w;
    w.add("a.xml", std::string(5000, 'q') + "tail");
    w.add("b.xml", "short");
    const auto good = std::move(w).finish();
    Rng rng(99);
    for (int i = 0; i < 2000; ++i) {
        auto bytes = good;
        const auto flips = rng.uniform_int(1, 8);
        for (int f = 0; f < flips; ++f) bytes[rng.index(bytes.size())] = static_cast<char>(rng.next());
        if (rng.chance(0.2)) bytes.resize(rng.index(bytes.size()));
        try {
            zip::Reader r(bytes);
            for (const auto& n : r.names()) (void)r.read(n);
        } catch (const Error&) {
        }
    }
}
