#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "slidelab/error.hpp"
#include "slidelab/pptx.hpp"
#include "slidelab/shape_registry.hpp"
#include "slidelab/slide_json.hpp"
#include "slidelab/validate.hpp"
#include "slidelab/xml.hpp"
#include "slidelab/zip.hpp"

namespace slidelab {

namespace {

constexpr const char* kXmlDecl = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
constexpr const char* kNsA = "http://schemas.openxmlformats.org/drawingml/2006/main";
constexpr const char* kNsR = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";
constexpr const char* kNsP = "http://schemas.openxmlformats.org/presentationml/2006/main";
constexpr const char* kRelBase = "http://schemas.openxmlformats.org/officeDocument/2006/relationships/";

// 1x1 transparent PNG standing in for dropped image payloads.
const unsigned char kPixelPng[] = {
    0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00, 0x00, 0x1F, 0x15, 0xC4, 0x89, 0x00, 0x00, 0x00,
    0x0D, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9C, 0x63, 0x00, 0x01, 0x00, 0x00, 0x05, 0x00, 0x01, 0x0D, 0x0A, 0x2D,
    0xB4, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};

std::string esc(std::string_view s) {
    std::string clean;
    clean.reserve(s.size());
    for (char c : s)
        if (static_cast<unsigned char>(c) >= 0x20 || c == '\t') clean += c;
    return xml::escape(clean);
}

std::string rel(const std::string& id, const std::string& type, const std::string& target, bool external = false) {
    return "<Relationship Id=\"" + id + "\" Type=\"" + kRelBase + type + "\" Target=\"" + esc(target) + "\"" +
           (external ? " TargetMode=\"External\"" : "") + "/>";
}

std::string rels_part(const std::string& body) {
    return std::string(kXmlDecl) +
           "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">" + body +
           "</Relationships>";
}

long long per_cent_thousand(double fraction) { return std::llround(std::clamp(fraction, 0.0, 1.0) * 100000.0); }

std::string color_xml(const Color& c, double transparency) {
    const double alpha = c.alpha * (1.0 - transparency);
    std::string out = "<a:srgbClr val=\"" + c.rgb + "\"";
    if (alpha < 1.0) return out + "><a:alpha val=\"" + std::to_string(per_cent_thousand(alpha)) + "\"/></a:srgbClr>";
    return out + "/>";
}

std::string fill_xml(const Fill& f) {
    switch (f.mode) {
        case FillMode::none: return "<a:noFill/>";
        case FillMode::solid: return "<a:solidFill>" + color_xml(f.colors.at(0), f.transparency) + "</a:solidFill>";
        case FillMode::gradient: {
            std::string out = "<a:gradFill rotWithShape=\"1\"><a:gsLst>";
            const auto n = f.colors.size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto pos = n > 1 ? static_cast<long long>(i * 100000 / (n - 1)) : 0;
                out += "<a:gs pos=\"" + std::to_string(pos) + "\">" + color_xml(f.colors[i], f.transparency) + "</a:gs>";
            }
            return out + "</a:gsLst><a:lin ang=\"5400000\" scaled=\"0\"/></a:gradFill>";
        }
        case FillMode::pattern: {
            std::string out = "<a:pattFill prst=\"pct50\"><a:fgClr>" + color_xml(f.colors.at(0), f.transparency) + "</a:fgClr>";
            if (f.colors.size() > 1) out += "<a:bgClr>" + color_xml(f.colors[1], f.transparency) + "</a:bgClr>";
            return out + "</a:pattFill>";
        }
    }
    return "<a:noFill/>";
}

std::string xfrm_xml(const Geometry& g) {
    double rot = std::fmod(g.rotation, 360.0);
    if (rot < 0) rot += 360.0;
    const auto rot_units = std::llround(rot * 60000.0) % 21600000;
    std::string out = "<a:xfrm";
    if (rot_units != 0) out += " rot=\"" + std::to_string(rot_units) + "\"";
    return out + "><a:off x=\"" + std::to_string(g.x) + "\" y=\"" + std::to_string(g.y) + "\"/><a:ext cx=\"" +
           std::to_string(g.width) + "\" cy=\"" + std::to_string(g.height) + "\"/></a:xfrm>";
}

std::string_view algn(Alignment a) {
    switch (a) {
        case Alignment::left: return "l";
        case Alignment::center: return "ctr";
        case Alignment::right: return "r";
        case Alignment::justify: return "just";
    }
    return "l";
}

std::string text_xml(const TextFrame& tf) {
    std::string ppr = "<a:pPr algn=\"" + std::string(algn(tf.alignment)) + "\"><a:lnSpc><a:spcPct val=\"" +
                      std::to_string(std::llround(tf.line_spacing * 100000.0)) + "\"/></a:lnSpc></a:pPr>";
    std::string out = "<p:txBody><a:bodyPr wrap=\"square\" rtlCol=\"0\"/><a:lstStyle/><a:p>" + ppr;
    for (const auto& run : tf.runs) {
        const std::string rpr = "<a:rPr lang=\"en-US\" sz=\"" + std::to_string(std::llround(run.font_size * 100.0)) +
                                "\" dirty=\"0\"><a:solidFill>" + color_xml(run.color, 0.0) + "</a:solidFill><a:latin typeface=\"" +
                                esc(run.font_name) + "\"/></a:rPr>";
        std::size_t start = 0;
        while (true) {
            const auto nl = run.text.find('\n', start);
            const auto piece = run.text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
            if (!piece.empty()) out += "<a:r>" + rpr + "<a:t>" + esc(piece) + "</a:t></a:r>";
            if (nl == std::string::npos) break;
            out += "</a:p><a:p>" + ppr;
            start = nl + 1;
        }
    }
    return out + "</a:p></p:txBody>";
}

struct SlideParts {
    std::string xml;
    std::string rels;
    bool uses_image = false;
};

SlideParts slide_xml(const SlideDoc& doc) {
    SlideParts parts;
    std::string rels = rel("rId1", "slideLayout", "../slideLayouts/slideLayout1.xml");
    std::string tree;
    int shape_id = 2;
    int next_rel = 2;
    for (const auto& e : doc.elements) {
        const std::string id = std::to_string(shape_id++);
        const std::string name = esc(kind_label(e.kind) + " " + e.id);
        if (const auto* ph = std::get_if<Placeholder>(&e.kind)) {
            const std::string rid = "rId" + std::to_string(next_rel++);
            std::string nvpr = "<p:nvPr/>";
            if (ph->media == MediaKind::video) {
                rels += rel(rid, "video", "media.mp4", true);
                nvpr = "<p:nvPr><a:videoFile r:link=\"" + rid + "\"/></p:nvPr>";
            } else {
                rels += rel(rid, "image", "../media/image1.png");
                parts.uses_image = true;
            }
            const std::string blip = ph->media == MediaKind::image ? "<a:blip r:embed=\"" + rid + "\"/>" : "<a:blip/>";
            tree += "<p:pic><p:nvPicPr><p:cNvPr id=\"" + id + "\" name=\"" + name +
                    "\"/><p:cNvPicPr><a:picLocks noChangeAspect=\"1\"/></p:cNvPicPr>" + nvpr + "</p:nvPicPr><p:blipFill>" +
                    blip + "<a:stretch><a:fillRect/></a:stretch></p:blipFill><p:spPr>" + xfrm_xml(e.position) +
                    "<a:prstGeom prst=\"rect\"><a:avLst/></a:prstGeom></p:spPr></p:pic>";
            continue;
        }
        const auto& shape = std::get<AutoShape>(e.kind).name;
        const auto preset = ShapeRegistry::instance().preset_for(shape).value_or("rect");
        const bool is_line = shape == "line";
        std::string sppr = xfrm_xml(e.position) + "<a:prstGeom prst=\"" + preset + "\"><a:avLst/></a:prstGeom>";
        if (is_line) sppr += "<a:noFill/><a:ln w=\"12700\">" + fill_xml(e.fill) + "</a:ln>";
        else sppr += fill_xml(e.fill) + "<a:ln><a:noFill/></a:ln>";
        tree += "<p:sp><p:nvSpPr><p:cNvPr id=\"" + id + "\" name=\"" + name + "\"/><p:cNvSpPr" +
                (e.text ? " txBox=\"1\"" : "") + "/><p:nvPr/></p:nvSpPr><p:spPr>" + sppr + "</p:spPr>";
        if (e.text) tree += text_xml(*e.text);
        tree += "</p:sp>";
    }
    parts.xml = std::string(kXmlDecl) + "<p:sld xmlns:a=\"" + kNsA + "\" xmlns:r=\"" + kNsR + "\" xmlns:p=\"" + kNsP +
                "\"><p:cSld><p:spTree><p:nvGrpSpPr><p:cNvPr id=\"1\" name=\"\"/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr>"
                "<p:grpSpPr><a:xfrm><a:off x=\"0\" y=\"0\"/><a:ext cx=\"0\" cy=\"0\"/><a:chOff x=\"0\" y=\"0\"/>"
                "<a:chExt cx=\"0\" cy=\"0\"/></a:xfrm></p:grpSpPr>" +
                tree + "</p:spTree></p:cSld><p:clrMapOvr><a:masterClrMapping/></p:clrMapOvr></p:sld>";
    parts.rels = rels_part(rels);
    return parts;
}

std::string theme_xml() {
    std::string s = std::string(kXmlDecl) + "<a:theme xmlns:a=\"" + kNsA + "\" name=\"Office Theme\"><a:themeElements>";
    s += "<a:clrScheme name=\"Office\">"
         "<a:dk1><a:sysClr val=\"windowText\" lastClr=\"000000\"/></a:dk1>"
         "<a:lt1><a:sysClr val=\"window\" lastClr=\"FFFFFF\"/></a:lt1>"
         "<a:dk2><a:srgbClr val=\"44546A\"/></a:dk2><a:lt2><a:srgbClr val=\"E7E6E6\"/></a:lt2>"
         "<a:accent1><a:srgbClr val=\"4472C4\"/></a:accent1><a:accent2><a:srgbClr val=\"ED7D31\"/></a:accent2>"
         "<a:accent3><a:srgbClr val=\"A5A5A5\"/></a:accent3><a:accent4><a:srgbClr val=\"FFC000\"/></a:accent4>"
         "<a:accent5><a:srgbClr val=\"5B9BD5\"/></a:accent5><a:accent6><a:srgbClr val=\"70AD47\"/></a:accent6>"
         "<a:hlink><a:srgbClr val=\"0563C1\"/></a:hlink><a:folHlink><a:srgbClr val=\"954F72\"/></a:folHlink>"
         "</a:clrScheme>";
    s += "<a:fontScheme name=\"Office\"><a:majorFont><a:latin typeface=\"Calibri Light\"/><a:ea typeface=\"\"/>"
         "<a:cs typeface=\"\"/></a:majorFont><a:minorFont><a:latin typeface=\"Calibri\"/><a:ea typeface=\"\"/>"
         "<a:cs typeface=\"\"/></a:minorFont></a:fontScheme>";
    const std::string solid = "<a:solidFill><a:schemeClr val=\"phClr\"/></a:solidFill>";
    const std::string line = "<a:ln w=\"6350\"><a:solidFill><a:schemeClr val=\"phClr\"/></a:solidFill></a:ln>";
    s += "<a:fmtScheme name=\"Office\"><a:fillStyleLst>" + solid + solid + solid + "</a:fillStyleLst><a:lnStyleLst>" +
         line + line + line + "</a:lnStyleLst><a:effectStyleLst><a:effectStyle><a:effectLst/></a:effectStyle>"
         "<a:effectStyle><a:effectLst/></a:effectStyle><a:effectStyle><a:effectLst/></a:effectStyle></a:effectStyleLst>"
         "<a:bgFillStyleLst>" + solid + solid + solid + "</a:bgFillStyleLst></a:fmtScheme>";
    return s + "</a:themeElements></a:theme>";
}

std::string empty_tree() {
    return "<p:cSld><p:spTree><p:nvGrpSpPr><p:cNvPr id=\"1\" name=\"\"/><p:cNvGrpSpPr/><p:nvPr/></p:nvGrpSpPr>"
           "<p:grpSpPr/></p:spTree></p:cSld>";
}

std::string master_xml() {
    return std::string(kXmlDecl) + "<p:sldMaster xmlns:a=\"" + kNsA + "\" xmlns:r=\"" + kNsR + "\" xmlns:p=\"" + kNsP +
           "\">" + empty_tree() +
           "<p:clrMap bg1=\"lt1\" tx1=\"dk1\" bg2=\"lt2\" tx2=\"dk2\" accent1=\"accent1\" accent2=\"accent2\" "
           "accent3=\"accent3\" accent4=\"accent4\" accent5=\"accent5\" accent6=\"accent6\" hlink=\"hlink\" "
           "folHlink=\"folHlink\"/><p:sldLayoutIdLst><p:sldLayoutId id=\"2147483649\" r:id=\"rId1\"/></p:sldLayoutIdLst>"
           "</p:sldMaster>";
}

std::string layout_xml() {
    return std::string(kXmlDecl) + "<p:sldLayout xmlns:a=\"" + kNsA + "\" xmlns:r=\"" + kNsR + "\" xmlns:p=\"" + kNsP +
           "\" type=\"blank\" preserve=\"1\">" + empty_tree() +
           "<p:clrMapOvr><a:masterClrMapping/></p:clrMapOvr></p:sldLayout>";
}

}  // namespace

std::string export_pptx(const Deck& deck) {
    for (const auto& s : deck.slides) ensure_valid(s);
    const Emu width = deck.slides.empty() ? 12192000 : deck.slides.front().canvas_width;
    const Emu height = deck.slides.empty() ? 6858000 : deck.slides.front().canvas_height;

    zip::Writer zw;
    bool any_image = false;
    std::vector<SlideParts> slides;
    for (const auto& s : deck.slides) {
        slides.push_back(slide_xml(s));
        any_image = any_image || slides.back().uses_image;
    }

    std::string types = std::string(kXmlDecl) +
                        "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
                        "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
                        "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
                        "<Default Extension=\"png\" ContentType=\"image/png\"/>"
                        "<Override PartName=\"/ppt/presentation.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.presentationml.presentation.main+xml\"/>"
                        "<Override PartName=\"/ppt/slideMasters/slideMaster1.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.presentationml.slideMaster+xml\"/>"
                        "<Override PartName=\"/ppt/slideLayouts/slideLayout1.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.presentationml.slideLayout+xml\"/>"
                        "<Override PartName=\"/ppt/theme/theme1.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.theme+xml\"/>"
                        "<Override PartName=\"/docProps/core.xml\" ContentType=\"application/vnd.openxmlformats-package.core-properties+xml\"/>";
    for (std::size_t i = 0; i < slides.size(); ++i)
        types += "<Override PartName=\"/ppt/slides/slide" + std::to_string(i + 1) +
                 ".xml\" ContentType=\"application/vnd.openxmlformats-officedocument.presentationml.slide+xml\"/>";
    types += "</Types>";
    zw.add("[Content_Types].xml", types);

    zw.add("_rels/.rels", rels_part(rel("rId1", "officeDocument", "ppt/presentation.xml") +
                                    "<Relationship Id=\"rId2\" Type=\"http://schemas.openxmlformats.org/package/2006/"
                                    "relationships/metadata/core-properties\" Target=\"docProps/core.xml\"/>"));
    zw.add("docProps/core.xml",
           std::string(kXmlDecl) +
               "<cp:coreProperties xmlns:cp=\"http://schemas.openxmlformats.org/package/2006/metadata/core-properties\" "
               "xmlns:dc=\"http://purl.org/dc/elements/1.1/\"><dc:title>" +
               esc(deck.metadata.title) + "</dc:title></cp:coreProperties>");

    std::string pres_rels = rel("rId1", "slideMaster", "slideMasters/slideMaster1.xml") + rel("rId2", "theme", "theme/theme1.xml");
    std::string sld_ids;
    for (std::size_t i = 0; i < slides.size(); ++i) {
        const std::string rid = "rId" + std::to_string(i + 3);
        pres_rels += rel(rid, "slide", "slides/slide" + std::to_string(i + 1) + ".xml");
        sld_ids += "<p:sldId id=\"" + std::to_string(256 + i) + "\" r:id=\"" + rid + "\"/>";
    }
    zw.add("ppt/presentation.xml",
           std::string(kXmlDecl) + "<p:presentation xmlns:a=\"" + kNsA + "\" xmlns:r=\"" + kNsR + "\" xmlns:p=\"" + kNsP +
               "\"><p:sldMasterIdLst><p:sldMasterId id=\"2147483648\" r:id=\"rId1\"/></p:sldMasterIdLst>" +
               (sld_ids.empty() ? "" : "<p:sldIdLst>" + sld_ids + "</p:sldIdLst>") + "<p:sldSz cx=\"" +
               std::to_string(width) + "\" cy=\"" + std::to_string(height) + "\"/><p:notesSz cx=\"6858000\" cy=\"9144000\"/></p:presentation>");
    zw.add("ppt/_rels/presentation.xml.rels", rels_part(pres_rels));
    zw.add("ppt/slideMasters/slideMaster1.xml", master_xml());
    zw.add("ppt/slideMasters/_rels/slideMaster1.xml.rels",
           rels_part(rel("rId1", "slideLayout", "../slideLayouts/slideLayout1.xml") + rel("rId2", "theme", "../theme/theme1.xml")));
    zw.add("ppt/slideLayouts/slideLayout1.xml", layout_xml());
    zw.add("ppt/slideLayouts/_rels/slideLayout1.xml.rels", rels_part(rel("rId1", "slideMaster", "../slideMasters/slideMaster1.xml")));
    zw.add("ppt/theme/theme1.xml", theme_xml());
    for (std::size_t i = 0; i < slides.size(); ++i) {
        const auto n = std::to_string(i + 1);
        zw.add("ppt/slides/slide" + n + ".xml", slides[i].xml);
        zw.add("ppt/slides/_rels/slide" + n + ".xml.rels", slides[i].rels);
    }
    if (any_image)
        zw.add("ppt/media/image1.png", std::string_view(reinterpret_cast<const char*>(kPixelPng), sizeof(kPixelPng)), false);
    return std::move(zw).finish();
}

std::string deck_to_json(const Deck& deck) {
    nlohmann::ordered_json j;
    j["title"] = deck.metadata.title;
    j["slide_count"] = deck.slides.size();
    j["slides"] = nlohmann::ordered_json::array();
    for (const auto& s : deck.slides) j["slides"].push_back(nlohmann::ordered_json::parse(to_json(s)));
    return j.dump();
}

Deck deck_from_json(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    if (!j.is_object()) throw SchemaError("$", "expected deck object");
    Deck deck;
    if (auto it = j.find("title"); it != j.end() && it->is_string()) deck.metadata.title = it->get<std::string>();
    auto slides = j.find("slides");
    if (slides == j.end() || !slides->is_array()) throw SchemaError("$.slides", "expected array");
    for (const auto& s : *slides) deck.slides.push_back(from_json(s.dump()));
    deck.metadata.slide_count = deck.slides.size();
    if (auto it = j.find("slide_count"); it != j.end() && (!it->is_number_unsigned() || it->get<std::size_t>() != deck.slides.size()))
        throw SchemaError("$.slide_count", "does not match number of slides");
    return deck;
}

std::string report_to_json(const IngestReport& report) {
    nlohmann::ordered_json j;
    j["parsed_elements"] = report.parsed_elements;
    j["skipped"] = nlohmann::ordered_json::array();
    for (const auto& s : report.skipped) {
        nlohmann::ordered_json e;
        e["slide_index"] = s.slide_index;
        e["reason"] = std::string(to_string(s.reason));
        e["detail"] = s.detail;
        j["skipped"].push_back(std::move(e));
    }
    return j.dump();
}

}  // namespace slidelab
