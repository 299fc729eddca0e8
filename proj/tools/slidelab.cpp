// Command-line entry point. Failures exit with code 2 and a JSON error
// object on stderr.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "slidelab/config.hpp"
#include "slidelab/error.hpp"
#include "slidelab/metrics.hpp"
#include "slidelab/perturb.hpp"
#include "slidelab/pptx.hpp"
#include "slidelab/render.hpp"
#include "slidelab/service.hpp"
#include "slidelab/validate.hpp"

using namespace slidelab;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << "\n";
        return;
    }
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorKind::io, "cannot write " + path);
}

Json read_json(const std::string& path) {
    const auto text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), e.byte);
    }
}

/// A .pptx, a deck JSON ({"slides": [...]}) or a single slide JSON.
std::vector<SlideDoc> load_slides(const std::string& path) {
    const auto bytes = read_file(path);
    if (bytes.rfind("PK", 0) == 0) return load_pptx(bytes, fs::path(path).stem().string()).deck.slides;
    Json j;
    try {
        j = Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), e.byte);
    }
    if (j.is_object() && j.contains("slides")) return deck_from_json(bytes).slides;
    return {from_json_value(j)};
}

SlideDoc load_slide(const std::string& path, std::size_t index) {
    auto slides = load_slides(path);
    if (index >= slides.size())
        throw Error(ErrorKind::precondition,
                    "slide " + std::to_string(index) + " out of range (" + std::to_string(slides.size()) + " slides)");
    return std::move(slides[index]);
}

int fail(std::string_view kind, const std::string& message) {
    Json j{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << j.dump() << std::endl;
    return 2;
}

Service* g_service = nullptr;
void on_signal(int) {
    if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slidelab: slide design refinement pipeline"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);

    AppConfig cfg;
    std::string input, out, log_path, original_path, trace_path, report_path, backend;
    std::size_t slide = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> severity;
    std::optional<std::string> kinds;
    std::optional<int> max_iter;
    bool no_early_stop = false, review_first = false, highlight = false;
    int n = 2;
    double ppi = 96;

    auto* ingest = app.add_subcommand("ingest", "pptx -> deck JSON");
    ingest->add_option("input", input, "pptx file")->required();
    ingest->add_option("-o,--out", out, "deck JSON (default stdout)");
    ingest->add_option("--report", report_path, "write the skip report here");

    auto* exp = app.add_subcommand("export", "deck JSON -> pptx");
    exp->add_option("input", input, "deck or slide JSON")->required();
    exp->add_option("-o,--out", out, "pptx file")->required();

    auto* pert = app.add_subcommand("perturb", "perturb one slide and write its log");
    pert->add_option("input", input)->required();
    pert->add_option("--slide", slide);
    pert->add_option("--seed", seed);
    pert->add_option("--severity", severity);
    pert->add_option("--kinds", kinds, "comma list or \"all\"");
    pert->add_option("-o,--out", out, "perturbed slide JSON (default stdout)");
    pert->add_option("--log", log_path, "perturbation log JSON")->required();

    auto* dataset = app.add_subcommand("dataset-gen", "perturb every slide into reviewer/contributor training pairs");
    dataset->add_option("input", input)->required();
    dataset->add_option("--seed", seed);
    dataset->add_option("--severity", severity);
    dataset->add_option("--kinds", kinds);
    dataset->add_option("-o,--out", out, "JSONL output")->required();
    dataset->add_option("--manifest", report_path, "manifest JSON (default stdout)");

    auto* ref = app.add_subcommand("refine", "iterative review/contribute loop on one slide");
    ref->add_option("input", input)->required();
    ref->add_option("--slide", slide);
    ref->add_option("--backend", backend, "heuristic, remote or oracle")->check(CLI::IsMember({"heuristic", "remote", "oracle"}));
    ref->add_option("--max-iter", max_iter);
    ref->add_flag("--no-early-stop", no_early_stop);
    ref->add_flag("--review-first", review_first, "ask the reviewer for the first labels instead of flagging everything");
    ref->add_option("--log", log_path, "perturbation log (oracle backend)");
    ref->add_option("--original", original_path, "unperturbed slide or deck (oracle backend)");
    std::optional<std::size_t> original_slide;
    ref->add_option("--original-slide", original_slide, "slide index in --original (default --slide)");
    ref->add_option("--trace", trace_path, "trace JSON");
    ref->add_option("-o,--out", out, "final slide JSON (default stdout)");

    auto* br = app.add_subcommand("branch", "n contributor variants of one slide");
    br->add_option("input", input)->required();
    br->add_option("--slide", slide);
    br->add_option("--n", n);
    br->add_option("--seed", seed);
    br->add_option("--backend", backend)->check(CLI::IsMember({"heuristic", "remote"}));
    br->add_option("--out-dir", out, "writes <branch_id>.json and .svg")->required();

    auto* ev = app.add_subcommand("eval", "reviewer metrics and responsiveness from a trace and its log");
    ev->add_option("--trace", trace_path)->required();
    ev->add_option("--log", log_path)->required();
    ev->add_option("-o,--out", out, "report JSON");

    auto* judge = app.add_subcommand("judge-export", "blinded A/B judgement bundle");
    std::string draft_path, ours_path, baseline_path, bundle_id;
    judge->add_option("--draft", draft_path)->required();
    judge->add_option("--ours", ours_path)->required();
    judge->add_option("--baseline", baseline_path)->required();
    judge->add_option("--slide", slide);
    judge->add_option("--seed", seed);
    judge->add_option("--bundle-id", bundle_id);
    judge->add_option("--out-dir", out)->required();

    auto* wr = app.add_subcommand("win-rate", "unblind verdicts against bundle mappings");
    std::string bundles_dir, verdicts_path;
    wr->add_option("--bundles", bundles_dir, "directory of bundles")->required();
    wr->add_option("--verdicts", verdicts_path, "JSONL {bundle_id, verdict}")->required();

    auto* rend = app.add_subcommand("render", "slide -> SVG");
    rend->add_option("input", input)->required();
    rend->add_option("--slide", slide);
    rend->add_option("-o,--out", out);
    rend->add_option("--ppi", ppi);
    rend->add_flag("--highlight", highlight, "outline TENTATIVE elements");

    auto* serve = app.add_subcommand("serve", "HTTP service for the studio UI");
    std::optional<int> port;
    std::string data_dir, host = "127.0.0.1";
    serve->add_option("--port", port);
    serve->add_option("--host", host);
    serve->add_option("--data-dir", data_dir);
    serve->add_option("--backend", backend)->check(CLI::IsMember({"heuristic", "remote"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage", e.what());
    }

    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        if (seed) cfg.perturb.seed = *seed;
        if (severity) cfg.perturb.severity = *severity;
        if (kinds) cfg.perturb.enabled_kinds = parse_kind_list(*kinds);
        if (max_iter) cfg.refine.max_iterations = *max_iter;
        if (no_early_stop) cfg.refine.early_stop = false;
        if (review_first) cfg.refine.initial_all_tentative = false;
        if (!backend.empty()) cfg.backend = backend;

        if (*ingest) {
            const auto r = load_pptx(read_file(input), fs::path(input).stem().string());
            write_file(out, deck_to_json(r.deck));
            if (!report_path.empty()) write_file(report_path, report_to_json(r.report));
            std::cerr << "parsed " << r.report.parsed_elements << " elements, skipped " << r.report.skipped.size() << "\n";
        } else if (*exp) {
            Deck deck;
            deck.slides = load_slides(input);
            deck.metadata.slide_count = deck.slides.size();
            deck.metadata.title = fs::path(input).stem().string();
            write_file(out, export_pptx(deck));
        } else if (*pert) {
            const auto r = perturb(load_slide(input, slide), cfg.perturb);
            write_file(log_path, log_to_json(r.log).dump(2));
            write_file(out, to_json(r.perturbed));
        } else if (*dataset) {
            std::ofstream jsonl(out);
            if (!jsonl) throw Error(ErrorKind::io, "cannot write " + out);
            const auto m = batch_generate(load_slides(input), cfg.perturb, jsonl);
            write_file(report_path, manifest_to_json(m).dump(2));
        } else if (*ref) {
            const auto doc = load_slide(input, slide);
            std::unique_ptr<Reviewer> reviewer;
            std::unique_ptr<Contributor> contributor;
            if (cfg.backend == "oracle") {
                if (log_path.empty() || original_path.empty())
                    throw Error(ErrorKind::precondition, "the oracle backend needs --log and --original");
                reviewer = make_oracle_reviewer(log_from_json(read_json(log_path)));
                contributor = make_oracle_contributor(load_slide(original_path, original_slide.value_or(slide)));
            } else {
                reviewer = make_reviewer(cfg);
                contributor = make_contributor(cfg);
            }
            const auto t = refine(doc, *reviewer, *contributor, cfg.refine);
            if (!trace_path.empty()) write_file(trace_path, trace_to_json(t).dump(2));
            write_file(out, to_json(t.final_doc()));
            std::cerr << "stop_reason " << to_string(t.stop_reason) << ", iterations " << t.iterations_used << "\n";
            if (t.stop_reason == StopReason::backend_error) return fail("backend", t.error.value_or("backend error"));
        } else if (*br) {
            const auto set = branch(load_slide(input, slide), *make_contributor(cfg), n, cfg.perturb.seed);
            for (const auto& b : set.branches) {
                write_file((fs::path(out) / (b.branch_id + ".json")).string(), to_json(b.doc));
                write_file((fs::path(out) / (b.branch_id + ".svg")).string(), render_svg(b.doc));
            }
            for (const auto& f : set.failures) std::cerr << f.branch_id << " failed: " << f.message << "\n";
        } else if (*ev) {
            const auto r = evaluate_trace(trace_from_json(read_json(trace_path)), log_from_json(read_json(log_path)));
            if (!out.empty()) write_file(out, metrics_to_json(r).dump(2));
            std::cout << metrics_table(r);
        } else if (*judge) {
            const auto b = export_judgement(load_slide(draft_path, slide), load_slide(ours_path, slide),
                                            load_slide(baseline_path, slide), cfg.perturb.seed, bundle_id);
            write_bundle(b, out);
            std::cout << (fs::path(out) / b.bundle_id).string() << "\n";
        } else if (*wr) {
            std::vector<BundleMapping> maps;
            for (const auto& entry : fs::directory_iterator(bundles_dir))
                if (fs::exists(entry.path() / "mapping.json"))
                    maps.push_back(mapping_from_json(read_json((entry.path() / "mapping.json").string())));
            std::vector<VerdictRecord> verdicts;
            std::istringstream lines(read_file(verdicts_path));
            for (std::string line; std::getline(lines, line);) {
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                const auto j = Json::parse(line);
                verdicts.push_back({j.at("bundle_id").get<std::string>(), verdict_from(j.at("verdict").get<std::string>())});
            }
            const auto w = win_rate(maps, verdicts);
            std::cout << Json{{"ours", w.ours}, {"baseline", w.baseline}, {"tie", w.tie}, {"total", w.total}}.dump() << "\n";
        } else if (*rend) {
            RenderOptions o;
            o.pixels_per_inch = ppi;
            o.highlight_tentative = highlight;
            write_file(out, render_svg(load_slide(input, slide), o));
        } else if (*serve) {
            ServiceOptions o;
            o.config = cfg;
            o.data_dir = data_dir.empty() ? cfg.data_dir : data_dir;
            Service service(o);
            const int bound = service.bind(host, port.value_or(cfg.port));
            g_service = &service;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on http://" << host << ":" << bound << "\n";
            service.run();
            g_service = nullptr;
        }
    } catch (const Error& e) {
        return fail(to_string(e.kind()), e.what());
    } catch (const Json::exception& e) {
        return fail("parse", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
