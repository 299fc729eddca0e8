#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "slidelab/slide_json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stdout and stderr merged.
Run run(const std::string& args) {
    Run r;
    const std::string cmd = std::string(SLIDELAB_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("slidelab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    std::string at(const std::string& name) const { return (dir / name).string(); }
    fs::path dir;
};

const std::string kCorpus = std::string(SLIDELAB_FIXTURES) + "/corpus.pptx";

}  // namespace

TEST_F(Cli, HelpExitsZero) {
    EXPECT_EQ(run("--help").code, 0);
    EXPECT_EQ(run("refine --help").code, 0);
}

TEST_F(Cli, ErrorsAreJsonWithExitTwo) {
    std::ofstream(at("x.txt")) << "plain text";
    const auto r = run("ingest " + at("x.txt"));
    EXPECT_EQ(r.code, 2);
    const auto j = slidelab::Json::parse(r.out);
    EXPECT_EQ(j["error"]["kind"], "not_an_archive");

    EXPECT_EQ(run("bogus-command").code, 2);
    EXPECT_EQ(run("render " + at("missing.json")).code, 2);
}

TEST_F(Cli, OraclePipelineScoresPerfectly) {
    ASSERT_EQ(run("ingest " + kCorpus + " -o " + at("deck.json")).code, 0);
    ASSERT_EQ(run("perturb " + at("deck.json") + " --slide 4 --seed 11 --severity 0.5 --log " + at("log.json") +
                  " -o " + at("p.json")).code,
              0);
    const auto refine = run("refine " + at("p.json") + " --backend oracle --review-first --log " + at("log.json") +
                            " --original " + at("deck.json") + " --original-slide 4 --trace " + at("t.json") +
                            " -o " + at("final.json"));
    ASSERT_EQ(refine.code, 0) << refine.out;
    EXPECT_NE(refine.out.find("converged"), std::string::npos);

    const auto ev = run("eval --trace " + at("t.json") + " --log " + at("log.json") + " -o " + at("r.json"));
    ASSERT_EQ(ev.code, 0) << ev.out;
    const auto report = slidelab::Json::parse(slurp(at("r.json")));
    EXPECT_EQ(report["reviewer"]["overall_precision"], 1.0);
    EXPECT_EQ(report["reviewer"]["overall_recall"], 1.0);
    EXPECT_EQ(report["responsiveness"]["overall"], 1.0);
}

TEST_F(Cli, ExportRenderBranchAndJudge) {
    ASSERT_EQ(run("ingest " + kCorpus + " -o " + at("deck.json")).code, 0);
    ASSERT_EQ(run("export " + at("deck.json") + " -o " + at("out.pptx")).code, 0);
    EXPECT_NE(run("ingest " + at("out.pptx")).out.find("parsed 200 elements"), std::string::npos);

    ASSERT_EQ(run("render " + at("deck.json") + " --slide 2 --highlight -o " + at("s.svg")).code, 0);
    EXPECT_EQ(slurp(at("s.svg")).rfind("<svg", 0), 0u);

    ASSERT_EQ(run("branch " + at("deck.json") + " --slide 2 --n 3 --out-dir " + at("br")).code, 0);
    for (const char* b : {"b0", "b1", "b2"}) EXPECT_TRUE(fs::exists(dir / "br" / (std::string(b) + ".json")));

    ASSERT_EQ(run("judge-export --draft " + at("deck.json") + " --ours " + at("br/b0.json") + " --baseline " +
                  at("br/b1.json") + " --slide 0 --bundle-id j1 --out-dir " + at("bundles"))
                  .code,
              0);
    std::ofstream(at("v.jsonl")) << "{\"bundle_id\":\"j1\",\"verdict\":\"tie\"}\n";
    const auto wr = run("win-rate --bundles " + at("bundles") + " --verdicts " + at("v.jsonl"));
    ASSERT_EQ(wr.code, 0) << wr.out;
    EXPECT_EQ(slidelab::Json::parse(wr.out)["tie"], 1.0);
}
