#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "statewalk/experiments.hpp"
#include "statewalk/io.hpp"
#include "statewalk/manifest.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace statewalk;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "statewalk_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ExperimentConfig base_config(const std::string& experiment, const fs::path& out) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.seed = 42;
    cfg.out_dir = out;
    return cfg;
}

// every regular file except the manifest, sorted by relative path
std::vector<fs::path> artifact_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (e.path().filename() == kManifestFileName) continue;
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(STATEWALK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("config parsing and validation") {
    SUBCASE("valid default config has no diagnostics") {
        const ExperimentConfig cfg = base_config("verify-metric", "unused");
        CHECK(validate_config(cfg).empty());
    }
    SUBCASE("missing seed is rejected") {
        ExperimentConfig cfg = base_config("verify-metric", "unused");
        cfg.seed.reset();
        const auto diags = validate_config(cfg);
        REQUIRE_FALSE(diags.empty());
        CHECK(diags[0].path == "/seed");
    }
    SUBCASE("margin violation suggests a larger extent") {
        ExperimentConfig cfg = base_config("decompose", "unused");
        cfg.sigma = 4.0; // 6 sigma margin no longer fits in 40 sigma... it does; shrink box
        cfg.grid_extent = 10.0;
        const auto diags = validate_config(cfg);
        bool found = false;
        for (const auto& d : diags)
            if (d.message.find("extent of at least") != std::string::npos) found = true;
        CHECK(found);
    }
    SUBCASE("unknown keys are diagnosed") {
        std::vector<Diagnostic> diags;
        config_from_json(nlohmann::json::parse(R"({"experiment":"all","typo_key":1})"), diags);
        REQUIRE_FALSE(diags.empty());
        CHECK(diags[0].path == "/typo_key");
    }
    SUBCASE("json round trip") {
        ExperimentConfig cfg = base_config("all", "x");
        std::vector<Diagnostic> diags;
        const ExperimentConfig back = config_from_json(cfg.to_json(), diags);
        CHECK(diags.empty());
        CHECK(back.experiment == "all");
        CHECK(back.seed == cfg.seed);
        CHECK(back.grid_points == cfg.grid_points);
        CHECK(back.macro_diffusion_override == cfg.macro_diffusion_override);
    }
}

TEST_CASE("verify-metric run produces verifiable artifacts") {
    const fs::path dir = fresh_dir("vm");
    const RunOutcome outcome = run_experiment(base_config("verify-metric", dir));
    CHECK(outcome.code == ExitCode::Ok);
    REQUIRE(outcome.criteria.size() == 2);
    CHECK(outcome.criteria[0].passed);
    CHECK(outcome.criteria[1].passed);

    CHECK(fs::exists(dir / "metric_line.csv"));
    CHECK(fs::exists(dir / "metric_phase_space.csv"));
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "schema.json"));
    CHECK(fs::exists(dir / kManifestFileName));

    const auto check = verify_manifest(dir);
    CHECK(check.ok);

    // schema lists the CSV columns
    const auto schema = nlohmann::json::parse(read_text_file(dir / "schema.json"));
    CHECK(schema.at("files").contains("metric_line.csv"));

    SUBCASE("tampering breaks verification") {
        std::ofstream(dir / "metric_line.csv", std::ios::app) << "tampered\n";
        CHECK_FALSE(verify_manifest(dir).ok);
    }
    SUBCASE("unlisted files are reported") {
        write_text_file(dir / "stray.txt", "x");
        const auto bad = verify_manifest(dir);
        CHECK_FALSE(bad.ok);
        bool mentioned = false;
        for (const auto& p : bad.problems)
            if (p.find("stray.txt") != std::string::npos) mentioned = true;
        CHECK(mentioned);
    }
}

TEST_CASE("identical seeds give byte-identical artifacts") {
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    for (const auto& dir : {a, b}) {
        ExperimentConfig cfg = base_config("macro-estimate", dir);
        CHECK(run_experiment(cfg).code == ExitCode::Ok);
    }
    const auto fa = artifact_files(a);
    const auto fb = artifact_files(b);
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
        CHECK(fs::relative(fa[i], a) == fs::relative(fb[i], b));
        CHECK(read_text_file(fa[i]) == read_text_file(fb[i]));
    }
}

TEST_CASE("serial and parallel execution write the same bytes") {
    const fs::path a = fresh_dir("pol_a");
    const fs::path b = fresh_dir("pol_b");
    {
        ExperimentConfig cfg = base_config("ehrenfest", a);
        cfg.policy = ExecPolicy::Serial;
        CHECK(run_experiment(cfg).code == ExitCode::Ok);
    }
    {
        ExperimentConfig cfg = base_config("ehrenfest", b);
        cfg.policy = ExecPolicy::Parallel;
        CHECK(run_experiment(cfg).code == ExitCode::Ok);
    }
    const auto fa = artifact_files(a);
    const auto fb = artifact_files(b);
    REQUIRE(fa.size() == fb.size());
    for (std::size_t i = 0; i < fa.size(); ++i)
        CHECK(read_text_file(fa[i]) == read_text_file(fb[i]));
}

TEST_CASE("cli exit codes") {
    const fs::path dir = fresh_dir("cli");

    SUBCASE("successful run and manifest verification") {
        CHECK(run_cli("run macro-estimate --seed 7 --out " + (dir / "ok").string()) == 0);
        CHECK(run_cli("verify-manifest " + (dir / "ok").string()) == 0);
    }
    SUBCASE("missing seed is a config error") {
        CHECK(run_cli("run macro-estimate --out " + (dir / "ns").string()) == 2);
    }
    SUBCASE("unknown experiment is a config error") {
        CHECK(run_cli("run not-an-experiment --seed 7") == 2);
    }
    SUBCASE("config file with a syntax error") {
        write_text_file(dir / "broken.json", "{ not json");
        CHECK(run_cli("validate --config " + (dir / "broken.json").string()) == 2);
    }
    SUBCASE("valid config validates") {
        write_text_file(dir / "ok.json", R"({"experiment":"macro-estimate","seed":7})");
        CHECK(run_cli("validate --config " + (dir / "ok.json").string()) == 0);
    }
    SUBCASE("statistical failure is distinct from config failure") {
        // the direct Stokes-Einstein value undershoots the displacement
        // bracket, so the chain criterion fails while the config is fine
        write_text_file(dir / "fail.json",
                        R"({"experiment":"macro-estimate","seed":7,
                            "macro":{"diffusion_override":null}})");
        CHECK(run_cli("run macro-estimate --config " + (dir / "fail.json").string() + " --out " +
                      (dir / "fail_out").string()) == 3);
    }
    SUBCASE("verify-manifest on a missing directory fails") {
        CHECK(run_cli("verify-manifest " + (dir / "nope").string()) != 0);
    }
}
