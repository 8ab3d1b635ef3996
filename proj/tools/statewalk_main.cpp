#include "statewalk/experiments.hpp"
#include "statewalk/io.hpp"
#include "statewalk/manifest.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using statewalk::Diagnostic;
using statewalk::ExitCode;
using statewalk::ExperimentConfig;

struct ConfigFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json load_json_file(const std::string& path) {
    std::string text;
    try {
        text = statewalk::read_text_file(path);
    } catch (const std::exception& e) {
        throw ConfigFileError(e.what());
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset is the closest thing to a line for hand-edited configs
        throw ConfigFileError("config parse error in " + path + ": " + e.what());
    }
}

std::string preset_path(const std::string& name) {
    const char* env = std::getenv("STATEWALK_PRESETS");
    const std::string dir = env ? env : "presets";
    return dir + "/" + name + ".json";
}

std::filesystem::path default_out_dir(const std::string& experiment) {
    const char* env = std::getenv("STATEWALK_OUT_ROOT");
    const std::string root = env ? env : "runs";
    return std::filesystem::path(root) / experiment;
}

void print_diags(const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags) std::cerr << "config error at " << d.path << ": " << d.message << "\n";
}

int run_command(const std::string& experiment, const std::string& config_file,
                const std::string& preset, bool have_seed, std::uint64_t seed,
                const std::string& out_dir) {
    nlohmann::json merged = nlohmann::json::object();
    if (!preset.empty()) merged.update(load_json_file(preset_path(preset)));
    if (!config_file.empty()) merged.update(load_json_file(config_file));

    std::vector<Diagnostic> diags;
    ExperimentConfig cfg = statewalk::config_from_json(merged, diags);
    if (!diags.empty()) {
        print_diags(diags);
        return int(ExitCode::ConfigError);
    }
    if (!experiment.empty()) cfg.experiment = experiment;
    if (have_seed) cfg.seed = seed;
    if (!out_dir.empty())
        cfg.out_dir = out_dir;
    else if (cfg.out_dir.empty())
        cfg.out_dir = default_out_dir(cfg.experiment);

    const auto problems = statewalk::validate_config(cfg);
    if (!problems.empty()) {
        print_diags(problems);
        return int(ExitCode::ConfigError);
    }

    const auto outcome = statewalk::run_experiment(cfg);
    for (const auto& c : outcome.criteria)
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << "criterion " << c.id << " ("
                  << c.name << ")\n";
    if (outcome.code == ExitCode::CriterionFailed)
        std::cerr << "failed: " << outcome.failed_criterion << "\n";
    std::cout << "artifacts: " << cfg.out_dir.string() << "\n";
    return int(outcome.code);
}

int validate_command(const std::string& config_file) {
    nlohmann::json j = load_json_file(config_file);
    std::vector<Diagnostic> diags;
    ExperimentConfig cfg = statewalk::config_from_json(j, diags);
    auto more = statewalk::validate_config(cfg);
    diags.insert(diags.end(), more.begin(), more.end());
    if (diags.empty()) {
        std::cout << "config ok\n";
        return int(ExitCode::Ok);
    }
    print_diags(diags);
    return int(ExitCode::ConfigError);
}

int verify_manifest_command(const std::string& dir) {
    const auto check = statewalk::verify_manifest(dir);
    if (check.ok) {
        std::cout << "manifest ok\n";
        return int(ExitCode::Ok);
    }
    for (const auto& p : check.problems) std::cerr << p << "\n";
    return int(ExitCode::CriterionFailed);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-packet state-space simulator and verification harness"};
    app.require_subcommand(1);

    std::string experiment, config_file, preset, out_dir, manifest_dir;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "run one experiment (or 'all')");
    run->add_option("experiment", experiment, "experiment name")
        ->required()
        ->check(CLI::IsMember(statewalk::experiment_names()));
    run->add_option("--config", config_file, "JSON config file");
    run->add_option("--preset", preset, "named preset (see presets/)");
    auto* seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_option("--out", out_dir, "output directory");

    auto* validate = app.add_subcommand("validate", "check a config without running");
    validate->add_option("--config", config_file, "JSON config file")->required();

    auto* verify = app.add_subcommand("verify-manifest", "re-check a run's file inventory");
    verify->add_option("dir", manifest_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return run_command(experiment, config_file, preset, seed_opt->count() > 0, seed,
                               out_dir);
        if (validate->parsed()) return validate_command(config_file);
        if (verify->parsed()) return verify_manifest_command(manifest_dir);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : int(statewalk::ExitCode::ConfigError);
    } catch (const ConfigFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(statewalk::ExitCode::ConfigError);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(statewalk::ExitCode::ConfigError);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(statewalk::ExitCode::InternalError);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return int(statewalk::ExitCode::InternalError);
    }
    return int(statewalk::ExitCode::InternalError);
}
