#pragma once

#include "statewalk/ensemble.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace statewalk {

enum class ExitCode : int {
    Ok = 0,
    ConfigError = 2,
    CriterionFailed = 3,
    InternalError = 4,
};

// One configuration object covers every experiment; unknown keys are
// rejected so typos cannot silently fall back to defaults.
struct ExperimentConfig {
    std::string experiment;
    std::optional<std::uint64_t> seed;
    std::string units = "natural";
    std::filesystem::path out_dir;
    ExecPolicy policy = ExecPolicy::Parallel;

    // grid and packet (natural units)
    int grid_points = 512;
    double grid_extent = 40.0;
    double sigma = 1.0;
    double mass = 1.0;
    double hbar = 1.0;

    // velocity-decomposition / ehrenfest lattice
    std::vector<double> lattice_a{-2.0, 0.0, 2.0};
    std::vector<double> lattice_p{-2.0, 0.5, 2.0};
    double linear_force = 0.3;
    double harmonic_stiffness = 1.0;

    // classical comparison
    double compare_amplitude = 4.0;
    double compare_dt = 1.5e-3;

    // constrained walk
    int walk_steps = 100;
    double walk_dt = 0.1;
    int walk_trials = 10000;
    double step_sigma = 0.02;

    // GUE projections onto the classical frame
    int proj_grid_points = 256;
    int proj_samples = 10000;
    double proj_dt = 0.01;
    double gue_scale = 1.0;

    // isotropy / homogeneity
    int iso_dim = 128;
    int iso_samples = 10000;
    int iso_directions = 4;
    double iso_dt = 0.01;

    // Born statistics
    int born_dim = 64;
    int born_trials = 100000;
    int born_steps = 3;
    double born_dt = 0.005;

    double alpha = 0.01;

    // macro chain (SI)
    double macro_radius = 1e-3;
    double macro_temperature = 293.0;
    double macro_viscosity = 1.8e-5;
    double macro_time = 1e-13;
    double macro_sigma = 1e-5;
    double macro_wavelength = 1e-5;
    // default chain runs from the headline diffusion figure; the directly
    // computed Stokes-Einstein value is always reported next to it
    std::optional<double> macro_diffusion_override = 1e-12;
    double macro_sweep_min = 1e-6;
    double macro_sweep_max = 1e-1;
    int macro_sweep_points = 26;

    nlohmann::json to_json() const;
};

// Names accepted by `run`.
const std::vector<std::string>& experiment_names();

struct Diagnostic {
    std::string path;    // JSON pointer-ish location
    std::string message;
};

// Parse + merge: defaults <- json. Unknown keys become diagnostics.
ExperimentConfig config_from_json(const nlohmann::json& j, std::vector<Diagnostic>& diags);

// Physics/sanity checks without running anything.
std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double elapsed_seconds = 0.0;
    nlohmann::json metrics;
};

struct RunOutcome {
    ExitCode code = ExitCode::Ok;
    std::vector<CriterionResult> criteria;
    std::string failed_criterion; // first failure, for the exit message
};

// Execute one experiment (or "all") and write its artifacts + manifest into
// cfg.out_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg);

} // namespace statewalk
