#include "statewalk/experiments.hpp"

#include "statewalk/acceptance.hpp"
#include "statewalk/dynamics.hpp"
#include "statewalk/io.hpp"
#include "statewalk/macro.hpp"
#include "statewalk/manifest.hpp"
#include "statewalk/rng.hpp"
#include "statewalk/stats.hpp"
#include "statewalk/walk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace statewalk {

namespace {

using nlohmann::json;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// |measured - predicted| <= max(rtol |predicted|, atol)
bool close_rel(double measured, double predicted, double rtol, double atol = 1e-10) {
    return std::abs(measured - predicted) <= std::max(rtol * std::abs(predicted), atol);
}

json stats_report_json(const StatsReport& r) {
    json j;
    j["schema_version"] = 1;
    j["test"] = r.test_name;
    j["sample_count"] = r.sample_count;
    j["mean"] = r.moments.mean;
    j["variance"] = r.moments.variance;
    j["skewness"] = r.moments.skewness;
    j["excess_kurtosis"] = r.moments.excess_kurtosis;
    j["ks_statistic"] = r.ks_statistic;
    j["p_value"] = r.p_value;
    j["alpha"] = r.alpha;
    j["degenerate"] = r.degenerate;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["histogram"] = {{"edges", r.histogram.edges}, {"counts", r.histogram.counts}};
    return j;
}

// Collects artifacts for one run directory and remembers CSV schemas.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    CsvWriter csv(const std::string& rel, const std::vector<std::string>& columns) {
        schemas_[rel] = columns;
        return CsvWriter(dir_ / rel, columns);
    }

    void write_json(const std::string& rel, const json& j) {
        write_text_file(dir_ / rel, j.dump(2) + "\n");
    }

    void finalize_schemas() {
        json j;
        j["schema_version"] = 1;
        for (const auto& [file, cols] : schemas_) j["files"][file] = cols;
        write_json("schema.json", j);
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, std::vector<std::string>> schemas_;
};

GridSpec acceptance_grid(const ExperimentConfig& cfg) {
    return GridSpec::make(1, cfg.grid_points, cfg.grid_extent * cfg.sigma);
}

PacketParams packet_at(const ExperimentConfig& cfg, double a, double p) {
    Eigen::VectorXd av(1), pv(1);
    av << a;
    pv << p;
    return PacketParams::make(av, pv, cfg.sigma, cfg.mass, cfg.hbar);
}

// ---------------------------------------------------------------- criterion 1+2

CriterionResult run_verify_metric(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const GridSpec grid = acceptance_grid(cfg);
    const double s = cfg.sigma;

    auto line_csv = out.csv("metric_line.csv",
                            {"separation", "residual_identity", "residual_overlap",
                             "isometry_rel_error"});
    double max_res_line = 0.0, max_res_overlap = 0.0, max_iso_err = 0.0;
    for (int i = 0; i < accept::kMetricLatticePoints; ++i) {
        const double sep = accept::kMetricMaxSeparationSigmas * s * i /
                           (accept::kMetricLatticePoints - 1);
        Eigen::VectorXd a(1), b(1);
        a << 0.5 * sep;
        b << -0.5 * sep;
        const double res = metric_identity_residual(a, b, s, grid, cfg.mass, cfg.hbar);

        const StateVector ga = make_packet(packet_at(cfg, a[0], 0.0), grid);
        const StateVector gb = make_packet(packet_at(cfg, b[0], 0.0), grid);
        const double overlap_grid = std::abs(inner_product(ga, gb));
        const double overlap_res = std::abs(overlap_grid - overlap_gaussian(a, b, s));

        double iso_err = 0.0;
        if (sep > 0.0) {
            const double theta = fubini_study_distance(ga, gb);
            const double c2 = std::cos(theta) * std::cos(theta);
            const double rebuilt = 2.0 * s * std::sqrt(-std::log(c2));
            iso_err = std::abs(rebuilt - sep) / sep;
        }
        max_res_line = std::max(max_res_line, res);
        max_res_overlap = std::max(max_res_overlap, overlap_res);
        max_iso_err = std::max(max_iso_err, iso_err);
        line_csv.row_values({sep, res, overlap_res, iso_err});
    }

    auto ps_csv = out.csv("metric_phase_space.csv",
                          {"separation", "momentum_gap", "residual_identity"});
    double max_res_ps = 0.0;
    for (int i = 0; i < accept::kPhaseSpaceLatticePoints; ++i) {
        const double sep = accept::kMetricMaxSeparationSigmas * s * i /
                           (accept::kPhaseSpaceLatticePoints - 1);
        for (int j = 0; j < accept::kPhaseSpaceLatticePoints; ++j) {
            const double dp = accept::kPhaseSpaceMaxMomentum * (cfg.hbar / s) * j /
                              (accept::kPhaseSpaceLatticePoints - 1);
            Eigen::VectorXd a(1), b(1), p(1), q(1);
            a << 0.5 * sep;
            b << -0.5 * sep;
            p << 0.5 * dp;
            q << -0.5 * dp;
            const double res =
                phase_space_metric_identity_residual(a, p, b, q, s, cfg.hbar, grid, cfg.mass);
            max_res_ps = std::max(max_res_ps, res);
            ps_csv.row_values({sep, dp, res});
        }
    }

    CriterionResult r;
    r.id = 1;
    r.name = "metric-identity";
    r.metrics = {{"max_residual_line", max_res_line},
                 {"max_residual_overlap", max_res_overlap},
                 {"max_isometry_rel_error", max_iso_err},
                 {"max_residual_phase_space", max_res_ps},
                 {"tolerance", accept::kMetricResidualTol}};
    r.passed = max_res_line < accept::kMetricResidualTol &&
               max_res_overlap < accept::kMetricResidualTol;
    r.elapsed_seconds = timer.seconds();

    out.write_json("metric_summary.json",
                   {{"schema_version", 1},
                    {"max_residual_line", max_res_line},
                    {"max_residual_overlap", max_res_overlap},
                    {"max_isometry_rel_error", max_iso_err},
                    {"max_residual_phase_space", max_res_ps}});
    return r;
}

CriterionResult criterion_phase_space(const CriterionResult& metric, double elapsed) {
    CriterionResult r;
    r.id = 2;
    r.name = "phase-space-metric-identity";
    const double v = metric.metrics.at("max_residual_phase_space").get<double>();
    r.metrics = {{"max_residual", v}, {"tolerance", accept::kPhaseSpaceResidualTol}};
    r.passed = v < accept::kPhaseSpaceResidualTol;
    r.elapsed_seconds = elapsed;
    return r;
}

// ------------------------------------------------------------------ criterion 3

CriterionResult run_decompose(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const GridSpec grid = acceptance_grid(cfg);

    auto csv = out.csv("decomposition.csv",
                       {"potential", "a", "p", "comp_phase", "comp_classical",
                        "comp_acceleration", "comp_spreading", "pred_phase", "pred_classical",
                        "pred_acceleration", "pred_spreading", "total_speed_sq",
                        "residual_ratio"});

    double max_ratio = 0.0;
    double max_comp_err = 0.0;
    bool ok = true;
    const std::vector<std::pair<std::string, Potential>> pots = {
        {"free", FreePotential{}},
        {"linear", LinearPotential{Eigen::VectorXd::Constant(1, cfg.linear_force)}}};

    for (const auto& [pot_name, pot] : pots) {
        const HamiltonianSpec h = HamiltonianSpec::make(cfg.mass, cfg.hbar, pot);
        for (double a : cfg.lattice_a) {
            for (double p : cfg.lattice_p) {
                const VelocityDecomposition d =
                    decompose_velocity(packet_at(cfg, a, p), h, grid);
                const double ratio = std::abs(d.residual_sq) / d.total_speed_sq;
                max_ratio = std::max(max_ratio, ratio);

                const double meas_classical = d.classical_comp.norm();
                const double meas_accel = d.acceleration_comp.norm();
                const struct {
                    double meas, pred;
                } checks[] = {{d.phase_rate, d.phase_rate_pred},
                              {meas_classical, d.classical_pred},
                              {meas_accel, d.acceleration_pred},
                              {d.spreading_comp, d.spreading_pred}};
                for (const auto& c : checks) {
                    ok = ok && close_rel(c.meas, c.pred, accept::kDecompComponentRelTol);
                    if (std::abs(c.pred) > 1e-10)
                        max_comp_err =
                            std::max(max_comp_err, std::abs(c.meas - c.pred) / std::abs(c.pred));
                }
                ok = ok && ratio < accept::kDecompResidualRelTol;

                csv.row({pot_name, format_double(a), format_double(p),
                         format_double(d.phase_rate), format_double(meas_classical),
                         format_double(meas_accel), format_double(d.spreading_comp),
                         format_double(d.phase_rate_pred), format_double(d.classical_pred),
                         format_double(d.acceleration_pred), format_double(d.spreading_pred),
                         format_double(d.total_speed_sq), format_double(ratio)});
            }
        }
    }

    CriterionResult r;
    r.id = 3;
    r.name = "velocity-decomposition";
    r.metrics = {{"max_residual_ratio", max_ratio},
                 {"max_component_rel_error", max_comp_err},
                 {"residual_tolerance", accept::kDecompResidualRelTol},
                 {"component_tolerance", accept::kDecompComponentRelTol}};
    r.passed = ok;
    r.elapsed_seconds = timer.seconds();
    out.write_json("decompose_summary.json",
                   {{"schema_version", 1},
                    {"max_residual_ratio", max_ratio},
                    {"max_component_rel_error", max_comp_err}});
    return r;
}

// ------------------------------------------------------------------ criterion 4

CriterionResult run_ehrenfest(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const GridSpec grid = acceptance_grid(cfg);

    auto csv = out.csv("ehrenfest.csv",
                       {"potential", "a", "p", "da_dt", "dp_dt", "commutator_x",
                        "commutator_p", "poisson_a", "poisson_p", "max_error"});

    const std::vector<std::pair<std::string, Potential>> pots = {
        {"free", FreePotential{}},
        {"linear", LinearPotential{Eigen::VectorXd::Constant(1, cfg.linear_force)}},
        {"harmonic", HarmonicPotential{cfg.harmonic_stiffness}}};

    double max_err = 0.0;
    for (const auto& [pot_name, pot] : pots) {
        const HamiltonianSpec h = HamiltonianSpec::make(cfg.mass, cfg.hbar, pot);
        for (double a : cfg.lattice_a) {
            for (double p : cfg.lattice_p) {
                const PacketParams params = packet_at(cfg, a, p);
                const StateVector phi = make_packet(params, grid);

                const auto [da, dp] = ehrenfest_projections(params, h, grid);
                const Eigen::VectorXd cx =
                    commutator_expectation(phi, ObservableTag::Position, h);
                const Eigen::VectorXd cp =
                    commutator_expectation(phi, ObservableTag::Momentum, h);

                const double poisson_a = p / cfg.mass;
                Eigen::VectorXd av(1);
                av << a;
                const double poisson_p = -potential_gradient(h, av)[0];

                const double err = std::max({std::abs(da[0] - poisson_a),
                                             std::abs(dp[0] - poisson_p),
                                             std::abs(cx[0] - poisson_a),
                                             std::abs(cp[0] - poisson_p)});
                max_err = std::max(max_err, err);
                csv.row({pot_name, format_double(a), format_double(p), format_double(da[0]),
                         format_double(dp[0]), format_double(cx[0]), format_double(cp[0]),
                         format_double(poisson_a), format_double(poisson_p),
                         format_double(err)});
            }
        }
    }

    CriterionResult r;
    r.id = 4;
    r.name = "commutator-poisson-ehrenfest";
    r.metrics = {{"max_error", max_err}, {"tolerance", accept::kPoissonTol}};
    r.passed = max_err < accept::kPoissonTol;
    r.elapsed_seconds = timer.seconds();
    out.write_json("ehrenfest_summary.json",
                   {{"schema_version", 1}, {"max_error", max_err}});
    return r;
}

// ------------------------------------------------------------------ criterion 5

CriterionResult run_classical_compare(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const GridSpec grid = acceptance_grid(cfg);
    const HamiltonianSpec h =
        HamiltonianSpec::make(cfg.mass, cfg.hbar, HarmonicPotential{cfg.harmonic_stiffness});

    const double period = 2.0 * std::numbers::pi * std::sqrt(cfg.mass / cfg.harmonic_stiffness);
    const PacketParams params = packet_at(cfg, cfg.compare_amplitude, 0.0);
    const TrajectoryComparison cmp =
        quantum_classical_compare(params, h, grid, period, cfg.compare_dt, 1);

    auto csv = out.csv("trajectory.csv", {"t", "x_quantum", "p_quantum", "x_classical",
                                          "p_classical", "position_deviation"});
    const std::size_t stride = std::max<std::size_t>(1, cmp.times.size() / 256);
    for (std::size_t i = 0; i < cmp.times.size(); ++i) {
        if (i % stride != 0 && i + 1 != cmp.times.size()) continue;
        csv.row_values({cmp.times[i], cmp.quantum_x[i][0], cmp.quantum_p[i][0],
                        cmp.classical_x[i][0], cmp.classical_p[i][0],
                        (cmp.quantum_x[i] - cmp.classical_x[i]).norm()});
    }

    CriterionResult r;
    r.id = 5;
    r.name = "newtonian-comparator";
    r.metrics = {{"max_position_deviation", cmp.max_position_deviation},
                 {"max_momentum_deviation", cmp.max_momentum_deviation},
                 {"grid_spacing", cmp.grid_spacing},
                 {"period", period}};
    r.passed = cmp.max_position_deviation < cmp.grid_spacing;
    r.elapsed_seconds = timer.seconds();
    out.write_json("compare_summary.json",
                   {{"schema_version", 1},
                    {"max_position_deviation", cmp.max_position_deviation},
                    {"max_momentum_deviation", cmp.max_momentum_deviation},
                    {"grid_spacing", cmp.grid_spacing}});
    return r;
}

// -------------------------------------------------------------- criteria 6 and 7

std::vector<CriterionResult> run_constrained_walk(const ExperimentConfig& cfg, OutputSet& out) {
    std::vector<CriterionResult> results;
    const std::uint64_t seed = *cfg.seed;

    // Part 1: translation walk ensemble.
    {
        Timer timer;
        const GridSpec grid = acceptance_grid(cfg);
        const PacketParams params = packet_at(cfg, 0.0, 0.0);
        const WalkConfig wcfg = WalkConfig::make(cfg.walk_steps, cfg.walk_dt, cfg.walk_trials,
                                                 seed, RecordPolicy::Summary, cfg.hbar);

        std::vector<int> checkpoints;
        for (int k = cfg.walk_steps / 5; k <= cfg.walk_steps; k += cfg.walk_steps / 5)
            checkpoints.push_back(k);

        const int n = cfg.walk_trials;
        std::vector<double> displacement(static_cast<std::size_t>(n), 0.0);
        std::vector<double> residual(static_cast<std::size_t>(n), 0.0);
        std::vector<double> final_fs(static_cast<std::size_t>(n), 0.0);
        std::vector<std::vector<double>> cp_disp(checkpoints.size(),
                                                 std::vector<double>(static_cast<std::size_t>(n), 0.0));

        run_trials(n, cfg.policy, [&](int i) {
            const auto rec = walk_constrained(params, grid, wcfg, cfg.step_sigma,
                                              trial_seed(seed, std::uint64_t(i)), checkpoints);
            displacement[std::size_t(i)] = rec.displacement[0];
            residual[std::size_t(i)] = rec.translation_residual;
            final_fs[std::size_t(i)] = rec.final_fs_distance;
            for (std::size_t c = 0; c < checkpoints.size(); ++c)
                cp_disp[c][std::size_t(i)] = rec.checkpoint_displacements[c][0];
        });

        auto csv = out.csv("walk_trials.csv",
                           {"trial", "displacement", "translation_residual", "fs_distance"});
        for (int i = 0; i < n; ++i)
            csv.row_values({double(i), displacement[std::size_t(i)], residual[std::size_t(i)],
                            final_fs[std::size_t(i)]});

        const StatsReport normality = normality_test(displacement, accept::kWalkKsAlpha);
        out.write_json("displacement_stats.json", stats_report_json(normality));

        const double var_target =
            cfg.walk_steps * cfg.step_sigma * cfg.step_sigma * cfg.walk_dt * cfg.walk_dt;
        const double var_rel_err =
            std::abs(normality.moments.variance - var_target) / var_target;

        std::vector<double> times;
        for (int k : checkpoints) times.push_back(k * cfg.walk_dt);
        const DiffusionFit fit = diffusion_fit(times, cp_disp);
        const double d_target = cfg.step_sigma * cfg.step_sigma * cfg.walk_dt / 2.0;
        const double d_rel_err = std::abs(fit.diffusion - d_target) / d_target;

        auto dcsv = out.csv("diffusion.csv", {"time", "variance", "fit_variance"});
        for (std::size_t i = 0; i < times.size(); ++i)
            dcsv.row_values({times[i], fit.variances[i], 2.0 * fit.diffusion * times[i]});

        const double max_residual = *std::max_element(residual.begin(), residual.end());

        CriterionResult r;
        r.id = 6;
        r.name = "constrained-walk";
        r.metrics = {{"ks_p_value", normality.p_value},
                     {"ks_statistic", normality.ks_statistic},
                     {"variance", normality.moments.variance},
                     {"variance_target", var_target},
                     {"variance_rel_error", var_rel_err},
                     {"diffusion", fit.diffusion},
                     {"diffusion_target", d_target},
                     {"diffusion_rel_error", d_rel_err},
                     {"diffusion_r_squared", fit.r_squared},
                     {"max_translation_residual", max_residual}};
        r.passed = normality.pass && var_rel_err < accept::kWalkVarianceRelTol &&
                   d_rel_err < accept::kWalkDiffusionRelTol &&
                   max_residual < accept::kWalkTranslationResidualTol;
        r.elapsed_seconds = timer.seconds();
        results.push_back(std::move(r));
    }

    // Part 2: GUE steps conditioned on the classical directions.
    {
        Timer timer;
        const GridSpec grid = GridSpec::make(1, cfg.proj_grid_points, cfg.grid_extent * cfg.sigma);
        const PacketParams params = packet_at(cfg, 0.0, 0.0);
        const GUEEnsemble ens = GUEEnsemble::make(int(grid.size()), cfg.gue_scale);

        const Eigen::MatrixXd samples = project_gue_step_onto_classical(
            params, grid, ens, cfg.proj_dt, cfg.proj_samples, splitmix64(seed ^ 0x70726f6aULL));
        std::vector<double> col(samples.col(0).data(), samples.col(0).data() + samples.rows());

        const StatsReport normality = normality_test(col, accept::kProjKsAlpha);
        out.write_json("projection_normality.json", stats_report_json(normality));

        const double se = std::sqrt(normality.moments.variance / double(col.size()));
        const double mean_sigmas = std::abs(normality.moments.mean) / se;

        // closed-form sd of one tangent component
        const double sd_pred = cfg.gue_scale * cfg.proj_dt / (cfg.hbar * std::sqrt(2.0));

        CriterionResult r;
        r.id = 7;
        r.name = "gue-conditioned-normality";
        r.metrics = {{"ks_p_value", normality.p_value},
                     {"ks_statistic", normality.ks_statistic},
                     {"mean_standard_errors", mean_sigmas},
                     {"sample_sd", std::sqrt(normality.moments.variance)},
                     {"predicted_sd", sd_pred}};
        r.passed = normality.pass;
        r.elapsed_seconds = timer.seconds();
        results.push_back(std::move(r));
    }
    return results;
}

// ------------------------------------------------------------------ criterion 8

CriterionResult run_gue_walk(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const std::uint64_t seed = *cfg.seed;
    const int dim = cfg.iso_dim;
    const int n = cfg.iso_samples;
    const GUEEnsemble ens = GUEEnsemble::make(dim, cfg.gue_scale);

    // two base states related by a unitary: a basis vector and a random state
    Eigen::VectorXcd phi1 = Eigen::VectorXcd::Zero(dim);
    phi1[0] = 1.0;
    auto dir_rng = make_engine(splitmix64(seed ^ 0x64697273ULL));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd phi2(dim);
    for (int j = 0; j < dim; ++j) phi2[j] = Complex(normal(dir_rng), normal(dir_rng));
    phi2.normalize();

    const auto dirs1 = random_tangent_directions(phi1, cfg.iso_directions, dir_rng);
    const auto dirs2 = random_tangent_directions(phi2, cfg.iso_directions, dir_rng);

    const int n_sets = 2 * cfg.iso_directions;
    std::vector<std::vector<double>> sets(std::size_t(n_sets),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));

    // one GUE draw yields one sample for every direction at its base state;
    // components along orthonormal directions are independent entries
    auto sample_state = [&](const Eigen::VectorXcd& phi,
                            const std::vector<Eigen::VectorXcd>& dirs, int set_offset,
                            std::uint64_t sub) {
        run_trials(n, cfg.policy, [&](int i) {
            auto rng = make_engine(trial_seed(sub, std::uint64_t(i)));
            Eigen::MatrixXcd H;
            sample_gue_into(ens, rng, H);
            const Eigen::VectorXd c =
                step_tangent_components(phi, H, cfg.iso_dt, cfg.hbar, dirs);
            for (int d = 0; d < cfg.iso_directions; ++d)
                sets[std::size_t(set_offset + d)][std::size_t(i)] = c[d];
        });
    };
    sample_state(phi1, dirs1, 0, splitmix64(seed ^ 0x62617331ULL));
    sample_state(phi2, dirs2, cfg.iso_directions, splitmix64(seed ^ 0x62617332ULL));

    const IsotropyReport iso = isotropy_test(sets, accept::kIsoAlpha);

    auto pcsv = out.csv("isotropy_pairs.csv",
                        {"set_i", "set_j", "ks_statistic", "p_raw", "p_adjusted"});
    for (const auto& e : iso.pairs)
        pcsv.row_values({double(e.i), double(e.j), e.statistic, e.p_raw, e.p_adjusted});

    auto mcsv = out.csv("direction_moments.csv",
                        {"set", "base_state", "mean", "variance", "skewness",
                         "excess_kurtosis"});
    for (int s = 0; s < n_sets; ++s) {
        const Moments m = sample_moments(sets[std::size_t(s)]);
        mcsv.row_values({double(s), double(s < cfg.iso_directions ? 1 : 2), m.mean, m.variance,
                         m.skewness, m.excess_kurtosis});
    }

    // fixed-time walk distances: the observable the Born analysis consumes
    {
        const int wd = 64, wtrials = 1000, wsteps = 8;
        const GUEEnsemble wens = GUEEnsemble::make(wd, cfg.gue_scale);
        const WalkConfig wcfg =
            WalkConfig::make(wsteps, cfg.iso_dt, wtrials, seed, RecordPolicy::Full, cfg.hbar);
        Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(wd);
        phi0[0] = 1.0;
        std::vector<double> dist(static_cast<std::size_t>(wtrials), 0.0);
        std::vector<double> norms(static_cast<std::size_t>(wtrials), 0.0);
        std::vector<std::vector<double>> paths(static_cast<std::size_t>(wtrials));
        run_trials(wtrials, cfg.policy, [&](int i) {
            const auto rec = walk_unconstrained(phi0, wens, wcfg,
                                                trial_seed(seed ^ 0x77616c6bULL, std::uint64_t(i)));
            dist[std::size_t(i)] = rec.final_fs_distance;
            norms[std::size_t(i)] = rec.state_norm;
            paths[std::size_t(i)] = rec.fs_distances;
        });
        auto wcsv = out.csv("walk_distance.csv", {"trial", "fs_distance"});
        for (int i = 0; i < wtrials; ++i) wcsv.row_values({double(i), dist[std::size_t(i)]});

        // full per-step dump for a small slice of the ensemble
        auto tcsv = out.csv("walk_trajectories.csv", {"trial", "step", "fs_distance"});
        for (int i = 0; i < std::min(wtrials, 50); ++i)
            for (int k = 0; k < wsteps; ++k)
                tcsv.row_values({double(i), double(k + 1), paths[std::size_t(i)][std::size_t(k)]});

        const Moments m = sample_moments(dist);
        double worst_norm = 0.0;
        for (double v : norms) worst_norm = std::max(worst_norm, std::abs(v - 1.0));
        out.write_json("walk_distance_summary.json",
                       {{"schema_version", 1},
                        {"mean_distance", m.mean},
                        {"variance", m.variance},
                        {"max_norm_error", worst_norm},
                        {"steps", wsteps},
                        {"dim", wd}});
    }

    CriterionResult r;
    r.id = 8;
    r.name = "isotropy-homogeneity";
    r.metrics = {{"min_p_adjusted", iso.min_p_adjusted},
                 {"max_ks_statistic", iso.max_statistic},
                 {"pairs", int(iso.pairs.size())},
                 {"alpha", accept::kIsoAlpha}};
    r.passed = iso.pass;
    r.elapsed_seconds = timer.seconds();
    out.write_json("gue_walk_summary.json",
                   {{"schema_version", 1},
                    {"min_p_adjusted", iso.min_p_adjusted},
                    {"pairs", int(iso.pairs.size())},
                    {"pass", iso.pass}});
    return r;
}

// ------------------------------------------------------------------ criterion 9

CriterionResult run_born_check(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const std::uint64_t seed = *cfg.seed;
    const int dim = cfg.born_dim;
    const int n_trials = cfg.born_trials;
    const GUEEnsemble ens = GUEEnsemble::make(dim, cfg.gue_scale);
    const WalkConfig wcfg = WalkConfig::make(cfg.born_steps, cfg.born_dt, n_trials, seed,
                                             RecordPolicy::Summary, cfg.hbar);

    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(dim);
    phi0[0] = 1.0;

    // 4 targets at one common distance (the pair test), plus the initial
    // state itself, a nearer and a farther one, to exhibit how the visit
    // frequency falls with distance.
    const double theta_main = 0.10, theta_near = 0.05, theta_far = 0.16;
    std::vector<double> target_thetas{theta_main, theta_main, theta_main, theta_main,
                                      0.0, theta_near, theta_far};
    auto trng = make_engine(splitmix64(seed ^ 0x74617267ULL));
    const auto dirs = random_tangent_directions(phi0, int(target_thetas.size()), trng);
    std::vector<Eigen::VectorXcd> targets;
    for (std::size_t j = 0; j < target_thetas.size(); ++j)
        targets.push_back(std::cos(target_thetas[j]) * phi0 +
                          std::sin(target_thetas[j]) * dirs[j]);

    const int n_targets = int(targets.size());
    Eigen::MatrixXd distances(n_trials, n_targets);
    run_trials(n_trials, cfg.policy, [&](int i) {
        const auto rec = walk_unconstrained(phi0, ens, wcfg, trial_seed(seed, std::uint64_t(i)),
                                            /*keep_final_state=*/true);
        for (int j = 0; j < n_targets; ++j)
            distances(i, j) =
                fubini_study_distance(targets[std::size_t(j)].dot(*rec.final_state));
    });

    // epsilon calibrated to the pooled median distance of the equal-distance
    // targets; symmetric in the pair members, so it cannot bias the pair test
    std::vector<double> pooled;
    pooled.reserve(std::size_t(n_trials) * 4);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < n_trials; ++i) pooled.push_back(distances(i, j));
    std::nth_element(pooled.begin(), pooled.begin() + pooled.size() / 2, pooled.end());
    const double epsilon = pooled[pooled.size() / 2];

    std::vector<double> born_probs;
    for (double th : target_thetas) born_probs.push_back(std::cos(th) * std::cos(th));

    const BornCurve curve = born_rule_curve(distances, born_probs, epsilon);
    const BornCurve curve_lo = born_rule_curve(distances, born_probs, 0.9 * epsilon);
    const BornCurve curve_hi = born_rule_curve(distances, born_probs, 1.1 * epsilon);

    auto ccsv = out.csv("born_curve.csv",
                        {"target", "fs_distance", "born_probability", "hits", "frequency",
                         "frequency_eps_lo", "frequency_eps_hi", "zero_hits"});
    for (int j = 0; j < n_targets; ++j) {
        const auto& row = curve.rows[std::size_t(j)];
        ccsv.row_values({double(j), target_thetas[std::size_t(j)], row.born_probability,
                         double(row.hits), row.empirical_frequency,
                         curve_lo.rows[std::size_t(j)].empirical_frequency,
                         curve_hi.rows[std::size_t(j)].empirical_frequency,
                         double(row.zero_hits)});
    }

    // pairwise agreement between the equal-distance targets
    auto pcsv = out.csv("born_pairs.csv", {"target_i", "target_j", "freq_i", "freq_j",
                                           "abs_diff", "pooled_se", "sigmas"});
    bool pairs_ok = true;
    double worst_sigmas = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const double fi = curve.rows[std::size_t(i)].empirical_frequency;
            const double fj = curve.rows[std::size_t(j)].empirical_frequency;
            const double se = std::sqrt(fi * (1.0 - fi) / n_trials + fj * (1.0 - fj) / n_trials);
            const double diff = std::abs(fi - fj);
            const double sig = se > 0.0 ? diff / se : (diff > 0.0 ? 1e9 : 0.0);
            worst_sigmas = std::max(worst_sigmas, sig);
            pairs_ok = pairs_ok && sig <= accept::kBornPairSigmas;
            pcsv.row_values({double(i), double(j), fi, fj, diff, se, sig});
        }
    }

    // closed-form Born <-> Gaussian identity, independent of the simulation
    auto gcsv = out.csv("gaussian_identity.csv",
                        {"separation", "born_closed_form", "gaussian_closed_form", "abs_diff"});
    double max_identity_diff = 0.0;
    for (int i = 0; i <= 16; ++i) {
        const double sep = 4.0 * cfg.sigma * i / 16.0;
        Eigen::VectorXd a(1), b(1);
        a << 0.0;
        b << sep;
        const auto [born, gauss] = born_gaussian_identity(a, b, cfg.sigma);
        max_identity_diff = std::max(max_identity_diff, std::abs(born - gauss));
        gcsv.row_values({sep, born, gauss, std::abs(born - gauss)});
    }

    // the initial state is the most visited target; frequency falls with distance
    const double f_self = curve.rows[4].empirical_frequency;
    bool self_maximal = true;
    for (const auto& row : curve.rows) self_maximal = self_maximal && f_self >= row.empirical_frequency;
    const bool ordering_ok =
        self_maximal &&
        curve.rows[5].empirical_frequency >= curve.rows[0].empirical_frequency &&
        curve.rows[0].empirical_frequency >= curve.rows[6].empirical_frequency;

    CriterionResult r;
    r.id = 9;
    r.name = "born-statistics";
    r.metrics = {{"epsilon", epsilon},
                 {"worst_pair_sigmas", worst_sigmas},
                 {"pair_limit_sigmas", accept::kBornPairSigmas},
                 {"max_identity_diff", max_identity_diff},
                 {"identity_tolerance", accept::kBornClosedFormTol},
                 {"distance_ordering_ok", ordering_ok}};
    r.passed = pairs_ok && max_identity_diff < accept::kBornClosedFormTol;
    r.elapsed_seconds = timer.seconds();
    out.write_json("born_summary.json",
                   {{"schema_version", 1},
                    {"epsilon", epsilon},
                    {"worst_pair_sigmas", worst_sigmas},
                    {"max_identity_diff", max_identity_diff},
                    {"distance_ordering_ok", ordering_ok}});
    return r;
}

// ----------------------------------------------------------------- criterion 10

CriterionResult run_macro(const ExperimentConfig& cfg, OutputSet& out) {
    Timer timer;
    const MacroScenario scenario = MacroScenario::make(
        Meters{cfg.macro_radius}, Kelvin{cfg.macro_temperature},
        PascalSeconds{cfg.macro_viscosity}, Seconds{cfg.macro_time}, Meters{cfg.macro_sigma},
        Meters{cfg.macro_wavelength});

    std::optional<MetersSqPerSecond> override_d;
    if (cfg.macro_diffusion_override) override_d = MetersSqPerSecond{*cfg.macro_diffusion_override};
    const FreezingReport rep =
        freezing_report(scenario, override_d ? &*override_d : nullptr, nullptr);

    json j;
    j["schema_version"] = 1;
    j["diffusion_direct_m2_per_s"] = rep.diffusion_direct.value;
    j["diffusion_used_m2_per_s"] = rep.diffusion_used.value;
    j["diffusion_overridden"] = rep.diffusion_overridden;
    j["displacement_axis_m"] = rep.displacement_axis.value;
    j["displacement_vector_m"] = rep.displacement_vector.value;
    j["theta_rad"] = rep.theta.value;
    j["theta_axis_rad"] = rep.theta_axis.value;
    j["theta_small_angle_rad"] = rep.theta_small_angle.value;
    j["theta_min_rad"] = rep.theta_min.value;
    j["frozen"] = rep.frozen;
    j["discrepancy_note"] = rep.discrepancy_note;
    out.write_json("freezing_report.json", j);

    const auto sweep = freezing_sweep(scenario, Meters{cfg.macro_sweep_min},
                                      Meters{cfg.macro_sweep_max}, cfg.macro_sweep_points);
    auto csv = out.csv("radius_sweep.csv",
                       {"radius_m", "diffusion_m2_per_s", "displacement_m", "theta_rad",
                        "frozen"});
    for (const auto& row : sweep)
        csv.row_values({row.radius.value, row.diffusion.value, row.displacement.value,
                        row.theta.value, double(row.frozen)});

    const bool delta_in_bracket =
        rep.displacement_vector.value >= accept::kMacroDisplacementLo &&
        rep.displacement_vector.value <= accept::kMacroDisplacementHi &&
        rep.displacement_axis.value >= accept::kMacroDisplacementLo &&
        rep.displacement_axis.value <= accept::kMacroDisplacementHi;
    const double theta_ratio = rep.theta.value / accept::kMacroThetaRef;
    const bool theta_ok = theta_ratio >= 1.0 / accept::kMacroThetaFactor &&
                          theta_ratio <= accept::kMacroThetaFactor;
    const bool note_ok = !rep.discrepancy_note.empty() || !rep.diffusion_overridden;

    CriterionResult r;
    r.id = 10;
    r.name = "macro-chain";
    r.metrics = {{"displacement_vector_m", rep.displacement_vector.value},
                 {"displacement_axis_m", rep.displacement_axis.value},
                 {"theta_rad", rep.theta.value},
                 {"theta_ratio_vs_reference", theta_ratio},
                 {"diffusion_direct_m2_per_s", rep.diffusion_direct.value},
                 {"frozen", rep.frozen}};
    r.passed = delta_in_bracket && theta_ok && note_ok && rep.frozen;
    r.elapsed_seconds = timer.seconds();
    return r;
}

} // namespace

// ----------------------------------------------------------------- config layer

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "verify-metric",  "decompose",        "ehrenfest", "classical-compare", "gue-walk",
        "constrained-walk", "born-check", "macro-estimate", "all"};
    return names;
}

json ExperimentConfig::to_json() const {
    json j;
    j["experiment"] = experiment;
    if (seed) j["seed"] = *seed;
    j["units"] = units;
    j["grid"] = {{"points", grid_points}, {"extent", grid_extent}};
    j["packet"] = {{"sigma", sigma}, {"mass", mass}, {"hbar", hbar}};
    j["lattice"] = {{"a", lattice_a},
                    {"p", lattice_p},
                    {"linear_force", linear_force},
                    {"harmonic_stiffness", harmonic_stiffness}};
    j["compare"] = {{"amplitude", compare_amplitude}, {"dt", compare_dt}};
    j["walk"] = {{"steps", walk_steps},
                 {"dt", walk_dt},
                 {"trials", walk_trials},
                 {"step_sigma", step_sigma}};
    j["projection"] = {{"grid_points", proj_grid_points},
                       {"samples", proj_samples},
                       {"dt", proj_dt},
                       {"gue_scale", gue_scale}};
    j["isotropy"] = {{"dim", iso_dim},
                     {"samples", iso_samples},
                     {"directions", iso_directions},
                     {"dt", iso_dt}};
    j["born"] = {{"dim", born_dim},
                 {"trials", born_trials},
                 {"steps", born_steps},
                 {"dt", born_dt}};
    j["stats"] = {{"alpha", alpha}};
    j["macro"] = {{"radius", macro_radius},
                  {"temperature", macro_temperature},
                  {"viscosity", macro_viscosity},
                  {"observation_time", macro_time},
                  {"sigma", macro_sigma},
                  {"wavelength", macro_wavelength},
                  {"sweep",
                   {{"min", macro_sweep_min}, {"max", macro_sweep_max},
                    {"points", macro_sweep_points}}}};
    if (macro_diffusion_override) j["macro"]["diffusion_override"] = *macro_diffusion_override;
    j["execution"] = {{"parallel", policy == ExecPolicy::Parallel}};
    return j;
}

namespace {

template <class T>
void take(const json& obj, const char* key, T& into, std::vector<Diagnostic>& diags,
          const std::string& path) {
    if (!obj.contains(key)) return;
    try {
        into = obj.at(key).get<T>();
    } catch (const std::exception& e) {
        diags.push_back({path + "/" + key, e.what()});
    }
}

void check_unknown(const json& obj, std::initializer_list<const char*> known,
                   std::vector<Diagnostic>& diags, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (const char* k : known)
            if (key == k) found = true;
        if (!found) diags.push_back({path + "/" + key, "unknown key"});
    }
}

} // namespace

ExperimentConfig config_from_json(const json& j, std::vector<Diagnostic>& diags) {
    ExperimentConfig cfg;
    if (!j.is_object()) {
        diags.push_back({"/", "config must be a JSON object"});
        return cfg;
    }
    check_unknown(j,
                  {"experiment", "seed", "units", "out_dir", "grid", "packet", "lattice",
                   "compare", "walk", "projection", "isotropy", "born", "stats", "macro",
                   "execution"},
                  diags, "");

    take(j, "experiment", cfg.experiment, diags, "");
    if (j.contains("seed")) {
        std::uint64_t s = 0;
        take(j, "seed", s, diags, "");
        cfg.seed = s;
    }
    take(j, "units", cfg.units, diags, "");
    std::string out;
    take(j, "out_dir", out, diags, "");
    if (!out.empty()) cfg.out_dir = out;

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        check_unknown(g, {"points", "extent"}, diags, "/grid");
        take(g, "points", cfg.grid_points, diags, "/grid");
        take(g, "extent", cfg.grid_extent, diags, "/grid");
    }
    if (j.contains("packet")) {
        const auto& g = j.at("packet");
        check_unknown(g, {"sigma", "mass", "hbar"}, diags, "/packet");
        take(g, "sigma", cfg.sigma, diags, "/packet");
        take(g, "mass", cfg.mass, diags, "/packet");
        take(g, "hbar", cfg.hbar, diags, "/packet");
    }
    if (j.contains("lattice")) {
        const auto& g = j.at("lattice");
        check_unknown(g, {"a", "p", "linear_force", "harmonic_stiffness"}, diags, "/lattice");
        take(g, "a", cfg.lattice_a, diags, "/lattice");
        take(g, "p", cfg.lattice_p, diags, "/lattice");
        take(g, "linear_force", cfg.linear_force, diags, "/lattice");
        take(g, "harmonic_stiffness", cfg.harmonic_stiffness, diags, "/lattice");
    }
    if (j.contains("compare")) {
        const auto& g = j.at("compare");
        check_unknown(g, {"amplitude", "dt"}, diags, "/compare");
        take(g, "amplitude", cfg.compare_amplitude, diags, "/compare");
        take(g, "dt", cfg.compare_dt, diags, "/compare");
    }
    if (j.contains("walk")) {
        const auto& g = j.at("walk");
        check_unknown(g, {"steps", "dt", "trials", "step_sigma"}, diags, "/walk");
        take(g, "steps", cfg.walk_steps, diags, "/walk");
        take(g, "dt", cfg.walk_dt, diags, "/walk");
        take(g, "trials", cfg.walk_trials, diags, "/walk");
        take(g, "step_sigma", cfg.step_sigma, diags, "/walk");
    }
    if (j.contains("projection")) {
        const auto& g = j.at("projection");
        check_unknown(g, {"grid_points", "samples", "dt", "gue_scale"}, diags, "/projection");
        take(g, "grid_points", cfg.proj_grid_points, diags, "/projection");
        take(g, "samples", cfg.proj_samples, diags, "/projection");
        take(g, "dt", cfg.proj_dt, diags, "/projection");
        take(g, "gue_scale", cfg.gue_scale, diags, "/projection");
    }
    if (j.contains("isotropy")) {
        const auto& g = j.at("isotropy");
        check_unknown(g, {"dim", "samples", "directions", "dt"}, diags, "/isotropy");
        take(g, "dim", cfg.iso_dim, diags, "/isotropy");
        take(g, "samples", cfg.iso_samples, diags, "/isotropy");
        take(g, "directions", cfg.iso_directions, diags, "/isotropy");
        take(g, "dt", cfg.iso_dt, diags, "/isotropy");
    }
    if (j.contains("born")) {
        const auto& g = j.at("born");
        check_unknown(g, {"dim", "trials", "steps", "dt"}, diags, "/born");
        take(g, "dim", cfg.born_dim, diags, "/born");
        take(g, "trials", cfg.born_trials, diags, "/born");
        take(g, "steps", cfg.born_steps, diags, "/born");
        take(g, "dt", cfg.born_dt, diags, "/born");
    }
    if (j.contains("stats")) {
        const auto& g = j.at("stats");
        check_unknown(g, {"alpha"}, diags, "/stats");
        take(g, "alpha", cfg.alpha, diags, "/stats");
    }
    if (j.contains("macro")) {
        const auto& g = j.at("macro");
        check_unknown(g,
                      {"radius", "temperature", "viscosity", "observation_time", "sigma",
                       "wavelength", "diffusion_override", "sweep"},
                      diags, "/macro");
        take(g, "radius", cfg.macro_radius, diags, "/macro");
        take(g, "temperature", cfg.macro_temperature, diags, "/macro");
        take(g, "viscosity", cfg.macro_viscosity, diags, "/macro");
        take(g, "observation_time", cfg.macro_time, diags, "/macro");
        take(g, "sigma", cfg.macro_sigma, diags, "/macro");
        take(g, "wavelength", cfg.macro_wavelength, diags, "/macro");
        if (g.contains("diffusion_override")) {
            if (g.at("diffusion_override").is_null()) {
                cfg.macro_diffusion_override.reset(); // explicit null: run the direct value
            } else {
                double d = 0.0;
                take(g, "diffusion_override", d, diags, "/macro");
                cfg.macro_diffusion_override = d;
            }
        }
        if (g.contains("sweep")) {
            const auto& sw = g.at("sweep");
            check_unknown(sw, {"min", "max", "points"}, diags, "/macro/sweep");
            take(sw, "min", cfg.macro_sweep_min, diags, "/macro/sweep");
            take(sw, "max", cfg.macro_sweep_max, diags, "/macro/sweep");
            take(sw, "points", cfg.macro_sweep_points, diags, "/macro/sweep");
        }
    }
    if (j.contains("execution")) {
        const auto& g = j.at("execution");
        check_unknown(g, {"parallel"}, diags, "/execution");
        bool parallel = cfg.policy == ExecPolicy::Parallel;
        take(g, "parallel", parallel, diags, "/execution");
        cfg.policy = parallel ? ExecPolicy::Parallel : ExecPolicy::Serial;
    }
    return cfg;
}

std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
    std::vector<Diagnostic> diags;
    auto bad = [&](const std::string& path, const std::string& msg) {
        diags.push_back({path, msg});
    };

    if (cfg.experiment.empty()) bad("/experiment", "missing experiment name");
    const auto& names = experiment_names();
    if (!cfg.experiment.empty() &&
        std::find(names.begin(), names.end(), cfg.experiment) == names.end())
        bad("/experiment", "unknown experiment '" + cfg.experiment + "'");
    if (!cfg.seed) bad("/seed", "missing seed: runs must be explicitly seeded");
    if (cfg.units != "natural" && cfg.units != "si") bad("/units", "units must be natural or si");

    if (cfg.grid_points < 16 || (cfg.grid_points & (cfg.grid_points - 1)) != 0)
        bad("/grid/points", "points must be a power of two >= 16");
    if (!(cfg.grid_extent > 0.0)) bad("/grid/extent", "extent must be positive");
    if (!(cfg.sigma > 0.0)) bad("/packet/sigma", "sigma must be positive");

    // packet margin, worst case over the test lattice
    double worst_a = 0.0;
    for (double a : cfg.lattice_a) worst_a = std::max(worst_a, std::abs(a));
    const double half = 0.5 * cfg.grid_extent * cfg.sigma;
    if (worst_a + kPacketMarginSigmas * cfg.sigma > half) {
        const double suggested = 2.0 * (worst_a + kPacketMarginSigmas * cfg.sigma) / cfg.sigma;
        bad("/grid/extent", "packet margin violated; extent of at least " +
                                format_double(suggested) + " sigma required");
    }
    if (cfg.compare_amplitude + kPacketMarginSigmas * cfg.sigma > half)
        bad("/compare/amplitude", "oscillation amplitude violates the packet margin");

    if (cfg.walk_steps < 1) bad("/walk/steps", "steps must be >= 1");
    if (!(cfg.walk_dt > 0.0)) bad("/walk/dt", "dt must be positive");
    if (cfg.walk_trials < 100) bad("/walk/trials", "need at least 100 trials for statistics");
    if (cfg.step_sigma < 0.0) bad("/walk/step_sigma", "step sigma must be >= 0");
    const double extent_4sd =
        4.0 * cfg.step_sigma * cfg.walk_dt * std::sqrt(double(cfg.walk_steps));
    if (extent_4sd + kPacketMarginSigmas * cfg.sigma > half)
        bad("/walk/step_sigma", "walk extent likely to violate the boundary margin");

    if (cfg.proj_grid_points < 16 ||
        (cfg.proj_grid_points & (cfg.proj_grid_points - 1)) != 0 || cfg.proj_grid_points > 512)
        bad("/projection/grid_points", "grid points must be a power of two in [16, 512]");
    if (cfg.iso_dim < 2 || cfg.iso_dim > 512) bad("/isotropy/dim", "dim must be in [2, 512]");
    if (cfg.iso_directions < 2) bad("/isotropy/directions", "need at least 2 directions");
    if (cfg.iso_samples < 1000) bad("/isotropy/samples", "need at least 1000 samples per set");
    if (cfg.born_dim < 2 || cfg.born_dim > 512) bad("/born/dim", "dim must be in [2, 512]");
    if (cfg.born_trials < 1000) bad("/born/trials", "need at least 1000 trials");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5)) bad("/stats/alpha", "alpha must be in (0, 0.5)");

    if (cfg.compare_dt > 5e-3)
        bad("/compare/dt", "time step too coarse for the per-step convergence budget");

    if (!(cfg.macro_radius > 0.0) || !(cfg.macro_temperature > 0.0) ||
        !(cfg.macro_viscosity > 0.0) || !(cfg.macro_time > 0.0) || !(cfg.macro_sigma > 0.0) ||
        !(cfg.macro_wavelength > 0.0))
        bad("/macro", "macro scenario parameters must all be positive");
    return diags;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    RunOutcome outcome;
    const auto diags = validate_config(cfg);
    if (!diags.empty()) {
        outcome.code = ExitCode::ConfigError;
        outcome.failed_criterion = diags.front().path + ": " + diags.front().message;
        return outcome;
    }

    const std::string started = utc_timestamp();
    OutputSet out(cfg.out_dir);
    std::vector<CriterionResult>& crit = outcome.criteria;

    const bool all = cfg.experiment == "all";
    if (all || cfg.experiment == "verify-metric") {
        Timer t;
        CriterionResult metric = run_verify_metric(cfg, out);
        crit.push_back(metric);
        crit.push_back(criterion_phase_space(metric, t.seconds()));
    }
    if (all || cfg.experiment == "decompose") crit.push_back(run_decompose(cfg, out));
    if (all || cfg.experiment == "ehrenfest") crit.push_back(run_ehrenfest(cfg, out));
    if (all || cfg.experiment == "classical-compare")
        crit.push_back(run_classical_compare(cfg, out));
    if (all || cfg.experiment == "constrained-walk") {
        auto rs = run_constrained_walk(cfg, out);
        crit.insert(crit.end(), rs.begin(), rs.end());
    }
    if (all || cfg.experiment == "gue-walk") crit.push_back(run_gue_walk(cfg, out));
    if (all || cfg.experiment == "born-check") crit.push_back(run_born_check(cfg, out));
    if (all || cfg.experiment == "macro-estimate") crit.push_back(run_macro(cfg, out));

    json summary;
    summary["schema_version"] = 1;
    summary["experiment"] = cfg.experiment;
    summary["seed"] = *cfg.seed;
    summary["criteria"] = json::array();
    bool all_passed = true;
    json timings = json::object();
    for (const auto& c : crit) {
        summary["criteria"].push_back({{"id", c.id},
                                       {"name", c.name},
                                       {"passed", c.passed},
                                       {"metrics", c.metrics}});
        timings[c.name] = c.elapsed_seconds;
        all_passed = all_passed && c.passed;
        if (!c.passed && outcome.failed_criterion.empty())
            outcome.failed_criterion = "criterion " + std::to_string(c.id) + " (" + c.name + ")";
    }
    summary["all_passed"] = all_passed;
    out.write_json("summary.json", summary);
    out.finalize_schemas();

    RunManifest manifest;
    manifest.config = cfg.to_json();
    manifest.master_seed = *cfg.seed;
    manifest.started_utc = started;
    manifest.finished_utc = utc_timestamp();
    // timings wobble run to run; they live here with the timestamps so the
    // numerical artifacts stay byte-reproducible
    manifest.config["timings_seconds"] = timings;
    write_manifest(cfg.out_dir, std::move(manifest));

    outcome.code = all_passed ? ExitCode::Ok : ExitCode::CriterionFailed;
    return outcome;
}

} // namespace statewalk
