// Acceptance harness: drives the CLI end to end, re-checks every criterion
// from the written artifacts against the pinned tolerances, and verifies that
// a repeated run is byte-identical. One line per criterion.

#include "statewalk/acceptance.hpp"
#include "statewalk/io.hpp"
#include "statewalk/manifest.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
namespace accept = statewalk::accept;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << " " << name << ": "
              << detail << "\n";
    if (!ok) ++g_failures;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

const json* find_criterion(const json& summary, int id) {
    for (const auto& c : summary.at("criteria"))
        if (c.at("id").get<int>() == id) return &c;
    return nullptr;
}

std::string fmt(double v) { return statewalk::format_double(v); }

std::vector<fs::path> artifact_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        if (e.path().filename() == statewalk::kManifestFileName) continue;
        files.push_back(fs::relative(e.path(), dir));
    }
    std::sort(files.begin(), files.end());
    return files;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = STATEWALK_CLI_PATH;
    fs::path work = fs::temp_directory_path() / "statewalk_acceptance";
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") cli = argv[i + 1];
        if (flag == "--work") work = argv[i + 1];
    }
    fs::remove_all(work);
    const fs::path dir_a = work / "run_a";
    const fs::path dir_b = work / "run_b";

    const auto t0 = std::chrono::steady_clock::now();
    const int rc_a = run_cli(cli, "run all --seed 42 --out " + dir_a.string());
    const double elapsed_a =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (rc_a != 0 && rc_a != 3) {
        std::cerr << "[FAIL] 'run all' exited with code " << rc_a << "\n";
        return 1;
    }

    json summary;
    try {
        summary = json::parse(statewalk::read_text_file(dir_a / "summary.json"));
    } catch (const std::exception& e) {
        std::cerr << "[FAIL] cannot read run summary: " << e.what() << "\n";
        return 1;
    }

    // timings recorded by the run itself (manifest carries them)
    json timings = json::object();
    try {
        const json manifest =
            json::parse(statewalk::read_text_file(dir_a / statewalk::kManifestFileName));
        timings = manifest.at("config").value("timings_seconds", json::object());
    } catch (const std::exception&) {
    }
    auto timing_of = [&](const std::string& name) {
        return timings.contains(name) ? timings.at(name).get<double>() : 0.0;
    };

    // 1: position-space metric identity
    if (const json* c = find_criterion(summary, 1)) {
        const double r1 = c->at("metrics").at("max_residual_line").get<double>();
        const double r2 = c->at("metrics").at("max_residual_overlap").get<double>();
        const bool ok = r1 < accept::kMetricResidualTol && r2 < accept::kMetricResidualTol;
        report(1, "metric identity", ok,
               "max residual " + fmt(std::max(r1, r2)) + " < 1e-06 (" +
                   fmt(timing_of("metric-identity")) + " s)");
    } else {
        report(1, "metric identity", false, "missing from summary");
    }

    // 2: phase-space metric identity
    if (const json* c = find_criterion(summary, 2)) {
        const double r = c->at("metrics").at("max_residual").get<double>();
        report(2, "phase-space metric identity", r < accept::kPhaseSpaceResidualTol,
               "max residual " + fmt(r) + " < 1e-06");
    } else {
        report(2, "phase-space metric identity", false, "missing from summary");
    }

    // 3: velocity decomposition
    if (const json* c = find_criterion(summary, 3)) {
        const double ratio = c->at("metrics").at("max_residual_ratio").get<double>();
        const double comp = c->at("metrics").at("max_component_rel_error").get<double>();
        const bool ok = c->at("passed").get<bool>() &&
                        ratio < accept::kDecompResidualRelTol &&
                        comp < accept::kDecompComponentRelTol;
        report(3, "velocity decomposition", ok,
               "residual ratio " + fmt(ratio) + " < 1e-06, component error " + fmt(comp) +
                   " < 1e-04 (" + fmt(timing_of("velocity-decomposition")) + " s)");
    } else {
        report(3, "velocity decomposition", false, "missing from summary");
    }

    // 4: commutators and Ehrenfest projections
    if (const json* c = find_criterion(summary, 4)) {
        const double err = c->at("metrics").at("max_error").get<double>();
        report(4, "commutator/Ehrenfest vs Poisson", err < accept::kPoissonTol,
               "max error " + fmt(err) + " < 1e-06");
    } else {
        report(4, "commutator/Ehrenfest vs Poisson", false, "missing from summary");
    }

    // 5: trajectory comparison
    if (const json* c = find_criterion(summary, 5)) {
        const double dev = c->at("metrics").at("max_position_deviation").get<double>();
        const double dx = c->at("metrics").at("grid_spacing").get<double>();
        report(5, "Newtonian comparator", dev < dx,
               "max deviation " + fmt(dev) + " < cell " + fmt(dx) + " (" +
                   fmt(timing_of("newtonian-comparator")) + " s)");
    } else {
        report(5, "Newtonian comparator", false, "missing from summary");
    }

    // 6: constrained walk statistics
    if (const json* c = find_criterion(summary, 6)) {
        const auto& m = c->at("metrics");
        const double p = m.at("ks_p_value").get<double>();
        const double vr = m.at("variance_rel_error").get<double>();
        const double dr = m.at("diffusion_rel_error").get<double>();
        const double tr = m.at("max_translation_residual").get<double>();
        const bool ok = p > accept::kWalkKsAlpha && vr < accept::kWalkVarianceRelTol &&
                        dr < accept::kWalkDiffusionRelTol &&
                        tr < accept::kWalkTranslationResidualTol;
        report(6, "constrained walk", ok,
               "KS p " + fmt(p) + " > 0.01, var err " + fmt(vr) + " < 0.05, D err " + fmt(dr) +
                   " < 0.05, translation residual " + fmt(tr) + " < 1e-08 (" +
                   fmt(timing_of("constrained-walk")) + " s)");
    } else {
        report(6, "constrained walk", false, "missing from summary");
    }

    // 7: GUE-conditioned normality
    if (const json* c = find_criterion(summary, 7)) {
        const double p = c->at("metrics").at("ks_p_value").get<double>();
        report(7, "GUE-conditioned normality", p > accept::kProjKsAlpha,
               "KS p " + fmt(p) + " > 0.01 (" + fmt(timing_of("gue-conditioned-normality")) +
                   " s)");
    } else {
        report(7, "GUE-conditioned normality", false, "missing from summary");
    }

    // 8: isotropy and homogeneity
    if (const json* c = find_criterion(summary, 8)) {
        const double p = c->at("metrics").at("min_p_adjusted").get<double>();
        const int pairs = c->at("metrics").at("pairs").get<int>();
        report(8, "isotropy/homogeneity", p > accept::kIsoAlpha,
               "min adjusted p " + fmt(p) + " > 0.01 over " + std::to_string(pairs) +
                   " pairs (" + fmt(timing_of("isotropy-homogeneity")) + " s)");
    } else {
        report(8, "isotropy/homogeneity", false, "missing from summary");
    }

    // 9: Born statistics
    if (const json* c = find_criterion(summary, 9)) {
        const double sig = c->at("metrics").at("worst_pair_sigmas").get<double>();
        const double idn = c->at("metrics").at("max_identity_diff").get<double>();
        const bool ok = sig <= accept::kBornPairSigmas && idn < accept::kBornClosedFormTol;
        report(9, "Born statistics", ok,
               "worst pair " + fmt(sig) + " sigma <= 3, identity diff " + fmt(idn) +
                   " < 1e-12 (" + fmt(timing_of("born-statistics")) + " s)");
    } else {
        report(9, "Born statistics", false, "missing from summary");
    }

    // 10: macroscopic chain
    if (const json* c = find_criterion(summary, 10)) {
        const auto& m = c->at("metrics");
        const double dv = m.at("displacement_vector_m").get<double>();
        const double da = m.at("displacement_axis_m").get<double>();
        const double ratio = m.at("theta_ratio_vs_reference").get<double>();
        const bool in_bracket = dv >= accept::kMacroDisplacementLo &&
                                dv <= accept::kMacroDisplacementHi &&
                                da >= accept::kMacroDisplacementLo &&
                                da <= accept::kMacroDisplacementHi;
        const bool theta_ok = ratio >= 1.0 / accept::kMacroThetaFactor &&
                              ratio <= accept::kMacroThetaFactor;
        report(10, "macroscopic chain", in_bracket && theta_ok && c->at("passed").get<bool>(),
               "displacement " + fmt(dv) + " m in [1e-13, 1e-12], theta ratio " + fmt(ratio) +
                   " within factor 3");
    } else {
        report(10, "macroscopic chain", false, "missing from summary");
    }

    // 11: determinism of a repeated run
    {
        const int rc_b = run_cli(cli, "run all --seed 42 --out " + dir_b.string());
        bool ok = (rc_b == rc_a);
        std::string detail;
        if (!ok) {
            detail = "exit codes differ";
        } else {
            const auto fa = artifact_files(dir_a);
            const auto fb = artifact_files(dir_b);
            if (fa != fb) {
                ok = false;
                detail = "file inventories differ";
            } else {
                std::size_t mismatched = 0;
                for (const auto& rel : fa) {
                    if (statewalk::read_text_file(dir_a / rel) !=
                        statewalk::read_text_file(dir_b / rel))
                        ++mismatched;
                }
                ok = mismatched == 0;
                detail = std::to_string(fa.size()) + " artifacts compared, " +
                         std::to_string(mismatched) + " mismatched";
            }
        }
        report(11, "determinism", ok, detail + " (full run " + fmt(elapsed_a) + " s)");
    }

    std::cout << (g_failures == 0 ? "acceptance: all criteria passed\n"
                                  : "acceptance: FAILURES present\n");
    return g_failures == 0 ? 0 : 1;
}
