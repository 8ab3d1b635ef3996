#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "statewalk/ensemble.hpp"
#include "statewalk/evolve.hpp"
#include "statewalk/rng.hpp"
#include "statewalk/stats.hpp"
#include "statewalk/walk.hpp"

#include <cmath>
#include <numbers>

using namespace statewalk;

namespace {
PacketParams packet1d(double a, double p) {
    Eigen::VectorXd av(1), pv(1);
    av << a;
    pv << p;
    return PacketParams::make(av, pv, 1.0, 1.0, 1.0);
}
} // namespace

TEST_CASE("gue entries have the right moments") {
    const GUEEnsemble ens = GUEEnsemble::make(4, 1.3);
    auto rng = make_engine(11);
    const int draws = 100000;
    double mean_diag = 0.0, var_diag = 0.0, var_off_re = 0.0, mean_off_re = 0.0;
    Eigen::MatrixXcd H;
    for (int i = 0; i < draws; ++i) {
        sample_gue_into(ens, rng, H);
        mean_diag += H(1, 1).real();
        var_diag += H(1, 1).real() * H(1, 1).real();
        mean_off_re += H(0, 2).real();
        var_off_re += H(0, 2).real() * H(0, 2).real();
        CHECK(H(2, 0) == std::conj(H(0, 2)));
    }
    mean_diag /= draws;
    var_diag = var_diag / draws - mean_diag * mean_diag;
    mean_off_re /= draws;
    var_off_re = var_off_re / draws - mean_off_re * mean_off_re;

    const double s2 = 1.3 * 1.3;
    // 4 standard errors on the means, 2% on the variances
    CHECK(std::abs(mean_diag) < 4.0 * 1.3 / std::sqrt(double(draws)));
    CHECK(std::abs(mean_off_re) < 4.0 * 1.3 / std::sqrt(double(draws)));
    CHECK(std::abs(var_diag - s2) / s2 < 0.02);
    CHECK(std::abs(var_off_re - 0.5 * s2) / (0.5 * s2) < 0.02);
}

TEST_CASE("gue spectrum fills the semicircle support") {
    const int n = 128, draws = 300;
    const GUEEnsemble ens = GUEEnsemble::make(n, 1.0);
    auto rng = make_engine(5);
    double max_abs = 0.0;
    Eigen::MatrixXcd H;
    for (int d = 0; d < draws; ++d) {
        sample_gue_into(ens, rng, H);
        // eigenvalues via a zero-time dense step's internals would be overkill;
        // use the solver directly
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
        max_abs = std::max(max_abs, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    const double edge = 2.0 * std::sqrt(double(n));
    CHECK(max_abs > 0.9 * edge);
    CHECK(max_abs < 1.1 * edge);
}

TEST_CASE("unconstrained walk basics") {
    const int n = 32;
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(n);
    phi0[0] = 1.0;

    SUBCASE("vanishing scale freezes the walk") {
        const GUEEnsemble tiny = GUEEnsemble::make(n, 0.0);
        const WalkConfig cfg = WalkConfig::make(20, 0.01, 1, 3, RecordPolicy::Full);
        const auto rec = walk_unconstrained(phi0, tiny, cfg, 99);
        for (double d : rec.fs_distances) CHECK(d < 1e-10);
    }
    SUBCASE("norm is preserved over many steps") {
        const GUEEnsemble ens = GUEEnsemble::make(n, 1.0);
        const WalkConfig cfg = WalkConfig::make(1000, 0.02, 1, 3, RecordPolicy::Summary);
        const auto rec = walk_unconstrained(phi0, ens, cfg, 42);
        CHECK(std::abs(rec.state_norm - 1.0) < 1e-8);
        CHECK(rec.final_fs_distance >= 0.0);
        CHECK(rec.final_fs_distance <= std::numbers::pi / 2.0);
    }
    SUBCASE("one-step mean square distance matches first-order perturbation") {
        const double s = 1.0, dt = 2e-3;
        const GUEEnsemble ens = GUEEnsemble::make(n, s);
        const WalkConfig cfg = WalkConfig::make(1, dt, 1, 3, RecordPolicy::Summary);
        const int trials = 4000;
        double mean_sq = 0.0;
        for (int i = 0; i < trials; ++i) {
            const auto rec = walk_unconstrained(phi0, ens, cfg, trial_seed(17, i));
            mean_sq += rec.final_fs_distance * rec.final_fs_distance;
        }
        mean_sq /= trials;
        const double predicted = (n - 1) * s * s * dt * dt; // E||H phi_perp||^2 dt^2
        CHECK(std::abs(mean_sq - predicted) / predicted < 0.05);
    }
}

TEST_CASE("step tangent components") {
    const int n = 32;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);
    phi[0] = 1.0;
    auto rng = make_engine(23);
    const auto dirs = random_tangent_directions(phi, 2, rng);
    CHECK(std::abs(dirs[0].dot(dirs[1])) < 1e-12);
    CHECK(std::abs(dirs[0].dot(phi)) < 1e-12);

    SUBCASE("zero hamiltonian gives zero components") {
        const Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
        const Eigen::VectorXd c = step_tangent_components(phi, H, 0.1, 1.0, dirs);
        CHECK(c.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("components are centered and uncorrelated across directions") {
        const GUEEnsemble ens = GUEEnsemble::make(n, 1.0);
        const int draws = 10000;
        double m0 = 0.0, m1 = 0.0, cross = 0.0, v0 = 0.0, v1 = 0.0;
        Eigen::MatrixXcd H;
        for (int i = 0; i < draws; ++i) {
            sample_gue_into(ens, rng, H);
            const Eigen::VectorXd c = step_tangent_components(phi, H, 0.1, 1.0, dirs);
            m0 += c[0];
            m1 += c[1];
            v0 += c[0] * c[0];
            v1 += c[1] * c[1];
            cross += c[0] * c[1];
        }
        m0 /= draws;
        m1 /= draws;
        v0 = v0 / draws - m0 * m0;
        v1 = v1 / draws - m1 * m1;
        const double corr = (cross / draws - m0 * m1) / std::sqrt(v0 * v1);
        const double se_mean = std::sqrt(v0 / draws);
        CHECK(std::abs(m0) < 4.0 * se_mean);
        CHECK(std::abs(m1) < 4.0 * se_mean);
        CHECK(std::abs(corr) < 4.0 / std::sqrt(double(draws)));
    }
}

TEST_CASE("constrained walk translates the packet") {
    const GridSpec grid = GridSpec::make(1, 512, 40.0);
    const PacketParams params = packet1d(0.0, 0.0);

    SUBCASE("zero step size leaves the state in place") {
        const WalkConfig cfg = WalkConfig::make(50, 0.1, 1, 3, RecordPolicy::Full);
        const auto rec = walk_constrained(params, grid, cfg, 0.0, 7);
        CHECK(rec.displacement[0] == 0.0);
        CHECK(rec.translation_residual < 1e-12);
        for (double d : rec.fs_distances) CHECK(d < 1e-7);
    }
    SUBCASE("final state equals the closed-form translated packet") {
        const WalkConfig cfg = WalkConfig::make(100, 0.1, 1, 3, RecordPolicy::Summary);
        const auto rec = walk_constrained(params, grid, cfg, 0.05, 99);
        CHECK(std::abs(rec.displacement[0]) > 0.0);
        CHECK(rec.translation_residual < 1e-8);
        CHECK_FALSE(rec.margin_violation);
    }
    SUBCASE("moving packet keeps its momentum phase") {
        const auto rec = walk_constrained(packet1d(0.0, 1.5), grid,
                                          WalkConfig::make(60, 0.1, 1, 3), 0.05, 4);
        CHECK(rec.translation_residual < 1e-8);
    }
    SUBCASE("displacement variance matches the iid sum") {
        const int trials = 2000, steps = 100;
        const double s_xi = 0.05, dt = 0.1;
        const WalkConfig cfg = WalkConfig::make(steps, dt, trials, 3);
        std::vector<double> d(trials);
        run_trials(trials, ExecPolicy::Serial, [&](int i) {
            d[std::size_t(i)] =
                walk_constrained(params, grid, cfg, s_xi, trial_seed(1234, i)).displacement[0];
        });
        const double var = sample_moments(d).variance;
        const double target = steps * s_xi * s_xi * dt * dt;
        CHECK(std::abs(var - target) / target < 0.10);
    }
}

TEST_CASE("spectral translations commute") {
    const GridSpec grid = GridSpec::make(1, 256, 40.0);
    const StateVector phi = make_packet(packet1d(0.0, 0.7), grid);

    auto translate = [&](const StateVector& s, double shift) {
        StateVector out = s;
        fft_grid(out.amp, grid, false);
        for (Eigen::Index j = 0; j < out.amp.size(); ++j)
            out.amp[j] *= std::exp(-kI * (grid.wavenumber(int(j)) * shift));
        fft_grid(out.amp, grid, true);
        return out;
    };

    const std::vector<double> shifts{0.3, -0.8, 1.1, 0.25};
    StateVector fwd = phi;
    for (double s : shifts) fwd = translate(fwd, s);
    StateVector rev = phi;
    for (auto it = shifts.rbegin(); it != shifts.rend(); ++it) rev = translate(rev, *it);
    CHECK(std::sqrt((fwd.amp - rev.amp).squaredNorm() * grid.cell_volume()) < 1e-8);
}

TEST_CASE("gue steps project onto the classical direction as a centered gaussian") {
    const GridSpec grid = GridSpec::make(1, 64, 40.0);
    const GUEEnsemble ens = GUEEnsemble::make(64, 1.0);
    const Eigen::MatrixXd samples =
        project_gue_step_onto_classical(packet1d(0.0, 0.0), grid, ens, 0.01, 2000, 77);
    std::vector<double> col(samples.col(0).data(), samples.col(0).data() + samples.rows());

    const Moments m = sample_moments(col);
    CHECK(std::abs(m.mean) < 4.0 * std::sqrt(m.variance / col.size()));

    const StatsReport rep = normality_test(col, 0.01);
    CHECK(rep.pass);

    // known closed form for the component variance
    const double sd_pred = 1.0 * 0.01 / std::sqrt(2.0);
    CHECK(std::abs(std::sqrt(m.variance) - sd_pred) / sd_pred < 0.05);
}

TEST_CASE("classical-direction variance is isotropic in two dimensions") {
    const GridSpec grid = GridSpec::make(2, 16, 40.0);
    Eigen::VectorXd a(2), p(2);
    a << 0.0, 0.0;
    p << 0.0, 0.0;
    const PacketParams params = PacketParams::make(a, p, 1.0, 1.0, 1.0);
    const GUEEnsemble ens = GUEEnsemble::make(int(grid.size()), 1.0);
    const int n = 1500;
    const Eigen::MatrixXd samples =
        project_gue_step_onto_classical(params, grid, ens, 0.01, n, 13);
    REQUIRE(samples.cols() == 2);
    std::vector<double> c0(samples.col(0).data(), samples.col(0).data() + n);
    std::vector<double> c1(samples.col(1).data(), samples.col(1).data() + n);
    const double v0 = sample_moments(c0).variance;
    const double v1 = sample_moments(c1).variance;
    // variance ratio within 3 standard errors of 1
    CHECK(std::abs(v0 / v1 - 1.0) < 3.0 * std::sqrt(4.0 / n));
}

TEST_CASE("calibrated gue scale reproduces the classical step size") {
    const double step_sigma = 0.1, packet_sigma = 1.0, dt = 0.05;
    const double scale = calibrate_scale(step_sigma, packet_sigma, 1.0);

    const int n = 48, draws = 3000;
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(n);
    phi[0] = 1.0;
    auto rng = make_engine(31);
    const auto dirs = random_tangent_directions(phi, 1, rng);
    const GUEEnsemble ens = GUEEnsemble::make(n, scale);
    std::vector<double> comps(draws);
    Eigen::MatrixXcd H;
    for (int i = 0; i < draws; ++i) {
        sample_gue_into(ens, rng, H);
        comps[std::size_t(i)] = step_tangent_components(phi, H, dt, 1.0, dirs)[0];
    }
    const double sd = std::sqrt(sample_moments(comps).variance);
    // classical step of sd s_xi dt subtends s_xi dt / (2 sigma) on the sphere
    const double target = step_sigma * dt / (2.0 * packet_sigma);
    CHECK(std::abs(sd - target) / target < 0.05);
}

TEST_CASE("walks are reproducible from their seeds") {
    const int n = 16;
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(n);
    phi0[0] = 1.0;
    const GUEEnsemble ens = GUEEnsemble::make(n, 1.0);
    const WalkConfig cfg = WalkConfig::make(25, 0.01, 1, 3, RecordPolicy::Full);

    const auto a = walk_unconstrained(phi0, ens, cfg, 555);
    const auto b = walk_unconstrained(phi0, ens, cfg, 555);
    REQUIRE(a.fs_distances.size() == b.fs_distances.size());
    for (std::size_t i = 0; i < a.fs_distances.size(); ++i)
        CHECK(a.fs_distances[i] == b.fs_distances[i]); // bitwise

    const auto c = walk_unconstrained(phi0, ens, cfg, 556);
    CHECK(a.final_fs_distance != c.final_fs_distance);
}

TEST_CASE("parallel and serial ensembles produce identical results") {
    const int trials = 64;
    std::vector<double> serial(trials), parallel(trials);
    auto body = [](int i) {
        auto rng = make_engine(trial_seed(2024, std::uint64_t(i)));
        std::normal_distribution<double> nd;
        double acc = 0.0;
        for (int k = 0; k < 100; ++k) acc += nd(rng);
        return acc;
    };
    run_trials(trials, ExecPolicy::Serial, [&](int i) { serial[std::size_t(i)] = body(i); });
    run_trials(trials, ExecPolicy::Parallel, [&](int i) { parallel[std::size_t(i)] = body(i); });
    for (int i = 0; i < trials; ++i) CHECK(serial[std::size_t(i)] == parallel[std::size_t(i)]);
}

TEST_CASE("walk config validation") {
    CHECK_THROWS_AS(WalkConfig::make(0, 0.1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(WalkConfig::make(10, -0.1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(WalkConfig::make(10, 0.1, 0, 3), std::invalid_argument);
    CHECK_THROWS_AS(GUEEnsemble::make(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GUEEnsemble::make(8, -1.0), std::invalid_argument);
}
