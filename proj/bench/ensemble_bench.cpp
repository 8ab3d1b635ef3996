// Wall-clock comparison of the serial reference ensemble loop against the
// OpenMP one, on the two hot kernels: dense GUE walk steps and constrained
// packet walks. Prints a small table; not part of the test suite.

#include "statewalk/ensemble.hpp"
#include "statewalk/rng.hpp"
#include "statewalk/walk.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

using namespace statewalk;

namespace {

double now() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double timed(F&& fn) {
    const double t0 = now();
    fn();
    return now() - t0;
}

double checksum(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial[s]", "openmp[s]", "speedup");

    {
        const int trials = 400, dim = 64, steps = 3;
        const GUEEnsemble ens = GUEEnsemble::make(dim, 1.0);
        const WalkConfig cfg = WalkConfig::make(steps, 0.005, trials, 1);
        Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(dim);
        phi0[0] = 1.0;

        std::vector<double> out_s(trials), out_p(trials);
        const double ts = timed([&] {
            run_trials(trials, ExecPolicy::Serial, [&](int i) {
                out_s[std::size_t(i)] =
                    walk_unconstrained(phi0, ens, cfg, trial_seed(9, i)).final_fs_distance;
            });
        });
        const double tp = timed([&] {
            run_trials(trials, ExecPolicy::Parallel, [&](int i) {
                out_p[std::size_t(i)] =
                    walk_unconstrained(phi0, ens, cfg, trial_seed(9, i)).final_fs_distance;
            });
        });
        std::printf("%-28s %10.3f %10.3f %8.2f\n", "dense gue walk (64, 3 steps)", ts, tp,
                    ts / tp);
        if (checksum(out_s) != checksum(out_p))
            std::printf("  WARNING: serial and parallel results differ\n");
    }

    {
        const int trials = 2000, steps = 100;
        const GridSpec grid = GridSpec::make(1, 512, 40.0);
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
        const PacketParams params = PacketParams::make(zero, zero, 1.0, 1.0, 1.0);
        const WalkConfig cfg = WalkConfig::make(steps, 0.1, trials, 1);

        std::vector<double> out_s(trials), out_p(trials);
        const double ts = timed([&] {
            run_trials(trials, ExecPolicy::Serial, [&](int i) {
                out_s[std::size_t(i)] =
                    walk_constrained(params, grid, cfg, 0.02, trial_seed(5, i)).displacement[0];
            });
        });
        const double tp = timed([&] {
            run_trials(trials, ExecPolicy::Parallel, [&](int i) {
                out_p[std::size_t(i)] =
                    walk_constrained(params, grid, cfg, 0.02, trial_seed(5, i)).displacement[0];
            });
        });
        std::printf("%-28s %10.3f %10.3f %8.2f\n", "constrained walk (512 pts)", ts, tp,
                    ts / tp);
        if (checksum(out_s) != checksum(out_p))
            std::printf("  WARNING: serial and parallel results differ\n");
    }
    return 0;
}
