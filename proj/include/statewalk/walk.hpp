#pragma once

#include "statewalk/gue.hpp"
#include "statewalk/packet.hpp"

#include <cstdint>
#include <optional>

namespace statewalk {

enum class RecordPolicy { Summary, Full };

struct WalkConfig {
    int n_steps = 100;
    double dt = 0.01;
    int n_trials = 1;
    std::uint64_t master_seed = 0;
    RecordPolicy record = RecordPolicy::Summary;
    double hbar = 1.0;

    static WalkConfig make(int n_steps, double dt, int n_trials, std::uint64_t master_seed,
                           RecordPolicy record = RecordPolicy::Summary, double hbar = 1.0);
};

struct WalkRecord {
    std::uint64_t trial_seed = 0;
    double final_fs_distance = 0.0;           // to the initial state
    std::vector<double> fs_distances;         // per step, Full policy only
    std::optional<Eigen::VectorXcd> final_state;
    double state_norm = 0.0;
    bool margin_violation = false;
};

// One unconstrained trial: phi_{k+1} = exp(-i H_k dt / hbar) phi_k with fresh
// GUE draws H_k.
WalkRecord walk_unconstrained(const Eigen::VectorXcd& phi0, const GUEEnsemble& ens,
                              const WalkConfig& cfg, std::uint64_t trial_seed,
                              bool keep_final_state = false);

// Components of the step -(i/hbar) H phi dt along the given unit directions
// (real metric of the ell^2 space).
Eigen::VectorXd step_tangent_components(const Eigen::VectorXcd& phi, const Eigen::MatrixXcd& H,
                                        double dt, double hbar,
                                        const std::vector<Eigen::VectorXcd>& directions);

// Random orthonormal directions orthogonal (complex sense) to `phi`; these
// span fiber-orthogonal tangent directions of the projective sphere.
std::vector<Eigen::VectorXcd> random_tangent_directions(const Eigen::VectorXcd& phi, int count,
                                                        std::mt19937_64& rng);

struct ConstrainedWalkResult {
    std::uint64_t trial_seed = 0;
    Eigen::VectorXd displacement;                    // d = sum_k xi_k dt
    std::vector<Eigen::VectorXd> checkpoint_displacements;
    std::vector<int> checkpoint_steps;
    double final_fs_distance = 0.0;
    std::vector<double> fs_distances;                // Full policy only
    double translation_residual = 0.0;               // vs the closed-form translated packet
    bool margin_violation = false;
};

// One constrained trial: i.i.d. Gaussian translation generators, applied as
// spectral phase shifts; the final grid state is checked against the
// closed-form translated packet.
ConstrainedWalkResult walk_constrained(const PacketParams& params, const GridSpec& grid,
                                       const WalkConfig& cfg, double step_sigma,
                                       std::uint64_t trial_seed,
                                       const std::vector<int>& checkpoint_steps = {});

// Components of GUE steps (matrices acting in the grid basis) along the
// classical position directions of the packet frame. Returns one row per
// sample, one column per axis.
Eigen::MatrixXd project_gue_step_onto_classical(const PacketParams& params, const GridSpec& grid,
                                                const GUEEnsemble& ens, double dt, int n_samples,
                                                std::uint64_t seed);

// GUE scale whose tangent-step standard deviation along any fiber-orthogonal
// direction matches a classical Gaussian walk of step sigma `step_sigma`:
// the walk step s dt moves the packet state by s dt / (2 sigma) in the
// Fubini-Study metric.
double calibrate_scale(double step_sigma, double packet_sigma, double hbar);

} // namespace statewalk
