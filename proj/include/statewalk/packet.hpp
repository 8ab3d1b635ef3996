#pragma once

#include "statewalk/hamiltonian.hpp"

#include <vector>

namespace statewalk {

// A Gaussian packet g_{a,sigma}(x) e^{i p.x / hbar}: one classical phase-space
// point (a, p) together with the packet width.
struct PacketParams {
    Eigen::VectorXd a;     // center position
    Eigen::VectorXd p;     // momentum
    double sigma = 1.0;    // width
    double mass = 1.0;
    double hbar = 1.0;

    static PacketParams make(Eigen::VectorXd a, Eigen::VectorXd p, double sigma, double mass,
                             double hbar);
    int dim() const { return int(a.size()); }
};

// Support must keep at least this many sigmas from the box faces.
inline constexpr double kPacketMarginSigmas = 6.0;

bool packet_fits(const PacketParams& params, const GridSpec& grid);

// Grid packet, renormalized so the grid norm is exactly 1.
StateVector make_packet(const PacketParams& params, const GridSpec& grid);

// The same packet rigidly translated by `d`: phi(x - d), carried-along phase
// included. Closed form, no transforms involved.
StateVector translated_packet(const PacketParams& params, const GridSpec& grid,
                              const Eigen::VectorXd& d);

// (g_a, g_b) = exp(-|a-b|^2 / (8 sigma^2))
double overlap_gaussian(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma);

// |<phi_{a,p}, phi_{b,q}>| = exp(-|a-b|^2/(8 s^2) - |p-q|^2 s^2/(2 hbar^2))
double overlap_packet_abs(const Eigen::VectorXd& a, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& b, const Eigen::VectorXd& q, double sigma,
                          double hbar);

// arccos|<phi,psi>| in [0, pi/2]; the overlap is clamped to [0,1] first.
double fubini_study_distance(const StateVector& phi, const StateVector& psi);
double fubini_study_distance(Complex overlap);

// |exp(-|a-b|^2/4s^2) - cos^2(theta_grid)| using grid packets.
double metric_identity_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma,
                                const GridSpec& grid, double mass = 1.0, double hbar = 1.0);

// Same with momenta: |exp(-|a-b|^2/4s^2 - |p-q|^2 s^2/hbar^2) - cos^2(theta)|.
double phase_space_metric_identity_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& p,
                                            const Eigen::VectorXd& b, const Eigen::VectorXd& q,
                                            double sigma, double hbar, const GridSpec& grid,
                                            double mass = 1.0);

// Orthonormal tangent directions at a packet state, oriented so that the
// projections of the Schroedinger flow reproduce the closed-form velocity
// components with positive sign:
//   e_a[alpha]   ~ (x_alpha - a_alpha) phi          (position directions)
//   e_p[alpha]   ~ i (x_alpha - a_alpha) phi        (momentum directions)
//   e_spread     ~ i (|x-a|^2 - d sigma^2) phi      (width direction)
//   e_phase      = -i phi                           (fiber direction)
struct TangentFrame {
    std::vector<StateVector> e_a;
    std::vector<StateVector> e_p;
    StateVector e_spread;
    StateVector e_phase;

    std::vector<const StateVector*> all() const;
};

TangentFrame tangent_frame(const PacketParams& params, const GridSpec& grid);

// Residuals of the shifted-operator identities at a packet state:
//   first:  || (x - xbar) phi - (x - a) phi ||
//   second: || (p - pbar) phi - i hbar/(2 sigma^2) (x - a) phi ||
// both per-axis, reduced to the max over axes.
std::pair<double, double> shifted_operator_identity_residuals(const PacketParams& params,
                                                              const GridSpec& grid);

} // namespace statewalk
