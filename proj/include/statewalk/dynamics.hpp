#pragma once

#include "statewalk/evolve.hpp"
#include "statewalk/packet.hpp"

namespace statewalk {

// dphi/dt = -(i/hbar) h phi at the given state.
StateVector velocity_state(const StateVector& phi, const HamiltonianSpec& h);

// Projections of the Schroedinger velocity onto the packet tangent frame,
// next to their closed forms. Closed forms hold for potentials of degree <= 1;
// for a harmonic well the spreading term picks up an O(sigma^2) correction
// that is measured, not assumed away.
struct VelocityDecomposition {
    // measured projections
    double phase_rate = 0.0;                 // onto e_phase
    Eigen::VectorXd classical_comp;          // onto e_a, per axis
    Eigen::VectorXd acceleration_comp;       // onto e_p, per axis
    double spreading_comp = 0.0;             // onto e_spread

    // closed-form predictions
    double phase_rate_pred = 0.0;            // <h>/hbar
    double classical_pred = 0.0;             // |p| / (2 m sigma)
    double acceleration_pred = 0.0;          // m |w| sigma / hbar, m w = -grad V(a)
    double spreading_pred = 0.0;             // sqrt(2 d) hbar / (8 sigma^2 m)

    double total_speed_sq = 0.0;             // ||dphi/dt||^2
    double residual_sq = 0.0;                // total minus sum of squared projections
};

VelocityDecomposition decompose_velocity(const PacketParams& params, const HamiltonianSpec& h,
                                         const GridSpec& grid);

enum class ObservableTag { Position, Momentum };

// (phi, (1/i hbar)[A, h] phi) per axis, evaluated on the grid.
Eigen::VectorXd commutator_expectation(const StateVector& phi, ObservableTag tag,
                                       const HamiltonianSpec& h);

// 2 Re(dphi/dt, (A - <A>) phi) per axis for A = position and momentum; at a
// packet state these equal da/dt and dp/dt of the classical motion.
std::pair<Eigen::VectorXd, Eigen::VectorXd> ehrenfest_projections(const PacketParams& params,
                                                                  const HamiltonianSpec& h,
                                                                  const GridSpec& grid);

struct ClassicalState {
    Eigen::VectorXd a;
    Eigen::VectorXd p;
    double t = 0.0;
};

// Leapfrog (kick-drift-kick) integration of adot = p/m, pdot = -grad V.
std::vector<ClassicalState> newtonian_trajectory(const ClassicalState& c0,
                                                 const HamiltonianSpec& h, double dt,
                                                 int n_steps);

struct TrajectoryComparison {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> quantum_x;   // <x>(t)
    std::vector<Eigen::VectorXd> quantum_p;   // <p>(t)
    std::vector<Eigen::VectorXd> classical_x;
    std::vector<Eigen::VectorXd> classical_p;
    double max_position_deviation = 0.0;
    double max_momentum_deviation = 0.0;
    double grid_spacing = 0.0;
};

// Split-step quantum expectations against the leapfrog trajectory over [0, T].
TrajectoryComparison quantum_classical_compare(const PacketParams& params,
                                               const HamiltonianSpec& h, const GridSpec& grid,
                                               double T, double dt, int sample_stride = 1);

} // namespace statewalk
