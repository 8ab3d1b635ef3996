#pragma once

#include "statewalk/grid.hpp"

#include <variant>

namespace statewalk {

// V(x) = 0
struct FreePotential {};

// V(x) = -f.x  (constant force f)
struct LinearPotential {
    Eigen::VectorXd force;
};

// V(x) = (k/2) |x|^2
struct HarmonicPotential {
    double stiffness = 1.0;
};

// real samples on the grid sites
struct TabulatedPotential {
    Eigen::VectorXd values;
};

using Potential = std::variant<FreePotential, LinearPotential, HarmonicPotential, TabulatedPotential>;

struct HamiltonianSpec {
    double mass = 1.0;
    double hbar = 1.0;
    Potential potential = FreePotential{};

    static HamiltonianSpec make(double mass, double hbar, Potential potential);
};

// Potential values at every site of the grid.
Eigen::VectorXd potential_values(const HamiltonianSpec& h, const GridSpec& grid);

// Gradient of the potential at a point (Free/Linear/Harmonic only).
Eigen::VectorXd potential_gradient(const HamiltonianSpec& h, const Eigen::VectorXd& x);

// Position operator along `axis` (diagonal multiplication by the coordinate).
StateVector apply_position(const StateVector& s, int axis = 0);

// Momentum operator along `axis`, applied spectrally: multiply by hbar*k.
StateVector apply_momentum(const StateVector& s, double hbar, int axis = 0);

// Kinetic term -hbar^2/(2m) Laplacian, applied spectrally.
StateVector apply_kinetic(const StateVector& s, const HamiltonianSpec& h);

StateVector apply_hamiltonian(const StateVector& s, const HamiltonianSpec& h);

// <s, x_alpha s> per axis and <s, p_alpha s> per axis for a normalized state.
Eigen::VectorXd position_expectation(const StateVector& s);
Eigen::VectorXd momentum_expectation(const StateVector& s, double hbar);
double energy_expectation(const StateVector& s, const HamiltonianSpec& h);

} // namespace statewalk
