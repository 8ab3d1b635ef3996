#pragma once

#include "statewalk/hamiltonian.hpp"

namespace statewalk {

// Strang-split propagator exp(-i h dt / hbar) on the grid: half potential
// kick, full kinetic step in k-space, half potential kick. Phases are cached,
// so repeated steps cost two FFTs plus pointwise products.
class SplitStepper {
public:
    SplitStepper(const GridSpec& grid, const HamiltonianSpec& h, double dt);

    void step(StateVector& s) const;
    void step(StateVector& s, int n_steps) const;

    double dt() const { return dt_; }

private:
    GridSpec grid_;
    double dt_;
    Eigen::VectorXcd half_potential_phase_;
    Eigen::VectorXcd kinetic_phase_;
};

// One-shot convenience wrapper around SplitStepper.
StateVector evolve_unitary(const StateVector& s, const HamiltonianSpec& h, double dt,
                           int n_steps = 1);

// exp(-i H dt / hbar) phi by full eigendecomposition. H must be Hermitian
// within 1e-12 relative to its largest entry.
Eigen::VectorXcd evolve_dense(const Eigen::VectorXcd& phi, const Eigen::MatrixXcd& H, double dt,
                              double hbar);

// Max elementwise |H - H^dagger| relative to max |H_ij|.
double hermiticity_defect(const Eigen::MatrixXcd& H);

// Dense matrix of the grid Hamiltonian (kinetic assembled spectrally column by
// column). Reference operator for split-step convergence checks; O(N^2 log N).
Eigen::MatrixXcd dense_grid_hamiltonian(const GridSpec& grid, const HamiltonianSpec& h);

} // namespace statewalk
