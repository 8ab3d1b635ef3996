#include "statewalk/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <lapacke.h>

#include <cmath>

namespace statewalk {

SplitStepper::SplitStepper(const GridSpec& grid, const HamiltonianSpec& h, double dt)
    : grid_(grid), dt_(dt) {
    if (!(dt != 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("time step must be finite and nonzero");

    const Eigen::VectorXd v = potential_values(h, grid);
    const Eigen::Index n = Eigen::Index(grid.size());
    half_potential_phase_.resize(n);
    kinetic_phase_.resize(n);
    const double c = h.hbar / (2.0 * h.mass);
    for (Eigen::Index j = 0; j < n; ++j) {
        half_potential_phase_[j] = std::exp(-kI * (0.5 * v[j] * dt / h.hbar));
        const auto idx = grid.unravel(std::size_t(j));
        double k2 = 0.0;
        for (int d = 0; d < grid.dim; ++d) {
            const double k = grid.wavenumber(idx[d]);
            k2 += k * k;
        }
        kinetic_phase_[j] = std::exp(-kI * (c * k2 * dt));
    }
}

void SplitStepper::step(StateVector& s) const {
    if (!(s.grid == grid_))
        throw std::invalid_argument("state grid does not match stepper grid");
    s.amp.array() *= half_potential_phase_.array();
    fft_grid(s.amp, grid_, false);
    s.amp.array() *= kinetic_phase_.array();
    fft_grid(s.amp, grid_, true);
    s.amp.array() *= half_potential_phase_.array();
}

void SplitStepper::step(StateVector& s, int n_steps) const {
    for (int k = 0; k < n_steps; ++k) step(s);
}

StateVector evolve_unitary(const StateVector& s, const HamiltonianSpec& h, double dt,
                           int n_steps) {
    SplitStepper stepper(s.grid, h, dt);
    StateVector out = s;
    stepper.step(out, n_steps);
    return out;
}

double hermiticity_defect(const Eigen::MatrixXcd& H) {
    const double scale = H.cwiseAbs().maxCoeff();
    const double defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
    return scale > 0.0 ? defect / scale : defect;
}

Eigen::VectorXcd evolve_dense(const Eigen::VectorXcd& phi, const Eigen::MatrixXcd& H, double dt,
                              double hbar) {
    if (H.rows() != H.cols() || H.rows() != phi.size())
        throw std::invalid_argument("dimension mismatch in dense evolution");
    if (hermiticity_defect(H) > 1e-12)
        throw std::invalid_argument("dense Hamiltonian is not Hermitian");

    // zheevd (divide and conquer); the input buffer is overwritten with the
    // eigenvector matrix.
    const int n = int(H.rows());
    Eigen::MatrixXcd vec = H;
    Eigen::VectorXd lam(n);
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                    reinterpret_cast<lapack_complex_double*>(vec.data()), n,
                                    lam.data());
    if (info != 0) throw std::runtime_error("eigendecomposition failed");

    Eigen::VectorXcd phases(n);
    for (int j = 0; j < n; ++j) phases[j] = std::exp(-kI * (lam[j] * dt / hbar));

    Eigen::VectorXcd coeff = vec.adjoint() * phi;
    coeff.array() *= phases.array();
    return vec * coeff;
}

Eigen::MatrixXcd dense_grid_hamiltonian(const GridSpec& grid, const HamiltonianSpec& h) {
    const Eigen::Index n = Eigen::Index(grid.size());
    Eigen::MatrixXcd H(n, n);
    StateVector basis = zero_state(grid);
    for (Eigen::Index col = 0; col < n; ++col) {
        basis.amp.setZero();
        basis.amp[col] = 1.0;
        H.col(col) = apply_hamiltonian(basis, h).amp;
    }
    // symmetrize away FFT roundoff so the result passes the Hermiticity gate
    H = 0.5 * (H + H.adjoint()).eval();
    return H;
}

} // namespace statewalk
