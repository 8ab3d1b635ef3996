#include "statewalk/hamiltonian.hpp"

#include <cmath>

namespace statewalk {

namespace {
// Mass this close to the faces marks the state as boundary-compromised.
constexpr int kBoundaryBandCells = 2;
constexpr double kBoundaryMassTol = 1e-10;

void flag_if_near_boundary(StateVector& out, const StateVector& in) {
    out.flags = in.flags;
    if (boundary_band_mass(in, kBoundaryBandCells) > kBoundaryMassTol)
        out.flags |= kFlagBoundaryProximity;
}
} // namespace

HamiltonianSpec HamiltonianSpec::make(double mass, double hbar, Potential potential) {
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    if (const auto* tab = std::get_if<TabulatedPotential>(&potential)) {
        if (!tab->values.allFinite())
            throw std::invalid_argument("tabulated potential must be finite and real");
    }
    return HamiltonianSpec{mass, hbar, std::move(potential)};
}

Eigen::VectorXd potential_values(const HamiltonianSpec& h, const GridSpec& grid) {
    const Eigen::Index n = Eigen::Index(grid.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    std::visit(
        [&](const auto& pot) {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                // zero
            } else if constexpr (std::is_same_v<T, LinearPotential>) {
                if (pot.force.size() != grid.dim)
                    throw std::invalid_argument("force dimension does not match grid");
                for (Eigen::Index j = 0; j < n; ++j) {
                    const auto idx = grid.unravel(std::size_t(j));
                    double fx = 0.0;
                    for (int d = 0; d < grid.dim; ++d) fx += pot.force[d] * grid.coord(idx[d]);
                    v[j] = -fx;
                }
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    const auto idx = grid.unravel(std::size_t(j));
                    double r2 = 0.0;
                    for (int d = 0; d < grid.dim; ++d) {
                        const double x = grid.coord(idx[d]);
                        r2 += x * x;
                    }
                    v[j] = 0.5 * pot.stiffness * r2;
                }
            } else {
                if (pot.values.size() != n)
                    throw std::invalid_argument("tabulated potential length does not match grid");
                v = pot.values;
            }
        },
        h.potential);
    return v;
}

Eigen::VectorXd potential_gradient(const HamiltonianSpec& h, const Eigen::VectorXd& x) {
    return std::visit(
        [&](const auto& pot) -> Eigen::VectorXd {
            using T = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<T, FreePotential>) {
                return Eigen::VectorXd::Zero(x.size());
            } else if constexpr (std::is_same_v<T, LinearPotential>) {
                return -pot.force;
            } else if constexpr (std::is_same_v<T, HarmonicPotential>) {
                return pot.stiffness * x;
            } else {
                throw std::invalid_argument("gradient undefined for a tabulated potential");
            }
        },
        h.potential);
}

StateVector apply_position(const StateVector& s, int axis) {
    if (axis < 0 || axis >= s.grid.dim) throw std::invalid_argument("axis out of range");
    StateVector out = zero_state(s.grid);
    for (Eigen::Index j = 0; j < s.amp.size(); ++j) {
        const auto idx = s.grid.unravel(std::size_t(j));
        out.amp[j] = s.amp[j] * s.grid.coord(idx[axis]);
    }
    flag_if_near_boundary(out, s);
    return out;
}

StateVector apply_momentum(const StateVector& s, double hbar, int axis) {
    if (axis < 0 || axis >= s.grid.dim) throw std::invalid_argument("axis out of range");
    StateVector out = s;
    fft_grid(out.amp, s.grid, false);
    for (Eigen::Index j = 0; j < out.amp.size(); ++j) {
        const auto idx = s.grid.unravel(std::size_t(j));
        out.amp[j] *= hbar * s.grid.wavenumber(idx[axis]);
    }
    fft_grid(out.amp, s.grid, true);
    flag_if_near_boundary(out, s);
    return out;
}

StateVector apply_kinetic(const StateVector& s, const HamiltonianSpec& h) {
    StateVector out = s;
    fft_grid(out.amp, s.grid, false);
    const double c = h.hbar * h.hbar / (2.0 * h.mass);
    for (Eigen::Index j = 0; j < out.amp.size(); ++j) {
        const auto idx = s.grid.unravel(std::size_t(j));
        double k2 = 0.0;
        for (int d = 0; d < s.grid.dim; ++d) {
            const double k = s.grid.wavenumber(idx[d]);
            k2 += k * k;
        }
        out.amp[j] *= c * k2;
    }
    fft_grid(out.amp, s.grid, true);
    flag_if_near_boundary(out, s);
    return out;
}

StateVector apply_hamiltonian(const StateVector& s, const HamiltonianSpec& h) {
    StateVector out = apply_kinetic(s, h);
    const Eigen::VectorXd v = potential_values(h, s.grid);
    for (Eigen::Index j = 0; j < out.amp.size(); ++j) out.amp[j] += v[j] * s.amp[j];
    return out;
}

Eigen::VectorXd position_expectation(const StateVector& s) {
    Eigen::VectorXd r(s.grid.dim);
    for (int d = 0; d < s.grid.dim; ++d)
        r[d] = inner_product(s, apply_position(s, d)).real();
    return r;
}

Eigen::VectorXd momentum_expectation(const StateVector& s, double hbar) {
    Eigen::VectorXd r(s.grid.dim);
    for (int d = 0; d < s.grid.dim; ++d)
        r[d] = inner_product(s, apply_momentum(s, hbar, d)).real();
    return r;
}

double energy_expectation(const StateVector& s, const HamiltonianSpec& h) {
    return inner_product(s, apply_hamiltonian(s, h)).real();
}

} // namespace statewalk
