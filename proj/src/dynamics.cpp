#include "statewalk/dynamics.hpp"

#include <cmath>

namespace statewalk {

StateVector velocity_state(const StateVector& phi, const HamiltonianSpec& h) {
    StateVector v = apply_hamiltonian(phi, h);
    v.amp *= -kI / h.hbar;
    return v;
}

VelocityDecomposition decompose_velocity(const PacketParams& params, const HamiltonianSpec& h,
                                         const GridSpec& grid) {
    if (std::holds_alternative<TabulatedPotential>(h.potential))
        throw std::invalid_argument("decomposition requires a free, linear or harmonic potential");

    const StateVector phi = make_packet(params, grid);
    const TangentFrame frame = tangent_frame(params, grid);
    const StateVector v = velocity_state(phi, h);

    VelocityDecomposition out;
    const int dim = grid.dim;
    out.classical_comp.resize(dim);
    out.acceleration_comp.resize(dim);
    double sumsq = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
        out.classical_comp[ax] = real_metric(v, frame.e_a[std::size_t(ax)]);
        out.acceleration_comp[ax] = real_metric(v, frame.e_p[std::size_t(ax)]);
        sumsq += out.classical_comp[ax] * out.classical_comp[ax];
        sumsq += out.acceleration_comp[ax] * out.acceleration_comp[ax];
    }
    out.spreading_comp = real_metric(v, frame.e_spread);
    out.phase_rate = real_metric(v, frame.e_phase);
    sumsq += out.spreading_comp * out.spreading_comp + out.phase_rate * out.phase_rate;

    out.total_speed_sq = v.amp.squaredNorm() * grid.cell_volume();
    out.residual_sq = out.total_speed_sq - sumsq;

    const double s = params.sigma;
    out.phase_rate_pred = energy_expectation(phi, h) / h.hbar;
    out.classical_pred = params.p.norm() / (2.0 * h.mass * s);
    const Eigen::VectorXd mw = -potential_gradient(h, params.a);
    out.acceleration_pred = mw.norm() * s / h.hbar;
    out.spreading_pred = std::sqrt(2.0 * dim) * h.hbar / (8.0 * s * s * h.mass);
    return out;
}

Eigen::VectorXd commutator_expectation(const StateVector& phi, ObservableTag tag,
                                       const HamiltonianSpec& h) {
    const int dim = phi.grid.dim;
    Eigen::VectorXd out(dim);
    for (int ax = 0; ax < dim; ++ax) {
        const StateVector aphi = (tag == ObservableTag::Position)
                                     ? apply_position(phi, ax)
                                     : apply_momentum(phi, h.hbar, ax);
        const StateVector h_aphi = apply_hamiltonian(aphi, h);
        const StateVector hphi = apply_hamiltonian(phi, h);
        const StateVector a_hphi = (tag == ObservableTag::Position)
                                       ? apply_position(hphi, ax)
                                       : apply_momentum(hphi, h.hbar, ax);
        StateVector comm{a_hphi.amp - h_aphi.amp, phi.grid, 0};
        out[ax] = (inner_product(phi, comm) / (kI * h.hbar)).real();
    }
    return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ehrenfest_projections(const PacketParams& params,
                                                                  const HamiltonianSpec& h,
                                                                  const GridSpec& grid) {
    const StateVector phi = make_packet(params, grid);
    const StateVector v = velocity_state(phi, h);
    const Eigen::VectorXd xbar = position_expectation(phi);
    const Eigen::VectorXd pbar = momentum_expectation(phi, h.hbar);

    Eigen::VectorXd da(grid.dim), dp(grid.dim);
    for (int ax = 0; ax < grid.dim; ++ax) {
        StateVector xq = apply_position(phi, ax);
        xq.amp -= xbar[ax] * phi.amp;
        StateVector pq = apply_momentum(phi, h.hbar, ax);
        pq.amp -= pbar[ax] * phi.amp;
        da[ax] = 2.0 * real_metric(v, xq);
        dp[ax] = 2.0 * real_metric(v, pq);
    }
    return {da, dp};
}

std::vector<ClassicalState> newtonian_trajectory(const ClassicalState& c0,
                                                 const HamiltonianSpec& h, double dt,
                                                 int n_steps) {
    if (std::holds_alternative<TabulatedPotential>(h.potential))
        throw std::invalid_argument("trajectory requires a free, linear or harmonic potential");

    std::vector<ClassicalState> traj;
    traj.reserve(std::size_t(n_steps) + 1);
    ClassicalState c = c0;
    traj.push_back(c);
    Eigen::VectorXd force = -potential_gradient(h, c.a);
    for (int k = 0; k < n_steps; ++k) {
        c.p += 0.5 * dt * force;
        c.a += dt * c.p / h.mass;
        force = -potential_gradient(h, c.a);
        c.p += 0.5 * dt * force;
        c.t += dt;
        traj.push_back(c);
    }
    return traj;
}

TrajectoryComparison quantum_classical_compare(const PacketParams& params,
                                               const HamiltonianSpec& h, const GridSpec& grid,
                                               double T, double dt, int sample_stride) {
    const int n_steps = int(std::lround(T / dt));
    if (n_steps < 1) throw std::invalid_argument("horizon shorter than one step");
    if (sample_stride < 1) throw std::invalid_argument("sample stride must be >= 1");

    StateVector phi = make_packet(params, grid);
    const SplitStepper stepper(grid, h, dt);
    const auto classical =
        newtonian_trajectory(ClassicalState{params.a, params.p, 0.0}, h, dt, n_steps);

    TrajectoryComparison cmp;
    cmp.grid_spacing = grid.spacing();
    for (int k = 0; k <= n_steps; ++k) {
        if (k % sample_stride == 0 || k == n_steps) {
            const Eigen::VectorXd qx = position_expectation(phi);
            const Eigen::VectorXd qp = momentum_expectation(phi, h.hbar);
            cmp.times.push_back(k * dt);
            cmp.quantum_x.push_back(qx);
            cmp.quantum_p.push_back(qp);
            cmp.classical_x.push_back(classical[std::size_t(k)].a);
            cmp.classical_p.push_back(classical[std::size_t(k)].p);
            cmp.max_position_deviation = std::max(
                cmp.max_position_deviation, (qx - classical[std::size_t(k)].a).norm());
            cmp.max_momentum_deviation = std::max(
                cmp.max_momentum_deviation, (qp - classical[std::size_t(k)].p).norm());
        }
        if (k < n_steps) stepper.step(phi);
    }
    return cmp;
}

} // namespace statewalk
