#include "statewalk/walk.hpp"

#include "statewalk/evolve.hpp"
#include "statewalk/rng.hpp"

#include <cmath>
#include <limits>

namespace statewalk {

WalkConfig WalkConfig::make(int n_steps, double dt, int n_trials, std::uint64_t master_seed,
                            RecordPolicy record, double hbar) {
    if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    return WalkConfig{n_steps, dt, n_trials, master_seed, record, hbar};
}

WalkRecord walk_unconstrained(const Eigen::VectorXcd& phi0, const GUEEnsemble& ens,
                              const WalkConfig& cfg, std::uint64_t trial_seed,
                              bool keep_final_state) {
    if (phi0.size() != ens.dim)
        throw std::invalid_argument("state dimension does not match ensemble");
    if (std::abs(phi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("initial state must be unit norm");

    auto rng = make_engine(trial_seed);
    WalkRecord rec;
    rec.trial_seed = trial_seed;
    if (cfg.record == RecordPolicy::Full) rec.fs_distances.reserve(std::size_t(cfg.n_steps));

    Eigen::VectorXcd phi = phi0;
    Eigen::MatrixXcd H;
    for (int k = 0; k < cfg.n_steps; ++k) {
        sample_gue_into(ens, rng, H);
        phi = evolve_dense(phi, H, cfg.dt, cfg.hbar);
        if (cfg.record == RecordPolicy::Full)
            rec.fs_distances.push_back(fubini_study_distance(phi0.dot(phi)));
    }
    rec.final_fs_distance = fubini_study_distance(phi0.dot(phi));
    rec.state_norm = phi.norm();
    if (keep_final_state) rec.final_state = std::move(phi);
    return rec;
}

Eigen::VectorXd step_tangent_components(const Eigen::VectorXcd& phi, const Eigen::MatrixXcd& H,
                                        double dt, double hbar,
                                        const std::vector<Eigen::VectorXcd>& directions) {
    if (H.rows() != phi.size() || H.cols() != phi.size())
        throw std::invalid_argument("dimension mismatch between state and Hamiltonian");
    const Eigen::VectorXcd step = Complex(0.0, -dt / hbar) * (H * phi);
    Eigen::VectorXd comps(Eigen::Index(directions.size()));
    for (std::size_t i = 0; i < directions.size(); ++i) {
        if (directions[i].size() != phi.size())
            throw std::invalid_argument("direction dimension mismatch");
        comps[Eigen::Index(i)] = directions[i].dot(step).real();
    }
    return comps;
}

std::vector<Eigen::VectorXcd> random_tangent_directions(const Eigen::VectorXcd& phi, int count,
                                                        std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Eigen::VectorXcd> dirs;
    dirs.reserve(std::size_t(count));
    const Eigen::Index n = phi.size();
    while (int(dirs.size()) < count) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = Complex(normal(rng), normal(rng));
        v -= phi * phi.dot(v); // complex projection removes phi and i*phi at once
        for (const auto& u : dirs) v -= u * u.dot(v);
        const double nv = v.norm();
        if (nv < 1e-8) continue; // essentially in the span already, draw again
        dirs.push_back(v / nv);
    }
    return dirs;
}

ConstrainedWalkResult walk_constrained(const PacketParams& params, const GridSpec& grid,
                                       const WalkConfig& cfg, double step_sigma,
                                       std::uint64_t trial_seed,
                                       const std::vector<int>& checkpoint_steps) {
    if (step_sigma < 0.0) throw std::invalid_argument("step sigma must be >= 0");

    const StateVector phi0 = make_packet(params, grid);
    auto rng = make_engine(trial_seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const int dim = grid.dim;
    ConstrainedWalkResult res;
    res.trial_seed = trial_seed;
    res.displacement = Eigen::VectorXd::Zero(dim);

    // Walk entirely in k-space: a translation by xi*dt is the diagonal phase
    // exp(-i k . xi dt), so only the per-step bookkeeping touches the state.
    Eigen::VectorXcd spect = phi0.amp;
    fft_grid(spect, grid, false);
    Eigen::VectorXcd spect0 = spect;

    auto fs_to_initial = [&](const Eigen::VectorXcd& st) {
        // Parseval: the forward transform scales the ell^2 product by N^d.
        const Complex ip = spect0.dot(st) * grid.cell_volume() / double(grid.size());
        return fubini_study_distance(ip);
    };

    std::size_t next_cp = 0;
    Eigen::VectorXd xi(dim);
    for (int k = 0; k < cfg.n_steps; ++k) {
        for (int d = 0; d < dim; ++d) xi[d] = step_sigma * normal(rng);
        const Eigen::VectorXd shift = xi * cfg.dt;
        res.displacement += shift;
        for (Eigen::Index j = 0; j < spect.size(); ++j) {
            const auto idx = grid.unravel(std::size_t(j));
            double kx = 0.0;
            for (int d = 0; d < dim; ++d) kx += grid.wavenumber(idx[d]) * shift[d];
            spect[j] *= std::exp(-kI * kx);
        }
        if (cfg.record == RecordPolicy::Full) res.fs_distances.push_back(fs_to_initial(spect));
        if (next_cp < checkpoint_steps.size() && checkpoint_steps[next_cp] == k + 1) {
            res.checkpoint_steps.push_back(k + 1);
            res.checkpoint_displacements.push_back(res.displacement);
            ++next_cp;
        }
    }
    res.final_fs_distance = fs_to_initial(spect);

    StateVector final_state{spect, grid, 0};
    fft_grid(final_state.amp, grid, true);

    PacketParams shifted = params;
    shifted.a += res.displacement;
    if (!packet_fits(shifted, grid)) {
        res.margin_violation = true;
        res.translation_residual = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    const StateVector analytic = translated_packet(params, grid, res.displacement);
    res.translation_residual =
        std::sqrt((final_state.amp - analytic.amp).squaredNorm() * grid.cell_volume());
    return res;
}

Eigen::MatrixXd project_gue_step_onto_classical(const PacketParams& params, const GridSpec& grid,
                                                const GUEEnsemble& ens, double dt, int n_samples,
                                                std::uint64_t seed) {
    if (std::size_t(ens.dim) != grid.size())
        throw std::invalid_argument("ensemble dimension must equal the number of grid sites");

    const TangentFrame frame = tangent_frame(params, grid);
    const StateVector phi = make_packet(params, grid);

    // ell^2 representatives: grid states carry the dx^d weight in their norm.
    const double w = std::sqrt(grid.cell_volume());
    const Eigen::VectorXcd phi_l2 = phi.amp * w;
    std::vector<Eigen::VectorXcd> dirs;
    for (const auto& e : frame.e_a) dirs.push_back(e.amp * w);

    auto rng = make_engine(seed);
    Eigen::MatrixXd samples(n_samples, grid.dim);
    Eigen::MatrixXcd H;
    for (int i = 0; i < n_samples; ++i) {
        sample_gue_into(ens, rng, H);
        samples.row(i) = step_tangent_components(phi_l2, H, dt, params.hbar, dirs).transpose();
    }
    return samples;
}

double calibrate_scale(double step_sigma, double packet_sigma, double hbar) {
    if (!(step_sigma > 0.0) || !(packet_sigma > 0.0))
        throw std::invalid_argument("scales must be positive");
    // Tangent component of a GUE step has sd = scale * dt / (hbar sqrt(2));
    // a classical step of sd step_sigma*dt subtends step_sigma*dt/(2 sigma).
    return hbar * step_sigma / (std::sqrt(2.0) * packet_sigma);
}

} // namespace statewalk
