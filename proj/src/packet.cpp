#include "statewalk/packet.hpp"

#include <cmath>
#include <numbers>

namespace statewalk {

PacketParams PacketParams::make(Eigen::VectorXd a, Eigen::VectorXd p, double sigma, double mass,
                                double hbar) {
    if (a.size() != p.size())
        throw std::invalid_argument("position and momentum dimensions differ");
    if (a.size() < 1 || a.size() > 3)
        throw std::invalid_argument("packet dimension must be 1, 2 or 3");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    if (!(hbar > 0.0)) throw std::invalid_argument("hbar must be positive");
    return PacketParams{std::move(a), std::move(p), sigma, mass, hbar};
}

bool packet_fits(const PacketParams& params, const GridSpec& grid) {
    if (params.dim() != grid.dim) return false;
    const double half = 0.5 * grid.extent;
    for (int d = 0; d < grid.dim; ++d) {
        if (std::abs(params.a[d]) + kPacketMarginSigmas * params.sigma > half) return false;
    }
    return true;
}

namespace {
void require_fits(const PacketParams& params, const GridSpec& grid) {
    if (params.dim() != grid.dim)
        throw std::invalid_argument("packet dimension does not match grid");
    if (!packet_fits(params, grid))
        throw std::invalid_argument("packet violates the boundary margin");
}
} // namespace

StateVector translated_packet(const PacketParams& params, const GridSpec& grid,
                              const Eigen::VectorXd& d) {
    require_fits(params, grid);
    const int dim = grid.dim;
    const double s2 = params.sigma * params.sigma;
    const double amp0 = std::pow(2.0 * std::numbers::pi * s2, -0.25 * dim);

    StateVector out = zero_state(grid);
    for (Eigen::Index j = 0; j < out.amp.size(); ++j) {
        const auto idx = grid.unravel(std::size_t(j));
        double q2 = 0.0;
        double phase = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
            const double u = grid.coord(idx[ax]) - d[ax]; // evaluate phi at x - d
            const double q = u - params.a[ax];
            q2 += q * q;
            phase += params.p[ax] * u;
        }
        out.amp[j] = amp0 * std::exp(-q2 / (4.0 * s2)) * std::exp(kI * (phase / params.hbar));
    }
    normalize(out);
    return out;
}

StateVector make_packet(const PacketParams& params, const GridSpec& grid) {
    return translated_packet(params, grid, Eigen::VectorXd::Zero(grid.dim));
}

double overlap_gaussian(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const double d2 = (a - b).squaredNorm();
    return std::exp(-d2 / (8.0 * sigma * sigma));
}

double overlap_packet_abs(const Eigen::VectorXd& a, const Eigen::VectorXd& p,
                          const Eigen::VectorXd& b, const Eigen::VectorXd& q, double sigma,
                          double hbar) {
    const double d2 = (a - b).squaredNorm();
    const double k2 = (p - q).squaredNorm();
    const double s2 = sigma * sigma;
    return std::exp(-d2 / (8.0 * s2) - k2 * s2 / (2.0 * hbar * hbar));
}

double fubini_study_distance(Complex overlap) {
    const double c = std::min(1.0, std::max(0.0, std::abs(overlap)));
    return std::acos(c);
}

double fubini_study_distance(const StateVector& phi, const StateVector& psi) {
    return fubini_study_distance(inner_product(phi, psi));
}

double metric_identity_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma,
                                const GridSpec& grid, double mass, double hbar) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(a.size());
    const StateVector ga = make_packet(PacketParams::make(a, zero, sigma, mass, hbar), grid);
    const StateVector gb = make_packet(PacketParams::make(b, zero, sigma, mass, hbar), grid);
    const double theta = fubini_study_distance(ga, gb);
    const double c = std::cos(theta);
    const double closed = std::exp(-(a - b).squaredNorm() / (4.0 * sigma * sigma));
    return std::abs(closed - c * c);
}

double phase_space_metric_identity_residual(const Eigen::VectorXd& a, const Eigen::VectorXd& p,
                                            const Eigen::VectorXd& b, const Eigen::VectorXd& q,
                                            double sigma, double hbar, const GridSpec& grid,
                                            double mass) {
    const StateVector phi = make_packet(PacketParams::make(a, p, sigma, mass, hbar), grid);
    const StateVector psi = make_packet(PacketParams::make(b, q, sigma, mass, hbar), grid);
    const double theta = fubini_study_distance(phi, psi);
    const double c = std::cos(theta);
    const double s2 = sigma * sigma;
    const double closed = std::exp(-(a - b).squaredNorm() / (4.0 * s2) -
                                   (p - q).squaredNorm() * s2 / (hbar * hbar));
    return std::abs(closed - c * c);
}

std::vector<const StateVector*> TangentFrame::all() const {
    std::vector<const StateVector*> v;
    for (const auto& e : e_a) v.push_back(&e);
    for (const auto& e : e_p) v.push_back(&e);
    v.push_back(&e_spread);
    v.push_back(&e_phase);
    return v;
}

namespace {
// Remove the real-metric components along phi and i*phi, i.e. project onto the
// tangent space of the projective sphere at phi.
void remove_fiber(StateVector& v, const StateVector& phi) {
    const StateVector iphi{kI * phi.amp, phi.grid, 0};
    v.amp -= real_metric(v, phi) * phi.amp;
    v.amp -= real_metric(v, iphi) * iphi.amp;
}

void normalize_direction(StateVector& v) {
    const double n = norm(v);
    if (!(n > 1e-12))
        throw std::domain_error("degenerate tangent direction");
    v.amp /= n;
}
} // namespace

TangentFrame tangent_frame(const PacketParams& params, const GridSpec& grid) {
    const StateVector phi = make_packet(params, grid);
    const int dim = grid.dim;
    const double s2 = params.sigma * params.sigma;

    TangentFrame frame;
    frame.e_phase = StateVector{-kI * phi.amp, grid, 0};

    // Parameter derivatives of the packet family, as multipliers of phi.
    for (int ax = 0; ax < dim; ++ax) {
        StateVector ea = zero_state(grid);
        StateVector ep = zero_state(grid);
        for (Eigen::Index j = 0; j < phi.amp.size(); ++j) {
            const auto idx = grid.unravel(std::size_t(j));
            const double q = grid.coord(idx[ax]) - params.a[ax];
            ea.amp[j] = q / (2.0 * s2) * phi.amp[j];
            ep.amp[j] = kI * (grid.coord(idx[ax]) / params.hbar) * phi.amp[j];
        }
        remove_fiber(ea, phi);
        remove_fiber(ep, phi);
        frame.e_a.push_back(std::move(ea));
        frame.e_p.push_back(std::move(ep));
    }

    StateVector es = zero_state(grid);
    for (Eigen::Index j = 0; j < phi.amp.size(); ++j) {
        const auto idx = grid.unravel(std::size_t(j));
        double q2 = 0.0;
        for (int ax = 0; ax < dim; ++ax) {
            const double q = grid.coord(idx[ax]) - params.a[ax];
            q2 += q * q;
        }
        const double dgds = -dim / (2.0 * params.sigma) + q2 / (2.0 * s2 * params.sigma);
        es.amp[j] = kI * dgds * phi.amp[j];
    }
    remove_fiber(es, phi);
    frame.e_spread = std::move(es);

    // Gram-Schmidt in the real metric; the analytic directions are already
    // orthogonal, this just scrubs grid-level cross terms.
    std::vector<StateVector*> order;
    for (auto& e : frame.e_a) order.push_back(&e);
    for (auto& e : frame.e_p) order.push_back(&e);
    order.push_back(&frame.e_spread);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t k = 0; k < i; ++k)
            order[i]->amp -= real_metric(*order[i], *order[k]) * order[k]->amp;
        normalize_direction(*order[i]);
    }
    normalize_direction(frame.e_phase);
    return frame;
}

std::pair<double, double> shifted_operator_identity_residuals(const PacketParams& params,
                                                              const GridSpec& grid) {
    const StateVector phi = make_packet(params, grid);
    const Eigen::VectorXd xbar = position_expectation(phi);
    const Eigen::VectorXd pbar = momentum_expectation(phi, params.hbar);
    const double s2 = params.sigma * params.sigma;

    double rx = 0.0;
    double rp = 0.0;
    for (int ax = 0; ax < grid.dim; ++ax) {
        const StateVector xphi = apply_position(phi, ax);
        const StateVector pphi = apply_momentum(phi, params.hbar, ax);
        StateVector lhs_x = zero_state(grid);
        StateVector lhs_p = zero_state(grid);
        for (Eigen::Index j = 0; j < phi.amp.size(); ++j) {
            const auto idx = grid.unravel(std::size_t(j));
            const double q = grid.coord(idx[ax]) - params.a[ax];
            lhs_x.amp[j] = xphi.amp[j] - xbar[ax] * phi.amp[j] - q * phi.amp[j];
            lhs_p.amp[j] = pphi.amp[j] - pbar[ax] * phi.amp[j] -
                           kI * (params.hbar / (2.0 * s2)) * q * phi.amp[j];
        }
        rx = std::max(rx, norm(lhs_x));
        rp = std::max(rp, norm(lhs_p));
    }
    return {rx, rp};
}

} // namespace statewalk
