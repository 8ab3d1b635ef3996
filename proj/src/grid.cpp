#include "statewalk/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>

namespace statewalk {

namespace {
constexpr std::size_t kMaxSites = std::size_t(1) << 24;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

GridSpec GridSpec::make(int dim, int points_per_axis, double extent) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid dim must be 1, 2 or 3");
    if (points_per_axis < 16 || !is_power_of_two(points_per_axis))
        throw std::invalid_argument("points_per_axis must be a power of two >= 16");
    if (!(extent > 0.0))
        throw std::invalid_argument("grid extent must be positive");
    GridSpec g{dim, points_per_axis, extent};
    if (g.size() > kMaxSites)
        throw std::invalid_argument("grid exceeds the configured memory budget");
    return g;
}

std::size_t GridSpec::size() const {
    std::size_t n = 1;
    for (int d = 0; d < dim; ++d) n *= std::size_t(points_per_axis);
    return n;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dim; ++d) v *= spacing();
    return v;
}

double GridSpec::wavenumber(int i) const {
    const int n = points_per_axis;
    const int folded = (i < n / 2) ? i : i - n;
    return 2.0 * std::numbers::pi * folded / extent;
}

std::array<int, 3> GridSpec::unravel(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    const std::size_t n = std::size_t(points_per_axis);
    for (int d = dim - 1; d >= 0; --d) {
        idx[d] = int(flat % n);
        flat /= n;
    }
    return idx;
}

StateVector zero_state(const GridSpec& grid) {
    return StateVector{Eigen::VectorXcd::Zero(Eigen::Index(grid.size())), grid, 0};
}

double norm(const StateVector& s) {
    return std::sqrt(s.amp.squaredNorm() * s.grid.cell_volume());
}

void normalize(StateVector& s) {
    const double n = norm(s);
    if (!(n > 0.0))
        throw std::domain_error("cannot normalize a zero state");
    s.amp /= n;
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    detail::require_same_grid(a, b);
    return a.amp.dot(b.amp) * a.grid.cell_volume();
}

double real_metric(const StateVector& a, const StateVector& b) {
    return inner_product(a, b).real();
}

void detail::require_same_grid(const StateVector& a, const StateVector& b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("states live on different grids");
}

namespace {
// One FFT plan per thread per size; Eigen::FFT instances are not shareable.
Eigen::FFT<double>& fft_engine() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

void fft_line(Eigen::VectorXcd& line, bool inverse) {
    Eigen::VectorXcd out(line.size());
    if (inverse)
        fft_engine().inv(out, line);
    else
        fft_engine().fwd(out, line);
    line.swap(out);
}
} // namespace

void fft_grid(Eigen::VectorXcd& amp, const GridSpec& grid, bool inverse) {
    const std::size_t total = grid.size();
    if (std::size_t(amp.size()) != total)
        throw std::invalid_argument("amplitude length does not match grid");
    const int n = grid.points_per_axis;

    if (grid.dim == 1) {
        fft_line(amp, inverse);
        return;
    }

    // Axis-by-axis passes; axis `ax` has stride prod of faster axes.
    Eigen::VectorXcd line(n);
    for (int ax = 0; ax < grid.dim; ++ax) {
        std::size_t stride = 1;
        for (int d = ax + 1; d < grid.dim; ++d) stride *= std::size_t(n);
        const std::size_t block = stride * std::size_t(n);
        for (std::size_t base = 0; base < total; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int i = 0; i < n; ++i)
                    line[i] = amp[Eigen::Index(base + off + std::size_t(i) * stride)];
                fft_line(line, inverse);
                for (int i = 0; i < n; ++i)
                    amp[Eigen::Index(base + off + std::size_t(i) * stride)] = line[i];
            }
        }
    }
}

double boundary_band_mass(const StateVector& s, int band_cells) {
    const int n = s.grid.points_per_axis;
    const double dv = s.grid.cell_volume();
    double mass = 0.0;
    for (Eigen::Index j = 0; j < s.amp.size(); ++j) {
        const auto idx = s.grid.unravel(std::size_t(j));
        bool near = false;
        for (int d = 0; d < s.grid.dim; ++d)
            near = near || idx[d] < band_cells || idx[d] >= n - band_cells;
        if (near) mass += std::norm(s.amp[j]) * dv;
    }
    return mass;
}

} // namespace statewalk
