#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace statewalk {

using Complex = std::complex<double>;
inline constexpr Complex kI{0.0, 1.0};

// Uniform periodic grid over [-L/2, L/2)^d, same number of points per axis.
struct GridSpec {
    int dim = 1;
    int points_per_axis = 512;
    double extent = 40.0; // box side L, centered at 0

    static GridSpec make(int dim, int points_per_axis, double extent);

    double spacing() const { return extent / points_per_axis; }
    std::size_t size() const;
    double cell_volume() const; // spacing^dim

    // site coordinate along one axis, index 0..N-1 maps to [-L/2, L/2)
    double coord(int i) const { return -0.5 * extent + i * spacing(); }
    // FFT wave number for index i (standard wrap-around ordering)
    double wavenumber(int i) const;

    // decompose a flat site index into per-axis indices (row-major, axis 0 slowest)
    std::array<int, 3> unravel(std::size_t flat) const;

    bool operator==(const GridSpec&) const = default;
};

enum StateFlags : std::uint32_t {
    kFlagBoundaryProximity = 1u << 0,
};

// Complex amplitudes on a grid. Normalized states satisfy
// sum |amp_i|^2 * dx^d = 1.
struct StateVector {
    Eigen::VectorXcd amp;
    GridSpec grid;
    std::uint32_t flags = 0;
};

StateVector zero_state(const GridSpec& grid);

double norm(const StateVector& s);
void normalize(StateVector& s);

// Conjugate-linear in the first argument.
Complex inner_product(const StateVector& a, const StateVector& b);

// Riemannian metric on the unit sphere of states: Re of the inner product.
double real_metric(const StateVector& a, const StateVector& b);

// In-place FFT over every axis of the grid. `inverse` applies the unitary
// inverse including the 1/N^d factor.
void fft_grid(Eigen::VectorXcd& amp, const GridSpec& grid, bool inverse);

// Probability mass within `band` cells of the box faces; cheap proxy used to
// flag states whose support is about to touch the periodic boundary.
double boundary_band_mass(const StateVector& s, int band_cells);

namespace detail {
void require_same_grid(const StateVector& a, const StateVector& b);
}

} // namespace statewalk
