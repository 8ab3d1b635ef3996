#pragma once

// Independent oracles shared by the test suites. Everything here recomputes
// expectations from first principles (quadrature, finite differences, RK4)
// without touching the implementation paths it checks.

#include "statewalk/grid.hpp"
#include "statewalk/hamiltonian.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using statewalk::Complex;

// Trapezoid quadrature of f over [-L/2, L/2) refined `refine`-fold relative
// to an N-point grid. Periodic integrand assumed (endpoint dropped).
inline Complex quad_1d(const std::function<Complex(double)>& f, double extent, int n_points,
                       int refine = 4) {
    const int n = n_points * refine;
    const double dx = extent / n;
    Complex acc = 0.0;
    for (int i = 0; i < n; ++i) acc += f(-0.5 * extent + i * dx);
    return acc * dx;
}

// Normalized 1D packet amplitude at x.
inline Complex packet_amp(double x, double a, double p, double sigma, double hbar) {
    const double c = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    return c * std::exp(-(x - a) * (x - a) / (4.0 * sigma * sigma)) *
           std::exp(Complex(0.0, p * x / hbar));
}

// Central finite-difference tangent of the packet family wrt one parameter.
// `bump` must return the packet state at parameter value t.
inline statewalk::StateVector fd_tangent(
    const std::function<statewalk::StateVector(double)>& bump, double h) {
    statewalk::StateVector plus = bump(h);
    const statewalk::StateVector minus = bump(-h);
    plus.amp = (plus.amp - minus.amp) / (2.0 * h);
    return plus;
}

struct Rk4State {
    double a;
    double p;
};

// Classical RK4 with force f(a); independent check of the symplectic stepper.
inline std::vector<Rk4State> rk4_trajectory(Rk4State s0, const std::function<double(double)>& force,
                                            double mass, double dt, int n_steps) {
    std::vector<Rk4State> out{s0};
    Rk4State s = s0;
    for (int k = 0; k < n_steps; ++k) {
        auto deriv = [&](const Rk4State& q) {
            return Rk4State{q.p / mass, force(q.a)};
        };
        const Rk4State k1 = deriv(s);
        const Rk4State k2 = deriv({s.a + 0.5 * dt * k1.a, s.p + 0.5 * dt * k1.p});
        const Rk4State k3 = deriv({s.a + 0.5 * dt * k2.a, s.p + 0.5 * dt * k2.p});
        const Rk4State k4 = deriv({s.a + dt * k3.a, s.p + dt * k3.p});
        s.a += dt / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
        s.p += dt / 6.0 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
        out.push_back(s);
    }
    return out;
}

} // namespace oracle
