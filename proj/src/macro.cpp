#include "statewalk/macro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace statewalk {

MacroScenario MacroScenario::make(Meters radius, Kelvin temperature, PascalSeconds viscosity,
                                  Seconds observation_time, Meters resolution_sigma,
                                  Meters wavelength) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
    };
    positive(radius.value, "radius");
    positive(temperature.value, "temperature");
    positive(viscosity.value, "viscosity");
    positive(observation_time.value, "observation time");
    positive(resolution_sigma.value, "resolution sigma");
    positive(wavelength.value, "wavelength");
    return MacroScenario{radius, temperature, viscosity, observation_time, resolution_sigma,
                         wavelength};
}

MetersSqPerSecond stokes_einstein(const MacroScenario& s) {
    return MetersSqPerSecond{s.boltzmann.value * s.temperature.value /
                             (6.0 * std::numbers::pi * s.viscosity.value * s.radius.value)};
}

Meters displacement_rms(MetersSqPerSecond d, Seconds t) {
    if (d.value < 0.0 || t.value < 0.0)
        throw std::invalid_argument("diffusion and time must be non-negative");
    return Meters{std::sqrt(2.0 * d.value * t.value)};
}

Meters displacement_rms_vector(MetersSqPerSecond d, Seconds t, int dims) {
    if (dims < 1) throw std::invalid_argument("dims must be >= 1");
    return Meters{std::sqrt(2.0 * dims * d.value * t.value)};
}

Radians fs_angle_of_displacement(Meters delta, Meters sigma) {
    if (!(sigma.value > 0.0)) throw std::invalid_argument("sigma must be positive");
    const double x = delta.value * delta.value / (8.0 * sigma.value * sigma.value);
    // acos(exp(-x)) collapses to 0 in double precision once exp(-x) rounds to
    // 1; the series acos(exp(-x)) = sqrt(2x) (1 - x/6 + O(x^2)) takes over.
    if (x < 1e-6) return Radians{std::sqrt(2.0 * x) * (1.0 - x / 6.0)};
    return Radians{std::acos(std::clamp(std::exp(-x), 0.0, 1.0))};
}

Radians fs_angle_small(Meters delta, Meters sigma) {
    if (!(sigma.value > 0.0)) throw std::invalid_argument("sigma must be positive");
    return Radians{delta.value / (2.0 * sigma.value)};
}

FreezingReport freezing_report(const MacroScenario& s,
                               const MetersSqPerSecond* diffusion_override,
                               const Radians* theta_min) {
    FreezingReport rep;
    rep.diffusion_direct = stokes_einstein(s);
    rep.diffusion_used = diffusion_override ? *diffusion_override : rep.diffusion_direct;
    rep.diffusion_overridden = diffusion_override != nullptr;

    rep.displacement_axis = displacement_rms(rep.diffusion_used, s.observation_time);
    rep.displacement_vector = displacement_rms_vector(rep.diffusion_used, s.observation_time);
    rep.theta = fs_angle_of_displacement(rep.displacement_vector, s.resolution_sigma);
    rep.theta_axis = fs_angle_of_displacement(rep.displacement_axis, s.resolution_sigma);
    rep.theta_small_angle = fs_angle_small(rep.displacement_vector, s.resolution_sigma);
    rep.theta_min =
        theta_min ? *theta_min : fs_angle_of_displacement(s.wavelength, s.resolution_sigma);
    rep.frozen = rep.theta.value < rep.theta_min.value;

    if (rep.diffusion_overridden) {
        std::ostringstream note;
        note << "Direct Stokes-Einstein gives D = " << rep.diffusion_direct.value
             << " m^2/s for this scenario; the chain was run with the supplied D = "
             << rep.diffusion_used.value << " m^2/s ("
             << rep.diffusion_used.value / rep.diffusion_direct.value
             << "x the direct value). Both are reported.";
        rep.discrepancy_note = note.str();
    }
    return rep;
}

std::vector<SweepRow> freezing_sweep(const MacroScenario& base, Meters r_min, Meters r_max,
                                     int n_points) {
    if (n_points < 2) throw std::invalid_argument("sweep needs at least 2 points");
    if (!(r_min.value > 0.0) || !(r_max.value > r_min.value))
        throw std::invalid_argument("invalid radius range");

    std::vector<SweepRow> rows;
    const double log_lo = std::log(r_min.value);
    const double log_hi = std::log(r_max.value);
    for (int i = 0; i < n_points; ++i) {
        MacroScenario s = base;
        s.radius = Meters{std::exp(log_lo + (log_hi - log_lo) * i / (n_points - 1))};
        const FreezingReport rep = freezing_report(s);
        rows.push_back(SweepRow{s.radius, rep.diffusion_used, rep.displacement_vector, rep.theta,
                                rep.frozen});
    }
    return rows;
}

} // namespace statewalk
