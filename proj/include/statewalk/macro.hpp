#pragma once

#include <string>
#include <vector>

namespace statewalk {

// SI quantities as distinct types so a temperature cannot be passed where a
// length is expected. Arithmetic stays on .value; construction is explicit.
template <class Tag>
struct Quantity {
    double value = 0.0;
    constexpr explicit Quantity(double v) : value(v) {}
    constexpr Quantity() = default;
};

using Meters = Quantity<struct MeterTag>;
using Seconds = Quantity<struct SecondTag>;
using Kelvin = Quantity<struct KelvinTag>;
using PascalSeconds = Quantity<struct ViscosityTag>;       // dynamic viscosity
using MetersSqPerSecond = Quantity<struct DiffusionTag>;   // diffusion coefficient
using Radians = Quantity<struct RadianTag>;
using JoulesPerKelvin = Quantity<struct BoltzmannTag>;

inline constexpr JoulesPerKelvin kBoltzmann{1.380649e-23};

struct MacroScenario {
    Meters radius;
    Kelvin temperature;
    PascalSeconds viscosity;
    Seconds observation_time;
    Meters resolution_sigma;  // packet width used for the state-space angle
    Meters wavelength;        // measurement resolution
    JoulesPerKelvin boltzmann = kBoltzmann;

    static MacroScenario make(Meters radius, Kelvin temperature, PascalSeconds viscosity,
                              Seconds observation_time, Meters resolution_sigma,
                              Meters wavelength);
};

// D = kB T / (6 pi eta r)
MetersSqPerSecond stokes_einstein(const MacroScenario& s);

// Per-axis rms displacement sqrt(2 D t).
Meters displacement_rms(MetersSqPerSecond d, Seconds t);

// Full displacement-vector rms sqrt(2 dims D t).
Meters displacement_rms_vector(MetersSqPerSecond d, Seconds t, int dims = 3);

// theta = arccos(exp(-delta^2 / 8 sigma^2)), from cos^2 theta = exp(-delta^2/4 sigma^2).
Radians fs_angle_of_displacement(Meters delta, Meters sigma);

// Small-displacement asymptote delta / (2 sigma).
Radians fs_angle_small(Meters delta, Meters sigma);

struct FreezingReport {
    MetersSqPerSecond diffusion_direct;   // Stokes-Einstein from the scenario
    MetersSqPerSecond diffusion_used;     // the one the chain ran with
    bool diffusion_overridden = false;
    Meters displacement_axis;             // sqrt(2 D t)
    Meters displacement_vector;           // sqrt(6 D t)
    Radians theta;                        // angle of the vector displacement
    Radians theta_axis;
    Radians theta_small_angle;
    Radians theta_min;                    // resolvability threshold
    bool frozen = false;
    std::string discrepancy_note;         // direct Stokes-Einstein vs override, when any
};

// Full chain D -> displacement -> angle. `diffusion_override` substitutes the
// Stokes-Einstein value (the direct value is still reported). `theta_min`
// defaults to the angle subtended by one resolution wavelength.
FreezingReport freezing_report(const MacroScenario& s,
                               const MetersSqPerSecond* diffusion_override = nullptr,
                               const Radians* theta_min = nullptr);

struct SweepRow {
    Meters radius;
    MetersSqPerSecond diffusion;
    Meters displacement;
    Radians theta;
    bool frozen = false;
};

// Log-spaced radius sweep of the chain; the quantum/classical boundary curve.
std::vector<SweepRow> freezing_sweep(const MacroScenario& base, Meters r_min, Meters r_max,
                                     int n_points);

} // namespace statewalk
