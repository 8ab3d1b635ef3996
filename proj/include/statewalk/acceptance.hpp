#pragma once

namespace statewalk::accept {

// Criterion 1: position-space metric identity on the 17-point lattice.
inline constexpr double kMetricResidualTol = 1e-6;
inline constexpr int kMetricLatticePoints = 17;
inline constexpr double kMetricMaxSeparationSigmas = 4.0;

// Criterion 2: phase-space metric identity on the 5x5 lattice.
inline constexpr double kPhaseSpaceResidualTol = 1e-6;
inline constexpr int kPhaseSpaceLatticePoints = 5;
inline constexpr double kPhaseSpaceMaxMomentum = 2.0; // |p-q| sigma / hbar

// Criterion 3: velocity decomposition.
inline constexpr double kDecompResidualRelTol = 1e-6;
inline constexpr double kDecompComponentRelTol = 1e-4;

// Criterion 4: commutator and Ehrenfest values vs Poisson brackets.
inline constexpr double kPoissonTol = 1e-6;

// Criterion 5: quantum vs classical trajectory, deviation below one cell.

// Criterion 6: constrained walk.
inline constexpr int kWalkTrials = 10000;
inline constexpr int kWalkSteps = 100;
inline constexpr double kWalkKsAlpha = 0.01;
inline constexpr double kWalkVarianceRelTol = 0.05;
inline constexpr double kWalkDiffusionRelTol = 0.05;
inline constexpr double kWalkTranslationResidualTol = 1e-8;

// Criterion 7: GUE-conditioned tangent steps.
inline constexpr int kProjGridPoints = 256;
inline constexpr int kProjSamples = 10000;
inline constexpr double kProjKsAlpha = 0.01;

// Criterion 8: isotropy and homogeneity.
inline constexpr int kIsoDenseDim = 128;
inline constexpr int kIsoSamples = 10000;
inline constexpr int kIsoDirections = 4;
inline constexpr double kIsoAlpha = 0.01;

// Criterion 9: Born statistics.
inline constexpr int kBornDenseDim = 64;
inline constexpr int kBornTrials = 100000;
inline constexpr double kBornPairSigmas = 3.0;
inline constexpr double kBornClosedFormTol = 1e-12;

// Criterion 10: macroscopic chain.
inline constexpr double kMacroDisplacementLo = 1e-13;
inline constexpr double kMacroDisplacementHi = 1e-12;
inline constexpr double kMacroThetaRef = 1e-7;
inline constexpr double kMacroThetaFactor = 3.0;

} // namespace statewalk::accept
