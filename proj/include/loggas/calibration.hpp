#pragma once

// Calibrated constants standing in for the unstated universal constants.
//
// Every value below was produced by tools/calibrate.cpp (target
// loggas_calibrate); rerun it to reproduce. The tool prints, for each bound,
// the largest observed ratio lhs / (bound without constant) over its sweep;
// the constant is that maximum rounded up with a safety margin. Sweep used
// for the values below: seed 99, 60 screened beta = 2 windows at R = 32
// (N = 512, s = 1/8, eta = 0.05, M at the 95th percentile of m_scr).
// Observed maxima are given next to each constant.

namespace loggas::calibration {

/// |int g (dC - dx)| <= K * (discrepancy sum) over random (g, c). Observed 0.17.
inline constexpr double kFluctuation = 10.0;

/// Energy bound after screening: ErrScr = C |log eta| M s R. Observed 0:
/// screening never raised the energy in the sweep.
inline constexpr double kScreeningEnergy = 10.0;

/// |k_max - sR| <= C M^(1/2) s R^(1/2).
inline constexpr double kKmax = 1.0;  // observed 0.28
/// |z_k - zbar_k| <= C k / R^(1/2) for k far from the Old boundary.
inline constexpr double kFarPosition = 3.0;  // observed 1.91
/// |z_k - zbar_k| <= C M^(1/2) s R^(1/2) for k near the Old boundary.
inline constexpr double kNearPosition = 1.0;  // observed 0.22
/// |Discr_[-R, -R+k]| <= C k / R^(1/2) (far) and C M^(1/2) s R^(1/2) (near).
inline constexpr double kFarDiscrepancy = 4.0;  // observed 2.83
inline constexpr double kNearDiscrepancy = 1.0;  // observed 0.28
/// |m_i - 1| <= C R^(-1/2) on intervals not touching Old.
inline constexpr double kInteriorMass = 2.5;  // observed 1.72

/// Sum of squared gaps <= C (R + field energy).
inline constexpr double kGapL2 = 100.0;  // observed 0.29
/// Tile interaction bound constant; observed 4e-4 on screened jittered lattices.
inline constexpr double kInteraction = 10.0;

}  // namespace loggas::calibration
