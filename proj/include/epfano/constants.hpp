#pragma once

// Numerical tolerances and grid defaults shared by the library and the CLI.
// CLI flags override the grid-related entries.

namespace epfano::constants {

// EP solver
inline constexpr int kEpMaxIter = 100;
inline constexpr double kEpTol = 1e-10;           // residual, relative to max |coeff| of D
inline constexpr double kEpDedupRadius = 1e-6;    // in (E, f, g)
inline constexpr double kFdRelStep = 1e-7;        // f and g Jacobian columns
inline constexpr int kScanGrid = 20;
inline constexpr double kScanFMin = -1.0;
inline constexpr double kScanFMax = 1.0;
inline constexpr double kScanGMin = 0.0;
inline constexpr double kScanGMax = 0.5;

// Spectra
inline constexpr double kIllConditionedSeparation = 1e-6;  // times |m|
inline constexpr double kEpBranchSwitch = 1e-6;            // |lambda1 - lambda2| below which G uses the double pole
inline constexpr double kTrajectoryEpZone = 1e-3;          // branch distance triggering quadratic extrapolation
inline constexpr double kNilpotencyTol = 1e-8;             // |N^2| / |N|^2

// Scans
inline constexpr int kEnergyPoints = 2001;
inline constexpr double kEnergyMin = 2.5;
inline constexpr double kEnergyMax = 3.3;
inline constexpr int kTrajectoryPoints = 401;
inline constexpr double kTrajectoryFMin = -1.0;
inline constexpr double kTrajectoryFMax = 1.0;
inline constexpr double kTouchesZero = 1e-9;   // refined minimum / largest peak
inline constexpr double kPoleGuard = 1e-12;    // energy distance to a real pole

// Projection reduction
inline constexpr double kProjectionOffset = 0.5;  // default f_ref = f_EP + offset

// Time domain
inline constexpr double kStabilityGuard = 0.1;       // dt * |M|_inf
inline constexpr double kSettleEfoldings = 40.0;
inline constexpr double kStationaryThreshold = 1e-4; // verify-stationary exit threshold

}  // namespace epfano::constants
