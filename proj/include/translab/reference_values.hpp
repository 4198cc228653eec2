#pragma once

// Values published in the reference study this laboratory reproduces, kept
// separate from anything the model itself implies. Columns marked "flagged"
// below are the ones known to be irreproducible from the stated model: the
// validation suite reports our value under declared conventions next to the
// stored one and raises a machine-readable discrepancy flag instead of
// asserting agreement.

#include <cstddef>

namespace translab::reference {

inline constexpr const char* kReferenceVersion = "reference-tables/2025.1";

// Working-memory sweep under maximum transparency (information pinned at 4).
inline constexpr std::size_t kWmCount = 5;
inline constexpr double kWmItems[kWmCount] = {2.0, 3.0, 4.0, 5.0, 6.0};
// boundary column: exact contract, B = b0 - beta_wm * wm
inline constexpr double kWmBoundary[kWmCount] = {0.70, 0.60, 0.50, 0.40, 0.30};
// expected hitting times: published to 2-3 significant digits, ~1% rounding
inline constexpr double kWmMeanHit[kWmCount] = {1.29, 1.84, 2.49, 3.30, 4.33};
inline constexpr double kWmMeanHitTolRel = 0.02;
// P(tau < 10): inconsistent with the stated dynamics (flagged)
inline constexpr double kWmHitProb[kWmCount] = {0.99, 0.97, 0.89, 0.74, 0.54};
inline constexpr double kWmHitProbHorizon = 10.0;

// Constant-information sweep.
inline constexpr std::size_t kInfoCount = 6;
inline constexpr double kInfoLevels[kInfoCount] = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
// drift column: exact to three decimals
inline constexpr double kInfoDrift[kInfoCount] = {0.100, 0.040, -0.040,
                                                  -0.140, -0.260, -0.400};
inline constexpr double kInfoDriftTolAbs = 5e-4;
// mean autonomy at the horizon: convention not stated upstream (flagged)
inline constexpr double kInfoMeanA[kInfoCount] = {1.27, 1.09, 0.88,
                                                  0.67, 0.45, 0.28};
// decision quality: metric not stated upstream (flagged, except the exact
// zero at level 0)
inline constexpr double kInfoQuality[kInfoCount] = {0.0, 6.7, 8.4,
                                                    7.2, 4.8, 2.3};
// the quality column's shape is the contract: a peak at level 2.0 +/- 0.5
inline constexpr double kQualityPeakLevel = 2.0;
inline constexpr double kQualityPeakTolAbs = 0.5;

// Headline scalars.
inline constexpr double kCriticalThreshold = 1.531;
inline constexpr double kCriticalThresholdTolAbs = 0.001;
inline constexpr double kMeanHitAtFourAnalytic = 2.48;   // rounded upstream
inline constexpr double kMeanHitAtFourSim = 2.49;        // reported mean
inline constexpr double kMeanHitAtFourSimTolAbs = 0.10;  // mean SE band
inline constexpr double kSdHitAtFourSim = 1.12;          // reported path SD
inline constexpr double kWmSlope = 0.756;                // per WM item
inline constexpr double kWmSlopeTolAbs = 0.03;
inline constexpr double kSimSlopeTolRel = 0.07;          // sim vs analytic
inline constexpr double kMeanTrajTolRel = 0.02;          // moment-law match
inline constexpr double kHitTimeTolRel = 0.07;           // Euler vs analytic
inline constexpr double kQqR2Floor = 0.98;
inline constexpr double kDriftFitTolAbs = 0.01;

// Three-arm comparison as reported upstream. The exact triples are not
// reproducible (the control bound, initial information, and quality metric
// are unstated); the orderings and the two probability bands below are the
// binding contract.
inline constexpr double kArmOptimalFinalA = 0.99;
inline constexpr double kArmOptimalDiseng = 0.47;
inline constexpr double kArmOptimalQuality = 7.8;
inline constexpr double kArmMaxFinalA = 0.50;
inline constexpr double kArmMaxDiseng = 0.96;
inline constexpr double kArmMaxQuality = 6.4;
inline constexpr double kArmNoneFinalA = 1.97;
inline constexpr double kArmNoneDiseng = 0.10;
inline constexpr double kArmNoneQuality = 4.1;
inline constexpr double kMaxArmDisengFloor = 0.80;
inline constexpr double kNoneArmDisengCeil = 0.20;

// Value-surface headline cells; magnitudes depend on the unstated terminal
// payoff, so signs and orderings substitute for the numbers.
inline constexpr double kValueHighCell = 46.8;  // at (A=1.5, I=1.0, t=0)
inline constexpr double kValueLowCell = -11.2;  // at (A=0.5, I=5.0, t=0)

}  // namespace translab::reference
