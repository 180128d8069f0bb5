#pragma once

// Estimators for process-level quantities: discrepancy variance, shift,
// gap-based gain, gap distribution distance, tile interactions and
// per-volume energies.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "loggas/pointconf.hpp"
#include "loggas/transport.hpp"

namespace loggas {

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

MeanEstimate mean_stderr(std::span<const double> v);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct VariancePoint {
  int R = 0;
  double value = 0.0;  ///< Var(Discr over [-R, R]) / 2R
  double stderr_ = 0.0;
  std::size_t draws = 0;
};

/// Variance per volume of the discrepancy of [-R, R] across windows, each
/// window carried by [-Rmax, Rmax] with Rmax >= every R.
std::vector<VariancePoint> discrepancy_variance_curve(std::span<const PointConfiguration> windows,
                                                      std::span<const int> Rs);

/// Same, drawing windows on demand: sampler(draw_index) returns one window.
std::vector<VariancePoint> discrepancy_variance_curve(
    const std::function<PointConfiguration(std::size_t)>& sampler, std::span<const int> Rs,
    std::size_t draws, unsigned threads = 1);

/// Smallest one-sided z-score of v_k - v_{k+1} along the curve.
double min_decrease_z(std::span<const VariancePoint> curve);

/// S such that C has R + S points in [-R, 0), so x_0 is the (R + S)-th point
/// counted from the left starting at index 0. Needs exactly 2R points.
int shift_S(const PointConfiguration& c);

struct GainTerm {
  double value = 0.0;
  int S = 0;  ///< S(c1) - S(c0)
};

/// Sum over |i| <= R/2 of (Gamma_i(c0) - Gamma_{i-S}(c1))^2 / (Gamma_i(c0)^2 + Gamma_{i-S}(c1)^2),
/// S = S(c1) - S(c0), so that both gaps carry the same left label.
GainTerm gain_R(const PointConfiguration& c0, const PointConfiguration& c1);

struct GainEstimate {
  int R = 0;
  double value = 0.0;  ///< mean of gain_R / R over pairs
  double stderr_ = 0.0;
  int shift_used = 0;  ///< largest |S| met
  std::vector<double> per_pair;
  double ci_low() const { return value - 1.96 * stderr_; }
  double ci_high() const { return value + 1.96 * stderr_; }
};

struct GainOptions {
  /// Test hook: negate every summand.
  bool flip_sign = false;
};

GainEstimate gain_estimator(std::span<const LabeledTuple> a, std::span<const LabeledTuple> b,
                            const Coupling& coupling, int R, const GainOptions& opt = {});

/// Gaps (Gamma_{-r}, ..., Gamma_r); throws InsufficientPoints if one is missing.
std::vector<double> gap_vector(const PointConfiguration& c, int r);

struct GapDistance {
  double value = 0.0;        ///< sup over the dictionary of the mean difference, all data
  double holdout = 0.0;      ///< difference for the function picked on the first half, on the second half
  double holdout_stderr = 0.0;
  std::size_t best = 0;      ///< index of the picked dictionary element
};

/// Dictionary lower bound on sup_H |E_0 H - E_1 H| over compactly supported
/// functions bounded by 1 and 1-Lipschitz for the l1 norm.
GapDistance gap_distribution_distance(std::span<const std::vector<double>> g0,
                                      std::span<const std::vector<double>> g1, int r);

struct GapL2 {
  double sum_gaps_sq = 0.0;
  double bound = 0.0;  ///< R + field energy
};

GapL2 gap_l2_diagnostic(const PointConfiguration& c, double field_energy);

struct TileInteraction {
  double interaction = 0.0;
  double bound = 0.0;
};

/// ca lives on [-R, R] - 2Ra and cb on [-R, R] - 2Rb with |a - b| >= 2.
TileInteraction pairwise_interaction_bound(const PointConfiguration& ca, int a,
                                           const PointConfiguration& cb, int b, int R);

/// Sum over unit cells k = 0..2R-1 of |Discr_[-R, -R+k]| + |Discr_[-R+k, -R+k+1]| + 1.
double discrepancy_profile_sum(const PointConfiguration& c, int R);

struct SandwichCheck {
  double worst_slack = 0.0;  ///< min over r of max(|D0|, |D1|) - |Dh|
  int worst_r = 0;
  bool holds() const { return worst_slack >= 0.0; }
};

/// Compares |Discr_[-R, r]| of the t-interpolate with the larger of the two
/// endpoint values for every integer r in [-R, R].
SandwichCheck discrepancy_sandwich(const LabeledTuple& x0, const LabeledTuple& x1, int R, double t = 0.5);

struct FreeEnergyReport {
  double beta = 0.0;
  double per_volume_wint = 0.0;
  double stderr_ = 0.0;
  std::optional<double> sre_estimate;
  std::optional<double> f_beta;
};

/// Mean of W^int / 2R over windows carried by [-R, R]; SRE is filled only
/// when known in closed form (0 for Poisson).
FreeEnergyReport free_energy_report(std::span<const PointConfiguration> windows, double beta,
                                    std::optional<double> sre);

}  // namespace loggas
