#pragma once

// Screening: keep a configuration on Old = [-R', R'], R' = R(1 - s), and
// repopulate New = [-R, R] \ Old so that exactly 2R points remain, with the
// new points placed according to the boundary fluxes of the local field.

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/numeric.hpp"
#include "loggas/pointconf.hpp"

namespace loggas {

struct ScreeningParams {
  int R = 32;
  double s = 0.125;
  double eta = 0.05;
  double M = std::numeric_limits<double>::infinity();
  /// Upper bound imposed on e_scr. The condition e_scr <= 1 only becomes
  /// attainable for very large R, so by default it is reported, not enforced.
  double decay_threshold = std::numeric_limits<double>::infinity();

  double r_old() const { return R * (1.0 - s); }
  void validate() const;
};

struct Preconditions {
  double m_scr = 0.0;
  double e_scr = 0.0;
  bool clearance_ok = false;
  bool energy_ok = false;
  bool decay_ok = false;
  bool passed() const { return clearance_ok && energy_ok && decay_ok; }
};

/// Boundary energy on {-R', R'} x [-R, R], vertical decay functional and the
/// 2 eta clearance around +-R'.
Preconditions check_preconditions(const PointConfiguration& c, const ScreeningParams& p, double tol);

/// Only the clearance test; cheap, no quadrature.
bool clearance_ok(const PointConfiguration& c, const ScreeningParams& p);

struct EllChoice {
  double ell = 0.0;
  double line_energy = 0.0;
};

/// Minimiser of the energy on [-R, R] x {-l, l} over a 16-point grid of [s^2 R, 2 s^2 R].
EllChoice choose_ell(const PointConfiguration& c, const ScreeningParams& p, double tol);

enum class Side { Left, Right };

struct NewInterval {
  Window H;
  Side side;
  bool abuts_old = false;
  double m = 1.0;
};

struct MiResult {
  std::vector<NewInterval> intervals;  ///< left side from -R inward, then right side from R inward
  double U0 = 0.0;
  double flux_left = 0.0;   ///< outward flux of [-R', R'] x [-l, l] through x = -R'
  double flux_right = 0.0;  ///< same through x = R'
  double flux_horizontal = 0.0;
  std::size_t n_old = 0;
  double mass() const;
};

/// Splits New into equal intervals of length about l and solves for m_i so
/// that 2 pi (m_i - 1)|H_i| = F_i + 2 U0 |H_i|, F_i being the outward flux
/// through the adjacent side of Old (zero for intervals not touching Old).
/// With this sign the masses sum to 2R - |C cap Old|. Throws
/// DegenerateInterval when some |m_i - 1| >= 1/2.
MiResult compute_mi(const PointConfiguration& c, const ScreeningParams& p, double ell, double tol);

struct ClaimCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct ScreeningReport {
  Preconditions pre;
  double ell = 0.0;
  double line_energy = 0.0;
  MiResult mi;
  std::size_t k_max_left = 0;
  std::size_t k_max_right = 0;
  std::vector<ClaimCheck> claim_checks;

  bool claims_pass() const;
};

struct ScreenResult {
  PointConfiguration screened;
  ScreeningReport report;
  std::vector<double> centers;  ///< deterministic positions p_i of the new points
};

/// One draw of the screened configuration. Throws PreconditionViolated or
/// DegenerateInterval.
ScreenResult screen(const PointConfiguration& c, const ScreeningParams& p, Rng& rng, double tol);

/// Placement of n points on one side by quantiles of the piecewise constant
/// density m_i: the k-th point from the outer end sits where the cumulative
/// mass, rescaled to n, reaches k - 1/2. Returns distances from the outer end.
std::vector<double> quantile_offsets(const std::vector<double>& lengths, const std::vector<double>& m,
                                     std::size_t n);

/// Claim-style bounds on the new points of one side, mirrored for the right.
std::vector<ClaimCheck> position_claims(const PointConfiguration& screened, const ScreeningParams& p);

struct ScreeningEnergyCheck {
  double lhs = 0.0;  ///< energy of the screened local field on [-R, R] x R
  double rhs = 0.0;  ///< original energy on [-R, R]^2 plus C |log eta| M s R
  double err_term = 0.0;
};

ScreeningEnergyCheck screening_energy_check(const PointConfiguration& c,
                                            const PointConfiguration& screened,
                                            const ScreeningParams& p, double tol, double C);

nlohmann::json to_json(const ScreeningReport& r);

}  // namespace loggas
