#include "loggas/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "loggas/calibration.hpp"
#include "loggas/error.hpp"
#include "loggas/field.hpp"

namespace loggas {

void ScreeningParams::validate() const {
  if (R < 1) throw Error(ErrorCode::InvalidArgument, "R must be >= 1");
  if (!(s > 0.0 && s < 0.25)) throw Error(ErrorCode::InvalidArgument, "s must lie in (0, 1/4)");
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::InvalidArgument, "eta must lie in (0, 1/2)");
  if (!(M > 0.0)) throw Error(ErrorCode::InvalidArgument, "M must be positive");
  if (R * s < 2.0) throw Error(ErrorCode::InvalidArgument, "need R s >= 2");
}

namespace {

void require_carrier(const PointConfiguration& c, const ScreeningParams& p) {
  if (!(c.carrier() == Window::centered(p.R))) {
    throw Error(ErrorCode::CarrierMismatch, "configuration must be carried by [-R, R]");
  }
}

}  // namespace

bool clearance_ok(const PointConfiguration& c, const ScreeningParams& p) {
  const double rp = p.r_old();
  const double w = 2.0 * p.eta;
  return count_in(c, Window(-rp - w, -rp + w)) == 0 && count_in(c, Window(rp - w, rp + w)) == 0;
}

Preconditions check_preconditions(const PointConfiguration& c, const ScreeningParams& p, double tol) {
  p.validate();
  require_carrier(c, p);
  Preconditions out;
  out.clearance_ok = clearance_ok(c, p);
  const double R = p.R;
  const double rp = p.r_old();
  const auto f = FieldEvaluator::local(c, p.eta);
  out.m_scr = segment_energy(f, {{-rp, -R}, {-rp, R}}, tol) + segment_energy(f, {{rp, -R}, {rp, R}}, tol);
  const double h = 0.5 * p.s * p.s * R;
  const auto f0 = f.untruncated();
  const double tail = 2.0 * energy_region(f0, -R, R, h, std::numeric_limits<double>::infinity(), tol);
  out.e_scr = tail / (std::pow(p.s, 4) * R);
  out.energy_ok = out.m_scr <= p.M;
  out.decay_ok = out.e_scr <= p.decay_threshold;
  return out;
}

EllChoice choose_ell(const PointConfiguration& c, const ScreeningParams& p, double tol) {
  p.validate();
  require_carrier(c, p);
  const double R = p.R;
  const double base = p.s * p.s * R;
  const auto f = FieldEvaluator::local(c);
  EllChoice best{base, std::numeric_limits<double>::infinity()};
  for (int j = 0; j < 16; ++j) {
    const double ell = base * (1.0 + j / 15.0);
    // The two lines carry equal energy by reflection symmetry.
    const double e = 2.0 * segment_energy(f, {{-R, ell}, {R, ell}}, tol);
    if (e < best.line_energy) best = {ell, e};
  }
  return best;
}

double MiResult::mass() const {
  CompensatedSum s;
  for (const auto& h : intervals) s += h.m * h.H.length();
  return s.value();
}

MiResult compute_mi(const PointConfiguration& c, const ScreeningParams& p, double ell, double tol) {
  p.validate();
  require_carrier(c, p);
  const double R = p.R;
  const double rp = p.r_old();
  const double side = R - rp;
  if (!(ell > 0.0)) throw Error(ErrorCode::InvalidArgument, "ell must be positive");

  const auto fe = FieldEvaluator::local(c, p.eta);
  const auto f = fe.untruncated();
  const double atol = tol * std::max(1.0, R);
  MiResult out;
  out.n_old = count_in(c, Window(-rp, rp));
  out.flux_left = flux(fe, {{-rp, ell}, {-rp, -ell}}, atol);
  out.flux_right = flux(fe, {{rp, -ell}, {rp, ell}}, atol);
  out.flux_horizontal = flux(f, {{rp, ell}, {-rp, ell}}, atol) + flux(f, {{-rp, -ell}, {rp, -ell}}, atol);
  out.U0 = out.flux_horizontal / (2.0 * 2.0 * side);

  const int n = std::max(1, static_cast<int>(std::lround(side / ell)));
  const double len = side / n;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int s = 0; s < 2; ++s) {
    const Side sd = s == 0 ? Side::Left : Side::Right;
    for (int i = 0; i < n; ++i) {
      // i counts from the outer end inward.
      const double outer = R - i * len;
      const double inner = i + 1 == n ? rp : R - (i + 1) * len;
      NewInterval h{sd == Side::Left ? Window(-outer, -inner) : Window(inner, outer), sd, i + 1 == n, 1.0};
      const double F = h.abuts_old ? (sd == Side::Left ? out.flux_left : out.flux_right) : 0.0;
      h.m = 1.0 + (F / h.H.length() + 2.0 * out.U0) / two_pi;
      out.intervals.push_back(h);
    }
  }
  for (const auto& h : out.intervals) {
    if (std::abs(h.m - 1.0) >= 0.5) {
      throw Error(ErrorCode::DegenerateInterval,
                  "m_i = " + std::to_string(h.m) + " on [" + std::to_string(h.H.lo()) + ", " +
                      std::to_string(h.H.hi()) + "]");
    }
  }
  return out;
}

std::vector<double> quantile_offsets(const std::vector<double>& lengths, const std::vector<double>& m,
                                     std::size_t n) {
  if (lengths.size() != m.size()) throw Error(ErrorCode::SizeMismatch, "lengths and masses differ");
  CompensatedSum tot;
  for (std::size_t i = 0; i < m.size(); ++i) tot += lengths[i] * m[i];
  const double total = tot.value();
  std::vector<double> out;
  if (n == 0) return out;
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateInterval, "zero mass on a screening side");
  const double scale = static_cast<double>(n) / total;
  std::size_t i = 0;
  double start = 0.0;  // offset of interval i
  double below = 0.0;  // scaled mass before interval i
  for (std::size_t k = 1; k <= n; ++k) {
    const double target = static_cast<double>(k) - 0.5;
    while (i + 1 < m.size() && below + scale * m[i] * lengths[i] < target) {
      below += scale * m[i] * lengths[i];
      start += lengths[i];
      ++i;
    }
    out.push_back(start + (target - below) / (scale * m[i]));
  }
  return out;
}

std::vector<ClaimCheck> position_claims(const PointConfiguration& screened, const ScreeningParams& p) {
  const double R = p.R;
  const double rp = p.r_old();
  const double sR = p.s * R;
  const double s2R = p.s * p.s * R;
  const double near_scale = std::sqrt(p.M) * p.s * std::sqrt(R);
  const double sqrtR = std::sqrt(R);
  std::vector<ClaimCheck> out;
  for (int side = 0; side < 2; ++side) {
    const std::string tag = side == 0 ? "left" : "right";
    // Mirror the right side onto the left so both use -R + k - 1/2.
    std::vector<double> pts;
    for (double x : screened.values()) pts.push_back(side == 0 ? x : -x);
    std::sort(pts.begin(), pts.end());
    const PointConfiguration mirrored(pts, Window::centered(R));
    const std::size_t kmax = count_in(mirrored, Window(-R, -rp));
    out.push_back({"kmax_" + tag, std::abs(static_cast<double>(kmax) - sR),
                   calibration::kKmax * near_scale, false});
    double far_pos = 0.0, far_pos_rhs = 1.0, near_pos = 0.0;
    double far_disc = 0.0, far_disc_rhs = 1.0, near_disc = 0.0;
    bool any_far = false;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double kd = static_cast<double>(k);
      const double dev = std::abs(pts[k - 1] - (-R + kd - 0.5));
      const double disc = std::abs(discrepancy(mirrored, Window(-R, -R + kd)));
      if (std::abs(sR - kd) >= s2R) {
        // Normalise by k so the worst k is the one recorded.
        const double bound = kd / sqrtR;
        if (!any_far || dev / bound > far_pos / far_pos_rhs) {
          far_pos = dev;
          far_pos_rhs = bound;
        }
        if (!any_far || disc / bound > far_disc / far_disc_rhs) {
          far_disc = disc;
          far_disc_rhs = bound;
        }
        any_far = true;
      } else {
        near_pos = std::max(near_pos, dev);
        near_disc = std::max(near_disc, disc);
      }
    }
    out.push_back({"far_position_" + tag, far_pos, calibration::kFarPosition * far_pos_rhs, false});
    out.push_back({"far_discrepancy_" + tag, far_disc, calibration::kFarDiscrepancy * far_disc_rhs, false});
    out.push_back({"near_position_" + tag, near_pos, calibration::kNearPosition * near_scale, false});
    out.push_back({"near_discrepancy_" + tag, near_disc, calibration::kNearDiscrepancy * near_scale, false});
  }
  for (auto& c : out) c.pass = c.lhs <= c.rhs;
  return out;
}

bool ScreeningReport::claims_pass() const {
  return std::all_of(claim_checks.begin(), claim_checks.end(), [](const ClaimCheck& c) { return c.pass; });
}

ScreenResult screen(const PointConfiguration& c, const ScreeningParams& p, Rng& rng, double tol) {
  p.validate();
  require_carrier(c, p);
  ScreeningReport rep;
  rep.pre = check_preconditions(c, p, tol);
  if (!rep.pre.passed()) {
    std::string why;
    if (!rep.pre.clearance_ok) why += " clearance";
    if (!rep.pre.energy_ok) why += " boundary-energy(" + std::to_string(rep.pre.m_scr) + ")";
    if (!rep.pre.decay_ok) why += " vertical-decay(" + std::to_string(rep.pre.e_scr) + ")";
    throw Error(ErrorCode::PreconditionViolated, "screening preconditions fail:" + why);
  }
  const EllChoice ell = choose_ell(c, p, tol);
  rep.ell = ell.ell;
  rep.line_energy = ell.line_energy;
  rep.mi = compute_mi(c, p, ell.ell, tol);

  const double R = p.R;
  const double rp = p.r_old();
  const long total = 2L * p.R - static_cast<long>(rep.mi.n_old);
  if (total < 0) throw Error(ErrorCode::DegenerateInterval, "Old already holds more than 2R points");

  std::vector<double> len[2], mass[2];
  double side_mass[2] = {0.0, 0.0};
  for (const auto& h : rep.mi.intervals) {
    const int s = h.side == Side::Left ? 0 : 1;
    len[s].push_back(h.H.length());
    mass[s].push_back(h.m);
    side_mass[s] += h.m * h.H.length();
  }
  const long n_left = std::clamp(std::lround(side_mass[0]), 0L, total);
  const std::size_t counts[2] = {static_cast<std::size_t>(n_left), static_cast<std::size_t>(total - n_left)};

  ScreenResult res{c, {}, {}};
  std::vector<double> pts;
  const PointConfiguration old_part = restrict(c, Window(-rp, rp));
  for (double x : old_part.values()) pts.push_back(x);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  const double edge = 0.1 + p.eta / 4.0 + 1e-12;
  for (int s = 0; s < 2; ++s) {
    if (counts[s] > 0) {
      const double scaled = static_cast<double>(counts[s]) / side_mass[s];
      for (double m : mass[s]) {
        if (std::abs(m * scaled - 1.0) >= 0.5) {
          throw Error(ErrorCode::DegenerateInterval, "integer correction pushes m_i out of (1/2, 3/2)");
        }
      }
    }
    const auto off = quantile_offsets(len[s], mass[s], counts[s]);
    for (double o : off) {
      double x = std::clamp(-R + o, -R + edge, -rp);
      if (s == 1) x = -x;
      res.centers.push_back(x);
    }
  }
  for (double ctr : res.centers) pts.push_back(ctr + jitter(rng) * p.eta);
  res.screened = PointConfiguration(std::move(pts), Window::centered(R));
  if (res.screened.size() != static_cast<std::size_t>(2 * p.R)) {
    throw Error(ErrorCode::WrongCount, "screened configuration does not have 2R points");
  }
  rep.k_max_left = count_in(res.screened, Window(-R, -rp));
  rep.k_max_right = count_in(res.screened, Window(rp, R));
  rep.claim_checks = position_claims(res.screened, p);
  double interior = 0.0;
  for (const auto& h : rep.mi.intervals) {
    if (!h.abuts_old) interior = std::max(interior, std::abs(h.m - 1.0));
  }
  const double interior_rhs = calibration::kInteriorMass / std::sqrt(R);
  rep.claim_checks.push_back({"interior_mass", interior, interior_rhs, interior <= interior_rhs});
  res.report = std::move(rep);
  return res;
}

ScreeningEnergyCheck screening_energy_check(const PointConfiguration& c,
                                            const PointConfiguration& screened,
                                            const ScreeningParams& p, double tol, double C) {
  p.validate();
  require_carrier(c, p);
  require_carrier(screened, p);
  const double R = p.R;
  const double inf = std::numeric_limits<double>::infinity();
  ScreeningEnergyCheck out;
  out.lhs = energy_region(FieldEvaluator::local(screened, p.eta), -R, R, -inf, inf, tol);
  out.err_term = C * std::abs(std::log(p.eta)) * p.M * p.s * R;
  out.rhs = energy_region(FieldEvaluator::local(c, p.eta), -R, R, -R, R, tol) + out.err_term;
  return out;
}

nlohmann::json to_json(const ScreeningReport& r) {
  nlohmann::json mi = nlohmann::json::array();
  for (const auto& h : r.mi.intervals) {
    mi.push_back({{"H", {h.H.lo(), h.H.hi()}},
                  {"side", h.side == Side::Left ? "left" : "right"},
                  {"abuts_old", h.abuts_old},
                  {"m", h.m}});
  }
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& c : r.claim_checks) {
    claims.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
  }
  return {{"m_scr", r.pre.m_scr},
          {"e_scr", r.pre.e_scr},
          {"clearance_ok", r.pre.clearance_ok},
          {"ell", r.ell},
          {"line_energy", r.line_energy},
          {"U0", r.mi.U0},
          {"flux_left", r.mi.flux_left},
          {"flux_right", r.mi.flux_right},
          {"n_old", r.mi.n_old},
          {"mass", r.mi.mass()},
          {"m_i", mi},
          {"k_max_left", r.k_max_left},
          {"k_max_right", r.k_max_right},
          {"claim_checks", claims}};
}

}  // namespace loggas
