#include "loggas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loggas/calibration.hpp"
#include "loggas/energy.hpp"
#include "loggas/error.hpp"

namespace loggas {

MeanEstimate mean_stderr(std::span<const double> v) {
  MeanEstimate m;
  m.n = v.size();
  if (v.empty()) return m;
  CompensatedSum s;
  for (double x : v) s += x;
  m.mean = s.value() / static_cast<double>(v.size());
  if (v.size() > 1) {
    CompensatedSum q;
    for (double x : v) q += (x - m.mean) * (x - m.mean);
    m.stderr_ = std::sqrt(q.value() / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return m;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::SizeMismatch, "x and y differ in length");
  if (x.size() < 2) throw Error(ErrorCode::InsufficientPoints, "fit needs two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::InvalidArgument, "degenerate abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return f;
}

namespace {

VariancePoint variance_point(const std::vector<double>& d, int R) {
  const std::size_t n = d.size();
  const double nd = static_cast<double>(n);
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= nd;
  double m2 = 0.0, m4 = 0.0;
  for (double x : d) {
    const double c = (x - mean) * (x - mean);
    m2 += c;
    m4 += c * c;
  }
  const double var = m2 / (nd - 1.0);
  m4 /= nd;
  // Standard error of the sample variance from the fourth central moment.
  const double v_var = std::max(0.0, (m4 - (nd - 3.0) / (nd - 1.0) * var * var) / nd);
  const double vol = 2.0 * R;
  return {R, var / vol, std::sqrt(v_var) / vol, n};
}

}  // namespace

std::vector<VariancePoint> discrepancy_variance_curve(std::span<const PointConfiguration> windows,
                                                      std::span<const int> Rs) {
  if (windows.size() < 100) throw Error(ErrorCode::InvalidArgument, "need at least 100 draws");
  std::vector<VariancePoint> out;
  for (int R : Rs) {
    std::vector<double> d;
    d.reserve(windows.size());
    const Window w = Window::centered(R);
    for (const auto& c : windows) {
      if (c.carrier().lo() > -R || c.carrier().hi() < R) {
        throw Error(ErrorCode::CarrierMismatch, "window narrower than [-R, R]");
      }
      d.push_back(discrepancy(c, w));
    }
    out.push_back(variance_point(d, R));
  }
  return out;
}

std::vector<VariancePoint> discrepancy_variance_curve(
    const std::function<PointConfiguration(std::size_t)>& sampler, std::span<const int> Rs,
    std::size_t draws, unsigned threads) {
  std::vector<std::optional<PointConfiguration>> tmp(draws);
  parallel_for(draws, threads, [&](std::size_t i) { tmp[i] = sampler(i); });
  std::vector<PointConfiguration> windows;
  windows.reserve(draws);
  for (auto& t : tmp) windows.push_back(std::move(*t));
  return discrepancy_variance_curve(windows, Rs);
}

double min_decrease_z(std::span<const VariancePoint> curve) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < curve.size(); ++k) {
    const double diff = curve[k].value - curve[k + 1].value;
    const double se = std::hypot(curve[k].stderr_, curve[k + 1].stderr_);
    worst = std::min(worst, se > 0.0 ? diff / se : (diff > 0.0 ? worst : -worst));
  }
  return worst;
}

namespace {

int half_width_of(const PointConfiguration& c) {
  const Window& w = c.carrier();
  const double R = w.hi();
  if (w.lo() != -R || R != std::floor(R) || R < 1.0) {
    throw Error(ErrorCode::CarrierMismatch, "carrier must be [-R, R] with integer R");
  }
  return static_cast<int>(R);
}

}  // namespace

int shift_S(const PointConfiguration& c) {
  const int R = half_width_of(c);
  if (c.size() != static_cast<std::size_t>(2 * R)) {
    throw Error(ErrorCode::WrongCount, "need exactly 2R points");
  }
  if (c.empty() || c.values().back() < 0.0) throw Error(ErrorCode::NoPointRight, "no point >= 0");
  const auto& p = c.values();
  const auto neg = std::lower_bound(p.begin(), p.end(), 0.0) - p.begin();
  return static_cast<int>(neg) - R;
}

GainTerm gain_R(const PointConfiguration& c0, const PointConfiguration& c1) {
  const int R = half_width_of(c0);
  if (!(c1.carrier() == c0.carrier())) throw Error(ErrorCode::CarrierMismatch, "carriers differ");
  GainTerm g;
  g.S = shift_S(c1) - shift_S(c0);
  const GapView v0 = gaps(c0);
  const GapView v1 = gaps(c1);
  CompensatedSum s;
  const int h = R / 2;
  for (int i = -h; i <= h; ++i) {
    const double a = v0.origin_gap(i);
    const double b = v1.origin_gap(i - g.S);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      throw Error(ErrorCode::InsufficientPoints, "gap index " + std::to_string(i) + " out of range");
    }
    s += (a - b) * (a - b) / (a * a + b * b);
  }
  g.value = s.value();
  return g;
}

GainEstimate gain_estimator(std::span<const LabeledTuple> a, std::span<const LabeledTuple> b,
                            const Coupling& coupling, int R, const GainOptions& opt) {
  GainEstimate est;
  est.R = R;
  for (const auto& pr : coupling.pairs) {
    if (pr.from >= a.size() || pr.to >= b.size()) {
      throw Error(ErrorCode::IndexOutOfRange, "coupling refers to a missing sample");
    }
    const GainTerm g = gain_R(unlabel(a[pr.from], R), unlabel(b[pr.to], R));
    est.shift_used = std::max(est.shift_used, std::abs(g.S));
    est.per_pair.push_back((opt.flip_sign ? -g.value : g.value) / R);
  }
  const auto m = mean_stderr(est.per_pair);
  est.value = m.mean;
  est.stderr_ = m.stderr_;
  return est;
}

std::vector<double> gap_vector(const PointConfiguration& c, int r) {
  const GapView v = gaps(c);
  std::vector<double> out;
  for (int i = -r; i <= r; ++i) {
    const double g = v.origin_gap(i);
    if (!std::isfinite(g)) throw Error(ErrorCode::InsufficientPoints, "missing gap " + std::to_string(i));
    out.push_back(g);
  }
  return out;
}

namespace {

// Dictionary element: a coordinate tent max(0, h - |a_j - c| - sum_{i != j} (a_i - cap)_+)
// or, with j < 0, the l1 tent max(0, h - |a - c 1|_1). Both are bounded by
// h <= 1, 1-Lipschitz in l1 and compactly supported on the positive orthant.
struct Tent {
  int j;
  double c;
  double h;
  double operator()(const std::vector<double>& a) const {
    constexpr double cap = 5.0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (j < 0 || static_cast<int>(i) == j) {
        d += std::abs(a[i] - c);
      } else {
        d += std::max(0.0, a[i] - cap);
      }
    }
    return std::max(0.0, h - d);
  }
};

std::vector<Tent> dictionary(int r) {
  std::vector<Tent> out;
  const double heights[] = {0.25, 0.5, 1.0};
  for (int j = -1; j <= 2 * r; ++j) {
    for (int k = 0; k < 30; ++k) {
      for (double h : heights) out.push_back({j, 0.05 + 0.1 * k, h});
    }
  }
  return out;
}

double mean_of(const Tent& t, std::span<const std::vector<double>> g, std::size_t lo, std::size_t hi) {
  CompensatedSum s;
  for (std::size_t i = lo; i < hi; ++i) s += t(g[i]);
  return s.value() / static_cast<double>(hi - lo);
}

}  // namespace

GapDistance gap_distribution_distance(std::span<const std::vector<double>> g0,
                                      std::span<const std::vector<double>> g1, int r) {
  if (g0.size() < 2 || g1.size() < 2) throw Error(ErrorCode::InsufficientPoints, "need two samples each");
  for (auto set : {g0, g1}) {
    for (const auto& v : set) {
      if (v.size() != static_cast<std::size_t>(2 * r + 1)) {
        throw Error(ErrorCode::SizeMismatch, "gap vectors must have 2r + 1 entries");
      }
    }
  }
  const auto dict = dictionary(r);
  GapDistance out;
  const std::size_t h0 = g0.size() / 2;
  const std::size_t h1 = g1.size() / 2;
  double best_split = -1.0;
  double sign = 1.0;
  for (std::size_t k = 0; k < dict.size(); ++k) {
    out.value = std::max(out.value, std::abs(mean_of(dict[k], g0, 0, g0.size()) - mean_of(dict[k], g1, 0, g1.size())));
    const double d = mean_of(dict[k], g0, 0, h0) - mean_of(dict[k], g1, 0, h1);
    if (std::abs(d) > best_split) {
      best_split = std::abs(d);
      out.best = k;
      sign = d >= 0.0 ? 1.0 : -1.0;
    }
  }
  const Tent& t = dict[out.best];
  std::vector<double> v0, v1;
  for (std::size_t i = h0; i < g0.size(); ++i) v0.push_back(t(g0[i]));
  for (std::size_t i = h1; i < g1.size(); ++i) v1.push_back(t(g1[i]));
  const auto m0 = mean_stderr(v0);
  const auto m1 = mean_stderr(v1);
  out.holdout = sign * (m0.mean - m1.mean);
  out.holdout_stderr = std::hypot(m0.stderr_, m1.stderr_);
  return out;
}

GapL2 gap_l2_diagnostic(const PointConfiguration& c, double field_energy) {
  const int R = half_width_of(c);
  const auto need = static_cast<std::size_t>(std::ceil(R / 2.0));
  if (count_in(c, Window(0.0, R)) < need || count_in(c, Window(-R, 0.0)) < need) {
    throw Error(ErrorCode::InsufficientPoints, "need at least R/2 points on each side of 0");
  }
  const GapView v = gaps(c);
  CompensatedSum s;
  for (int i = -R / 2; i <= R / 2; ++i) {
    const double g = v.origin_gap(i);
    if (!std::isfinite(g)) throw Error(ErrorCode::InsufficientPoints, "missing gap " + std::to_string(i));
    s += g * g;
  }
  return {s.value(), R + field_energy};
}

double discrepancy_profile_sum(const PointConfiguration& c, int R) {
  CompensatedSum s;
  for (int k = 0; k < 2 * R; ++k) {
    const double left = k > 0 ? std::abs(discrepancy(c, Window(-R, -R + k))) : 0.0;
    s += left + std::abs(discrepancy(c, Window(-R + k, -R + k + 1))) + 1.0;
  }
  return s.value();
}

TileInteraction pairwise_interaction_bound(const PointConfiguration& ca, int a,
                                           const PointConfiguration& cb, int b, int R) {
  if (std::abs(a - b) < 2) throw Error(ErrorCode::TilesAdjacent, "tiles must be at distance >= 2");
  const Window ka(-R - 2.0 * R * a, R - 2.0 * R * a);
  const Window kb(-R - 2.0 * R * b, R - 2.0 * R * b);
  if (!(ca.carrier() == ka) || !(cb.carrier() == kb)) {
    throw Error(ErrorCode::CarrierMismatch, "configurations must be carried by their tiles");
  }
  if (ca.size() != static_cast<std::size_t>(2 * R) || cb.size() != static_cast<std::size_t>(2 * R)) {
    throw Error(ErrorCode::WrongCount, "each tile must carry 2R points");
  }
  // Work relative to the tile centres to keep the cancelling terms small.
  const double ca0 = ka.center();
  const double cb0 = kb.center();
  const double shift = ca0 - cb0;
  CompensatedSum s;
  for (double p : ca.values()) {
    for (double q : cb.values()) s -= std::log(std::abs(shift + (p - ca0) - (q - cb0)));
  }
  const Window kb_rel(kb.lo() - ca0, kb.hi() - ca0);
  const Window ka_rel(ka.lo() - cb0, ka.hi() - cb0);
  for (double p : ca.values()) s += log_integral(p - ca0, kb_rel.lo(), kb_rel.hi());
  for (double q : cb.values()) s += log_integral(q - cb0, ka_rel.lo(), ka_rel.hi());
  s -= log_double_integral(ka, kb);
  TileInteraction out;
  out.interaction = s.value();
  const double d = std::abs(a - b);
  const double da = discrepancy_profile_sum(translate(ca, -2.0 * R * a), R);
  const double db = discrepancy_profile_sum(translate(cb, -2.0 * R * b), R);
  out.bound = calibration::kInteraction / (d * d * R * R) * da * db;
  return out;
}

SandwichCheck discrepancy_sandwich(const LabeledTuple& x0, const LabeledTuple& x1, int R, double t) {
  const PointConfiguration c0 = unlabel(x0, R);
  const PointConfiguration c1 = unlabel(x1, R);
  const PointConfiguration ch = unlabel(interpolate(x0, x1, t), R);
  SandwichCheck out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (int r = -R + 1; r <= R; ++r) {
    const Window w(-R, r);
    const double outer = std::max(std::abs(discrepancy(c0, w)), std::abs(discrepancy(c1, w)));
    const double slack = outer - std::abs(discrepancy(ch, w));
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst_r = r;
    }
  }
  return out;
}

FreeEnergyReport free_energy_report(std::span<const PointConfiguration> windows, double beta,
                                    std::optional<double> sre) {
  if (windows.empty()) throw Error(ErrorCode::InsufficientPoints, "no windows");
  std::vector<double> w;
  for (const auto& c : windows) w.push_back(intrinsic_energy(c).total / c.carrier().length());
  const auto m = mean_stderr(w);
  FreeEnergyReport r;
  r.beta = beta;
  r.per_volume_wint = m.mean;
  r.stderr_ = m.stderr_;
  r.sre_estimate = sre;
  if (sre) r.f_beta = beta * m.mean + *sre;
  return r;
}

}  // namespace loggas
