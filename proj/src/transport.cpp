#include "loggas/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "loggas/energy.hpp"
#include "loggas/error.hpp"

namespace loggas {

LabeledTuple::LabeledTuple(std::vector<double> values) : values_(std::move(values)) {
  if (!std::is_sorted(values_.begin(), values_.end())) {
    throw Error(ErrorCode::UnsortedInput, "labelled tuple must be nondecreasing");
  }
}

bool LabeledTuple::strictly_increasing() const {
  return std::adjacent_find(values_.begin(), values_.end(),
                            [](double a, double b) { return !(a < b); }) == values_.end();
}

LabeledTuple label(const PointConfiguration& c) {
  const Window& w = c.carrier();
  if (w.lo() != -w.hi()) throw Error(ErrorCode::CarrierMismatch, "carrier must be [-R, R]");
  if (static_cast<double>(c.size()) != w.length()) {
    throw Error(ErrorCode::WrongCount, "need exactly 2R points, got " + std::to_string(c.size()));
  }
  if (!c.is_simple()) throw Error(ErrorCode::DuplicatePoint, "labelling needs distinct points");
  return LabeledTuple(c.values());
}

PointConfiguration unlabel(const LabeledTuple& x, int R) {
  if (x.size() != static_cast<std::size_t>(2 * R)) {
    throw Error(ErrorCode::WrongCount, "tuple length must be 2R");
  }
  if (!x.strictly_increasing()) throw Error(ErrorCode::DuplicatePoint, "tuple has repeated entries");
  return PointConfiguration::from_sorted(x.vec(), Window::centered(R));
}

std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n) {
  if (cost.size() != n * n) throw Error(ErrorCode::SizeMismatch, "cost matrix must be n x n");
  if (n == 0) return {};
  // Shortest augmenting paths with row/column potentials; indices are 1-based
  // and column 0 is a virtual source.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

namespace {

double squared_distance(const LabeledTuple& a, const LabeledTuple& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

void require_same_length(const LabeledTuple& a, const LabeledTuple& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "tuples have different lengths");
}

}  // namespace

Coupling assignment_coupling(std::span<const LabeledTuple> a, std::span<const LabeledTuple> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::SizeMismatch, "sample lists differ in size");
  const std::size_t m = a.size();
  if (m == 0) return {};
  std::vector<double> cost(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      require_same_length(a[i], b[j]);
      cost[i * m + j] = squared_distance(a[i], b[j]);
    }
  }
  const auto assign = hungarian(cost, m);
  Coupling out;
  CompensatedSum total;
  for (std::size_t i = 0; i < m; ++i) {
    out.pairs.push_back({i, assign[i], 1.0 / static_cast<double>(m)});
    total += cost[i * m + assign[i]];
  }
  out.cost = total.value() / static_cast<double>(m);
  return out;
}

LabeledTuple interpolate(const LabeledTuple& x0, const LabeledTuple& x1, double t) {
  require_same_length(x0, x1);
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
  std::vector<double> v(x0.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (1.0 - t) * x0[k] + t * x1[k];
  return LabeledTuple(std::move(v));
}

double gain(const LabeledTuple& x0, const LabeledTuple& x1) {
  require_same_length(x0, x1);
  if (!x0.strictly_increasing() || !x1.strictly_increasing()) {
    throw Error(ErrorCode::DuplicatePoint, "gain needs strictly increasing tuples");
  }
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < x0.size(); ++i) {
    const double g0 = x0[i + 1] - x0[i];
    const double g1 = x1[i + 1] - x1[i];
    const double d = g0 - g1;
    s += d * d / (g0 * g0 + g1 * g1);
  }
  return s.value();
}

double background_field_term(const LabeledTuple& x0, const LabeledTuple& x1, double R) {
  require_same_length(x0, x1);
  CompensatedSum s;
  for (std::size_t i = 0; i < x0.size(); ++i) {
    const double h = 0.5 * x0[i] + 0.5 * x1[i];
    s += background_potential(h, R);
    s -= 0.5 * background_potential(x0[i], R);
    s -= 0.5 * background_potential(x1[i], R);
  }
  return 2.0 * s.value();
}

ConvexityCertificate convexity_certificate(const LabeledTuple& x0, const LabeledTuple& x1, int R) {
  require_same_length(x0, x1);
  const LabeledTuple h = interpolate(x0, x1, 0.5);
  ConvexityCertificate cert;
  const double w0 = intrinsic_energy(unlabel(x0, R)).total;
  const double w1 = intrinsic_energy(unlabel(x1, R)).total;
  cert.lhs = intrinsic_energy(unlabel(h, R)).total;
  cert.rhs_mean = 0.5 * (w0 + w1);
  cert.gain = gain(x0, x1);
  cert.bf = background_field_term(x0, x1, R);
  cert.slack = cert.rhs_mean - cert.gain / 4.0 - cert.lhs;
  return cert;
}

double convlog_slack(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw Error(ErrorCode::InvalidArgument, "convlog needs x, y > 0");
  const double lhs = -std::log(0.5 * (x + y));
  const double rhs = 0.5 * (-std::log(x) - std::log(y)) - (x - y) * (x - y) / (8.0 * (x * x + y * y));
  return rhs - lhs;
}

std::vector<EntropyPoint> gaussian_entropy_convexity_toy(double m0, double s0, double m1, double s1,
                                                         std::span<const double> ts) {
  (void)m0;
  (void)m1;  // the means only translate the interpolate
  if (!(s0 > 0.0 && s1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "standard deviations must be positive");
  const double c = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
  std::vector<EntropyPoint> out;
  for (double t : ts) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
    const double sig = (1.0 - t) * s0 + t * s1;
    out.push_back({t, sig, -std::log(sig) - c});
  }
  return out;
}

double midpoint_convexity_slack(const std::vector<EntropyPoint>& curve) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < curve.size(); ++a) {
    for (std::size_t b = a + 1; b < curve.size(); ++b) {
      const double tm = 0.5 * (curve[a].t + curve[b].t);
      for (const auto& m : curve) {
        if (m.t != tm) continue;
        worst = std::min(worst, 0.5 * (curve[a].neg_entropy + curve[b].neg_entropy) - m.neg_entropy);
      }
    }
  }
  return worst;
}

double orthant_entropy_constant(int R) {
  const double n = 2.0 * R;
  return n + std::lgamma(n + 1.0) - n * std::log(n);
}

}  // namespace loggas
