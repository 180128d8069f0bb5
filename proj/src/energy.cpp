#include "loggas/energy.hpp"

#include <cmath>
#include <string>

#include "loggas/error.hpp"
#include "loggas/numeric.hpp"

namespace loggas {

double log_primitive(double u) {
  if (u == 0.0) return 0.0;
  return u * std::log(std::abs(u)) - u;
}

double log_integral(double t, double lo, double hi) {
  return log_primitive(t - lo) - log_primitive(t - hi);
}

namespace {

// Second primitive of log|u|.
double log_primitive2(double u) {
  if (u == 0.0) return 0.0;
  return 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u;
}

void require_centered(const Window& w) {
  if (w.lo() != -w.hi()) {
    throw Error(ErrorCode::CarrierMismatch, "carrier must be a centered window [-R, R]");
  }
}

}  // namespace

double log_double_integral(const Window& a, const Window& b) {
  CompensatedSum s;
  s += log_primitive2(a.hi() - b.lo());
  s -= log_primitive2(a.lo() - b.lo());
  s -= log_primitive2(a.hi() - b.hi());
  s += log_primitive2(a.lo() - b.hi());
  return s.value();
}

double pair_interaction(std::span<const double> z) {
  CompensatedSum s;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const double d = z[j] - z[i];
      if (!(d > 0.0)) {
        throw Error(ErrorCode::DuplicatePoint, "positions must be strictly increasing");
      }
      s -= std::log(d);
    }
  }
  return s.value();
}

double background_potential(double t, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  if (std::abs(t) > R) {
    throw Error(ErrorCode::OutOfWindow, "t = " + std::to_string(t) + " outside [-R, R]");
  }
  return log_primitive(R + t) + log_primitive(R - t);
}

double background_const(double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  const double L = 2.0 * R;
  return L * L * (1.5 - std::log(L));
}

EnergyBreakdown intrinsic_energy(const PointConfiguration& c) {
  require_centered(c.carrier());
  const double R = c.carrier().hi();
  EnergyBreakdown e;
  e.pair_term = 2.0 * pair_interaction(c.points());
  CompensatedSum bg;
  for (double p : c.values()) bg += background_potential(p, R);
  e.background_term = 2.0 * bg.value();
  e.const_term = background_const(R);
  CompensatedSum tot;
  tot += e.pair_term;
  tot += e.background_term;
  tot += e.const_term;
  e.total = tot.value();
  return e;
}

double truncation_error(const PointConfiguration& c, double eta, const Window& w) {
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::InvalidArgument, "eta must lie in (0, 1/2)");
  const auto inside = restrict(c, w);
  const auto& p = inside.values();
  CompensatedSum s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size() && p[j] - p[i] < 2.0 * eta; ++j) {
      const double d = p[j] - p[i];
      if (d > 0.0) s -= 2.0 * std::log(d);
    }
  }
  return s.value();
}

}  // namespace loggas
