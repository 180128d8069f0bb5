#include "loggas/pointconf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loggas/error.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {

Window::Window(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw Error(ErrorCode::InvalidArgument,
                "window needs finite lo < hi, got [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }
}

Window Window::centered(double half_width) { return Window(-half_width, half_width); }

std::optional<Window> intersect(const Window& a, const Window& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (!(lo < hi)) return std::nullopt;
  return Window(lo, hi);
}

namespace {

void check_inside(const std::vector<double>& pts, const Window& w) {
  for (double p : pts) {
    if (!std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite position");
    if (!w.contains(p)) {
      throw Error(ErrorCode::OutOfWindow, "point " + std::to_string(p) + " outside carrier [" +
                                              std::to_string(w.lo()) + ", " +
                                              std::to_string(w.hi()) + "]");
    }
  }
}

}  // namespace

PointConfiguration::PointConfiguration(std::vector<double> points, Window carrier)
    : points_(std::move(points)), carrier_(carrier) {
  std::sort(points_.begin(), points_.end());
  check_inside(points_, carrier_);
}

PointConfiguration PointConfiguration::from_sorted(std::vector<double> points, Window carrier) {
  if (!std::is_sorted(points.begin(), points.end())) {
    throw Error(ErrorCode::UnsortedInput, "positions are not in nondecreasing order");
  }
  check_inside(points, carrier);
  return PointConfiguration(Trusted{}, std::move(points), carrier);
}

bool PointConfiguration::is_simple() const {
  return std::adjacent_find(points_.begin(), points_.end()) == points_.end();
}

PointConfiguration restrict(const PointConfiguration& c, const Window& w) {
  const auto& p = c.values();
  auto first = std::lower_bound(p.begin(), p.end(), w.lo());
  auto last = std::upper_bound(p.begin(), p.end(), w.hi());
  return PointConfiguration(PointConfiguration::Trusted{}, std::vector<double>(first, last), w);
}

PointConfiguration translate(const PointConfiguration& c, double u) {
  std::vector<double> p(c.values());
  for (double& x : p) x -= u;
  const Window w = c.carrier().shifted(u);
  // Rounding can push a boundary point a hair outside the shifted carrier.
  for (double& x : p) x = std::clamp(x, w.lo(), w.hi());
  return PointConfiguration(PointConfiguration::Trusted{}, std::move(p), w);
}

std::size_t count_in(const PointConfiguration& c, const Window& w) {
  const auto& p = c.values();
  auto first = std::lower_bound(p.begin(), p.end(), w.lo());
  auto last = std::upper_bound(p.begin(), p.end(), w.hi());
  return static_cast<std::size_t>(last - first);
}

double discrepancy(const PointConfiguration& c, const Window& w) {
  return static_cast<double>(count_in(c, w)) - w.length();
}

GapView::GapView(const PointConfiguration& c) : points_(c.values()) {
  if (!c.is_simple()) throw Error(ErrorCode::MultiplePoint, "configuration has repeated positions");
  offset_ = static_cast<std::size_t>(std::lower_bound(points_.begin(), points_.end(), 0.0) -
                                     points_.begin());
}

bool GapView::has_x(long k) const {
  const long idx = static_cast<long>(offset_) + k;
  return idx >= 0 && idx < static_cast<long>(points_.size());
}

double GapView::x(long k) const {
  if (!has_x(k)) throw Error(ErrorCode::IndexOutOfRange, "no point x_" + std::to_string(k));
  return points_[static_cast<std::size_t>(static_cast<long>(offset_) + k)];
}

double GapView::origin_gap(long k) const {
  if (!has_x(k) || !has_x(k + 1)) return kInfiniteGap;
  return x(k + 1) - x(k);
}

double GapView::z(std::size_t i) const {
  if (i < 1 || i > points_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "no point z_" + std::to_string(i));
  }
  return points_[i - 1];
}

double GapView::left_gap(std::size_t i) const {
  if (i < 1 || i + 1 > points_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "no gap G_" + std::to_string(i));
  }
  return points_[i] - points_[i - 1];
}

GapView gaps(const PointConfiguration& c) { return GapView(c); }

long position_after_translation(const PointConfiguration& c, double u) {
  const auto& p = c.values();
  const auto it = std::lower_bound(p.begin(), p.end(), u);
  if (it == p.end()) throw Error(ErrorCode::NoPointRight, "no point at or beyond " + std::to_string(u));
  const auto origin = std::lower_bound(p.begin(), p.end(), 0.0);
  return static_cast<long>(it - p.begin()) - static_cast<long>(origin - p.begin());
}

PointConfiguration paste(std::span<const PointConfiguration> copies, int R) {
  if (R < 1) throw Error(ErrorCode::InvalidArgument, "paste needs R >= 1");
  if (copies.empty()) throw Error(ErrorCode::InvalidArgument, "paste needs at least one copy");
  const Window tile = Window::centered(R);
  std::vector<double> out;
  for (std::size_t i = 0; i < copies.size(); ++i) {
    if (!(copies[i].carrier() == tile)) {
      throw Error(ErrorCode::CarrierMismatch, "copy " + std::to_string(i) + " is not carried by [-R, R]");
    }
    const double shift = 2.0 * R * static_cast<double>(i);
    for (double p : copies[i].values()) {
      if (i > 0 && p == static_cast<double>(R)) continue;
      out.push_back(p - shift);
    }
  }
  const double lo = -R - 2.0 * R * static_cast<double>(copies.size() - 1);
  return PointConfiguration(std::move(out), Window(lo, R));
}

PointConfiguration average_translate_sample(const PointConfiguration& c, int R, Rng& rng) {
  std::uniform_real_distribution<double> t(-static_cast<double>(R), static_cast<double>(R));
  return translate(c, t(rng));
}

FluctuationBound fluctuation_bound(const TestFunction& g, const PointConfiguration& c,
                                   const Window& w) {
  const PointConfiguration inside = restrict(c, w);
  CompensatedSum atoms;
  for (double p : inside.values()) atoms += g.value(p);
  quad::Options opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  const double integral = quad::integrate(g.value, w.lo(), w.hi(), opt).value;

  CompensatedSum rhs;
  const double a = w.lo();
  for (double k = a; k < w.hi(); k += 1.0) {
    const double k1 = std::min(k + 1.0, w.hi());
    const double left = k > a ? std::abs(discrepancy(c, Window(a, k))) : 0.0;
    const double cell = std::abs(discrepancy(c, Window(k, k1)));
    rhs += g.sup_derivative * (left + cell + 1.0);
  }
  rhs += g.sup_value * std::abs(discrepancy(c, w));
  return {atoms.value() - integral, rhs.value()};
}

}  // namespace loggas
