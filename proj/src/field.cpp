#include "loggas/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "loggas/error.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {

FieldEvaluator::FieldEvaluator(PointConfiguration source, std::optional<Window> background,
                               double eta)
    : source_(std::move(source)), background_(background), eta_(eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidArgument, "eta must be finite and >= 0");
  }
}

FieldEvaluator FieldEvaluator::local(const PointConfiguration& c, double eta) {
  return FieldEvaluator(c, c.carrier(), eta);
}

FieldEvaluator FieldEvaluator::truncate(double eta) const {
  if (!(eta > 0.0 && eta < 1.0)) throw Error(ErrorCode::InvalidArgument, "eta must lie in (0, 1)");
  return FieldEvaluator(source_, background_, eta);
}

FieldEvaluator FieldEvaluator::untruncated() const { return FieldEvaluator(source_, background_, 0.0); }

Vec2 background_field(const Window& w, Vec2 X) {
  const double dl = X.x - w.lo();
  const double dh = X.x - w.hi();
  const double y2 = X.y * X.y;
  Vec2 e;
  e.x = 0.5 * (std::log(dl * dl + y2) - std::log(dh * dh + y2));
  e.y = X.y == 0.0 ? 0.0 : std::atan2(w.length() * X.y, y2 + dl * dh);
  return e;
}

Vec2 FieldEvaluator::eval(Vec2 X) const {
  double ex = 0.0;
  double ey = 0.0;
  const double eta2 = eta_ * eta_;
  const double y2 = X.y * X.y;
  for (double p : source_.values()) {
    const double dx = X.x - p;
    const double r2 = dx * dx + y2;
    if (eta_ > 0.0) {
      if (r2 < eta2) continue;
    } else if (r2 == 0.0) {
      throw Error(ErrorCode::Singularity, "field evaluated at a charge");
    }
    ex -= dx / r2;
    ey -= X.y / r2;
  }
  if (background_) {
    const Vec2 b = background_field(*background_, X);
    ex += b.x;
    ey += b.y;
  }
  return {ex, ey};
}

Vec2 eval_field(const FieldEvaluator& f, Vec2 X) { return f.eval(X); }

namespace {

// Arclength parameters along seg where the integrand may be non-smooth:
// closest approach to every charge and background endpoint, truncation
// circle crossings, and the crossing of the real axis.
std::vector<double> segment_breaks(const FieldEvaluator& f, const Segment& seg, double L) {
  const double ux = (seg.b.x - seg.a.x) / L;
  const double uy = (seg.b.y - seg.a.y) / L;
  std::vector<double> br;
  auto add_point = [&](double px, double radius) {
    const double t = (px - seg.a.x) * ux + (0.0 - seg.a.y) * uy;
    const double cx = seg.a.x + t * ux - px;
    const double cy = seg.a.y + t * uy;
    const double d2 = cx * cx + cy * cy;
    if (d2 < 4.0) br.push_back(t);
    if (radius > 0.0 && d2 < radius * radius) {
      const double h = std::sqrt(radius * radius - d2);
      br.push_back(t - h);
      br.push_back(t + h);
    }
  };
  for (double p : f.source().values()) add_point(p, f.eta());
  if (f.background()) {
    add_point(f.background()->lo(), 0.0);
    add_point(f.background()->hi(), 0.0);
  }
  if ((seg.a.y < 0.0 && seg.b.y > 0.0) || (seg.a.y > 0.0 && seg.b.y < 0.0)) {
    br.push_back(-seg.a.y / uy);
  }
  return br;
}

double segment_integral(const FieldEvaluator& f, const Segment& seg, const quad::Options& opt,
                        bool normal_component) {
  const double dx = seg.b.x - seg.a.x;
  const double dy = seg.b.y - seg.a.y;
  const double L = std::hypot(dx, dy);
  if (L == 0.0) return 0.0;
  const double ux = dx / L;
  const double uy = dy / L;
  const auto br = segment_breaks(f, seg, L);
  auto g = [&](double t) {
    const Vec2 e = f.eval({seg.a.x + t * ux, seg.a.y + t * uy});
    if (normal_component) return e.x * uy - e.y * ux;
    return e.x * e.x + e.y * e.y;
  };
  return quad::integrate(g, 0.0, L, opt, br).value;
}

}  // namespace

double flux(const FieldEvaluator& f, const Segment& seg, double tol) {
  quad::Options opt;
  opt.abs_tol = tol;
  opt.rel_tol = 0.0;
  return segment_integral(f, seg, opt, true);
}

double box_flux(const FieldEvaluator& f, double xlo, double xhi, double ylo, double yhi, double tol) {
  const double t = tol / 4.0;
  CompensatedSum s;
  s += flux(f, {{xlo, ylo}, {xhi, ylo}}, t);
  s += flux(f, {{xhi, ylo}, {xhi, yhi}}, t);
  s += flux(f, {{xhi, yhi}, {xlo, yhi}}, t);
  s += flux(f, {{xlo, yhi}, {xlo, ylo}}, t);
  return s.value();
}

double segment_energy(const FieldEvaluator& f, const Segment& seg, double tol) {
  quad::Options opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = tol;
  return segment_integral(f, seg, opt, false);
}

namespace {

// Integral over [xlo, xhi] x [a, b] with 0 <= a < b (b may be +inf).
double energy_upper(const FieldEvaluator& f, double xlo, double xhi, double a, double b, double tol) {
  const double eta = f.eta();
  std::vector<double> base;
  if (f.background()) {
    base.push_back(f.background()->lo());
    base.push_back(f.background()->hi());
  }
  const auto& pts = f.source().values();
  quad::Options inner_opt;
  inner_opt.abs_tol = 1e-15;
  inner_opt.rel_tol = tol * 0.05;
  std::vector<double> br;
  auto inner = [&](double y) {
    br = base;
    if (y < 2.0) {
      for (double p : pts) {
        br.push_back(p);
        if (y < eta) {
          const double h = std::sqrt(eta * eta - y * y);
          br.push_back(p - h);
          br.push_back(p + h);
        }
      }
    }
    auto g = [&](double x) {
      const Vec2 e = f.eval({x, y});
      return e.x * e.x + e.y * e.y;
    };
    return quad::integrate(g, xlo, xhi, inner_opt, br).value;
  };
  std::vector<double> ybr;
  if (eta > 0.0) ybr.push_back(eta);
  ybr.push_back(1.0);
  quad::Options outer_opt;
  outer_opt.abs_tol = 1e-13;
  outer_opt.rel_tol = tol;
  return quad::integrate(inner, a, b, outer_opt, ybr).value;
}

}  // namespace

double energy_region(const FieldEvaluator& f, double xlo, double xhi, double ylo, double yhi,
                     double tol) {
  if (!(xlo < xhi) || !(ylo < yhi)) throw Error(ErrorCode::InvalidArgument, "empty region");
  if (f.eta() == 0.0) {
    const auto& pts = f.source().values();
    for (double p : pts) {
      if (p >= xlo && p <= xhi && ylo <= 0.0 && yhi >= 0.0) {
        throw Error(ErrorCode::Singularity, "untruncated field energy diverges at a charge");
      }
    }
  }
  // |E(x, -y)| = |E(x, y)| since every source lies on the real axis.
  CompensatedSum s;
  if (yhi > 0.0) s += energy_upper(f, xlo, xhi, std::max(ylo, 0.0), yhi, tol);
  if (ylo < 0.0) s += energy_upper(f, xlo, xhi, std::max(-yhi, 0.0), -ylo, tol);
  return s.value();
}

double energy_rectangle(const FieldEvaluator& f, const Window& w, double T, double tol) {
  if (!(f.eta() > 0.0)) throw Error(ErrorCode::InvalidArgument, "energy_rectangle needs eta > 0");
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  return energy_region(f, w.lo(), w.hi(), -T, T, tol);
}

double welec_eta(const PointConfiguration& c, double eta, std::optional<double> T, double tol) {
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorCode::InvalidArgument, "eta must lie in (0, 1/2)");
  const FieldEvaluator f = FieldEvaluator::local(c, eta);
  double e = 0.0;
  if (T) {
    e = energy_rectangle(f, c.carrier(), *T, tol);
  } else {
    if (static_cast<double>(c.size()) != c.carrier().length()) {
      throw Error(ErrorCode::NonNeutral,
                  "whole-plane energy diverges unless the point count equals the window length");
    }
    const double inf = std::numeric_limits<double>::infinity();
    e = energy_region(f, -inf, inf, -inf, inf, tol);
  }
  return e / (2.0 * std::numbers::pi) + static_cast<double>(c.size()) * std::log(eta);
}

}  // namespace loggas
