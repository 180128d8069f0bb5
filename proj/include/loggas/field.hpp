#pragma once

// Local electric field of a configuration on the real line embedded in the
// plane, its eta-truncation, and line/area integrals built on it.

#include <optional>

#include "loggas/pointconf.hpp"

namespace loggas {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// E(X) = sum_p -(X - p)/|X - p|^2 + integral over the background window of
/// (X - s)/|X - s|^2 ds. With eta > 0 the Coulomb term of p is dropped
/// whenever |X - p| < eta, which is the gradient of the truncation kernel
/// max(-log(|x|/eta), 0) subtracted from the field.
class FieldEvaluator {
 public:
  FieldEvaluator(PointConfiguration source, std::optional<Window> background, double eta = 0.0);

  /// Field of c against the uniform background on its carrier.
  static FieldEvaluator local(const PointConfiguration& c, double eta = 0.0);

  Vec2 eval(Vec2 X) const;
  FieldEvaluator truncate(double eta) const;
  FieldEvaluator untruncated() const;

  const PointConfiguration& source() const { return source_; }
  const std::optional<Window>& background() const { return background_; }
  double eta() const { return eta_; }

 private:
  PointConfiguration source_;
  std::optional<Window> background_;
  double eta_;
};

/// Background contribution alone (0 on the window's own line by principal value).
Vec2 background_field(const Window& w, Vec2 X);

Vec2 eval_field(const FieldEvaluator& f, Vec2 X);

/// Integral of E . nu along the segment, nu the right-hand normal of a -> b
/// (outward for a counter-clockwise boundary). Absolute tolerance tol.
double flux(const FieldEvaluator& f, const Segment& seg, double tol);

/// Outward flux through the boundary of [xlo, xhi] x [ylo, yhi].
double box_flux(const FieldEvaluator& f, double xlo, double xhi, double ylo, double yhi, double tol);

/// Integral of |E|^2 along a segment (arclength measure), relative tolerance tol.
double segment_energy(const FieldEvaluator& f, const Segment& seg, double tol);

/// Integral of |E|^2 over [xlo, xhi] x [ylo, yhi]; bounds may be infinite.
/// Relative tolerance tol.
double energy_region(const FieldEvaluator& f, double xlo, double xhi, double ylo, double yhi,
                     double tol);

/// Integral of |E_eta|^2 over w x [-T, T]; needs eta > 0.
double energy_rectangle(const FieldEvaluator& f, const Window& w, double T, double tol);

/// (1/2pi) integral |E_eta|^2 + |C| log eta for the local field of c.
/// Without T the integral runs over the whole plane, which requires
/// |C| = |carrier| (NonNeutral otherwise); with T it is clipped to
/// carrier x [-T, T].
double welec_eta(const PointConfiguration& c, double eta, std::optional<double> T, double tol);

}  // namespace loggas
