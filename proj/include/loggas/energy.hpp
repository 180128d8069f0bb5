#pragma once

// Logarithmic energies of finite configurations against the uniform
// background on a window, all in closed form.

#include <span>

#include "loggas/pointconf.hpp"

namespace loggas {

/// u log|u| - u, with the value 0 at u = 0.
double log_primitive(double u);

/// Integral of log|t - s| over s in [lo, hi]; finite for every real t.
double log_integral(double t, double lo, double hi);

/// Integral of log|x - y| over [a.lo, a.hi] x [b.lo, b.hi]; the windows may overlap.
double log_double_integral(const Window& a, const Window& b);

/// Sum over i < j of -log(z_j - z_i). Throws DuplicatePoint unless strictly increasing.
double pair_interaction(std::span<const double> z);

/// V_R(t) = integral of log|t - s| over [-R, R]. Throws OutOfWindow for |t| > R.
double background_potential(double t, double R);

/// Integral of -log|x - y| over [-R, R]^2, i.e. L^2 (3/2 - log L) with L = 2R.
double background_const(double R);

struct EnergyBreakdown {
  double pair_term = 0.0;        ///< 2 Int
  double background_term = 0.0;  ///< 2 sum V_R(z_i)
  double const_term = 0.0;       ///< const_R
  double total = 0.0;
};

/// Intrinsic energy of a simple configuration carried by a centered window.
EnergyBreakdown intrinsic_energy(const PointConfiguration& c);

/// Sum of -log|x - y| over ordered pairs of points of c in w with 0 < |x - y| < 2 eta.
double truncation_error(const PointConfiguration& c, double eta, const Window& w);

}  // namespace loggas
