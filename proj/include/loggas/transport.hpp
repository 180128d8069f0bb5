#pragma once

// Orthant labelling, discrete optimal coupling, displacement interpolation and
// the convexity certificates for the intrinsic energy.

#include <cstddef>
#include <span>
#include <vector>

#include "loggas/pointconf.hpp"

namespace loggas {

/// Nondecreasing tuple (z_1, ..., z_n).
class LabeledTuple {
 public:
  LabeledTuple() = default;
  /// Throws UnsortedInput unless nondecreasing.
  explicit LabeledTuple(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  bool strictly_increasing() const;

  friend bool operator==(const LabeledTuple&, const LabeledTuple&) = default;

 private:
  std::vector<double> values_;
};

/// Sorted tuple of a simple configuration with exactly 2R points on [-R, R].
LabeledTuple label(const PointConfiguration& c);
PointConfiguration unlabel(const LabeledTuple& x, int R);

struct CoupledPair {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

struct Coupling {
  std::vector<CoupledPair> pairs;
  double cost = 0.0;  ///< mean squared Euclidean cost
};

/// Minimum-cost perfect matching for a square cost matrix (row-major);
/// returns the column assigned to each row. Exact, O(n^3).
std::vector<std::size_t> hungarian(const std::vector<double>& cost, std::size_t n);

/// Optimal one-to-one assignment between equal-size sample lists under
/// squared Euclidean cost, each pair with weight 1/m.
Coupling assignment_coupling(std::span<const LabeledTuple> a, std::span<const LabeledTuple> b);

/// (1 - t) x0 + t x1, coordinatewise.
LabeledTuple interpolate(const LabeledTuple& x0, const LabeledTuple& x1, double t);

/// Sum over consecutive gaps of (G0 - G1)^2 / (G0^2 + G1^2).
double gain(const LabeledTuple& x0, const LabeledTuple& x1);

/// 2 sum_i (V_R(z_i^h) - (V_R(z_i^0) + V_R(z_i^1))/2), with z^h the midpoint.
double background_field_term(const LabeledTuple& x0, const LabeledTuple& x1, double R);

struct ConvexityCertificate {
  double lhs = 0.0;       ///< W^int of the half-interpolate
  double rhs_mean = 0.0;  ///< (W^int_0 + W^int_1) / 2
  double gain = 0.0;
  double bf = 0.0;
  double slack = 0.0;     ///< rhs_mean - gain/4 - lhs
  bool holds(double tol = 1e-9) const { return slack >= -tol; }
};

ConvexityCertificate convexity_certificate(const LabeledTuple& x0, const LabeledTuple& x1, int R);

/// Slack of -log((x+y)/2) <= (-log x - log y)/2 - (x-y)^2 / (8 (x^2 + y^2)).
double convlog_slack(double x, double y);

struct EntropyPoint {
  double t = 0.0;
  double sigma = 0.0;
  double neg_entropy = 0.0;
};

/// Gaussians N(m0, s0^2) -> N(m1, s1^2) along the monotone map: sigma_t is
/// linear in t and the negative differential entropy is -log sigma_t - log sqrt(2 pi e).
std::vector<EntropyPoint> gaussian_entropy_convexity_toy(double m0, double s0, double m1, double s1,
                                                         std::span<const double> ts);

/// Smallest midpoint slack (f(a) + f(b))/2 - f((a + b)/2) over grid pairs
/// whose midpoint is also on the grid; nonnegative iff midpoint convex there.
double midpoint_convexity_slack(const std::vector<EntropyPoint>& curve);

/// c_R in Ent[P | Poisson] = Ent[labelled P | uniform law on the orthant] + c_R,
/// i.e. log(e^{2R} (2R)! / (2R)^{2R}).
double orthant_entropy_constant(int R);

}  // namespace loggas
