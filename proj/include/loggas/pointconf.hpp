#pragma once

// Finite point configurations on the line and the operations the rest of the
// library builds on: restriction, translation, discrepancy, gap enumerations,
// pasting onto a tiling and translation averaging.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "loggas/numeric.hpp"

namespace loggas {

/// Closed interval [lo, hi] with lo < hi.
class Window {
 public:
  Window(double lo, double hi);

  /// Lambda_R = [-R, R].
  static Window centered(double half_width);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  double center() const { return 0.5 * (lo_ + hi_); }
  bool contains(double x) const { return x >= lo_ && x <= hi_; }
  Window shifted(double u) const { return Window(lo_ - u, hi_ - u); }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  double lo_;
  double hi_;
};

/// Intersection of two windows; nullopt when it is empty or a single point.
std::optional<Window> intersect(const Window& a, const Window& b);

inline constexpr double kInfiniteGap = std::numeric_limits<double>::infinity();

/// Sorted finite multiset of positions inside a carrier window.
class PointConfiguration {
 public:
  /// Sorts `points`; throws OutOfWindow if a point lies outside `carrier`.
  PointConfiguration(std::vector<double> points, Window carrier);

  /// Same, but rejects unsorted input with UnsortedInput instead of sorting.
  static PointConfiguration from_sorted(std::vector<double> points, Window carrier);

  std::span<const double> points() const { return points_; }
  const std::vector<double>& values() const { return points_; }
  const Window& carrier() const { return carrier_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double operator[](std::size_t i) const { return points_[i]; }

  /// True when all positions are pairwise distinct.
  bool is_simple() const;

  friend bool operator==(const PointConfiguration&, const PointConfiguration&) = default;

 private:
  struct Trusted {};
  PointConfiguration(Trusted, std::vector<double> points, Window carrier)
      : points_(std::move(points)), carrier_(carrier) {}

  std::vector<double> points_;
  Window carrier_;

  friend PointConfiguration restrict(const PointConfiguration&, const Window&);
  friend PointConfiguration translate(const PointConfiguration&, double);
};

PointConfiguration restrict(const PointConfiguration& c, const Window& w);

/// C - u: every point p becomes p - u, the carrier moves with it.
PointConfiguration translate(const PointConfiguration& c, double u);

/// Number of points in the closed window.
std::size_t count_in(const PointConfiguration& c, const Window& w);

/// |C_w| - |w|.
double discrepancy(const PointConfiguration& c, const Window& w);

/// Both gap enumerations of a simple configuration.
///
/// Origin indexing: x_0 is the first point >= 0, x_{-1} the last point < 0,
/// and Gamma_k = x_{k+1} - x_k, infinite once the enumeration runs off either
/// end. Left indexing: z_1 < ... < z_n and G_i = z_{i+1} - z_i, 1 <= i <= n-1.
class GapView {
 public:
  explicit GapView(const PointConfiguration& c);

  std::size_t size() const { return points_.size(); }

  /// x_k; throws IndexOutOfRange if there is no such point.
  double x(long k) const;
  bool has_x(long k) const;
  /// Gamma_k, or kInfiniteGap past the last point in either direction.
  double origin_gap(long k) const;

  /// z_i, 1-based.
  double z(std::size_t i) const;
  /// G_i, 1-based, 1 <= i <= size() - 1.
  double left_gap(std::size_t i) const;

  /// 0-based storage index of x_0 (== number of negative points).
  std::size_t origin_offset() const { return offset_; }

 private:
  std::vector<double> points_;
  std::size_t offset_;
};

/// Throws MultiplePoint when the configuration has repeated positions.
GapView gaps(const PointConfiguration& c);

/// Pos(C; u): the index m with x_0(C - u) = x_m(C). Throws NoPointRight when
/// all points are < u.
long position_after_translation(const PointConfiguration& c, double u);

/// Copies every configuration carried by Lambda_R onto the tile
/// K_i = Lambda_R - 2Ri. A point sitting on the boundary shared by K_i and
/// K_{i-1} is kept only in the lower-indexed tile.
PointConfiguration paste(std::span<const PointConfiguration> copies, int R);

/// One draw from the translation average: C - t with t uniform on [-R, R].
PointConfiguration average_translate_sample(const PointConfiguration& c, int R, Rng& rng);

/// A C^1 test function with known sup norms of itself and its derivative.
struct TestFunction {
  std::function<double(double)> value;
  double sup_value = 0.0;
  double sup_derivative = 0.0;
};

struct FluctuationBound {
  double lhs = 0.0;  ///< integral of g against (dC - dx) on w
  double rhs = 0.0;  ///< discrepancy control without the universal constant
};

/// Fluctuation of a linear statistic and its discrepancy-based bound, computed
/// over unit cells [a + k, a + k + 1] of w = [a, b].
FluctuationBound fluctuation_bound(const TestFunction& g, const PointConfiguration& c,
                                   const Window& w);

}  // namespace loggas
