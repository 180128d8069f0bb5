#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with breakpoints,
// semi-infinite ranges and a hard evaluation budget.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "loggas/error.hpp"
#include "loggas/numeric.hpp"

namespace loggas::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_evals = 1'000'000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double sum = f(c - dx) + f(c + dx);
    kron += kWk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return Panel{a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Integrates f over [a, b]; a may be -inf and b may be +inf. Interior
/// breakpoints split the range before adaptation, so kinks and integrable
/// endpoint singularities should be listed there. Throws QuadratureFailure
/// when max(abs_tol, rel_tol*|I|) is not met within the budget.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {},
                 std::span<const double> breakpoints = {}) {
  if (std::isnan(a) || std::isnan(b)) throw Error(ErrorCode::InvalidArgument, "integrate: NaN bound");
  if (a == b) return {};
  if (a > b) throw Error(ErrorCode::InvalidArgument, "integrate: reversed range");

  std::vector<double> cuts;
  for (double x : breakpoints) {
    if (std::isfinite(x) && x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const bool left_inf = std::isinf(a);
  const bool right_inf = std::isinf(b);
  if ((left_inf || right_inf) && cuts.empty()) {
    cuts.push_back(left_inf && right_inf ? 0.0 : (left_inf ? b : a));
  }

  // Segment kinds: 0 finite [lo, hi]; 1 left tail (-inf, anchor]; 2 right
  // tail [anchor, inf). Tails use x = anchor -/+ s/(1-s), s in [0, 1).
  struct Segment {
    int kind;
    double anchor;
  };
  std::vector<Segment> segments;
  std::vector<detail::Panel> initial;
  std::size_t evals = 0;
  std::vector<int> panel_segment;

  auto mapped = [&](int seg, double s) -> double {
    ++evals;
    const Segment& sg = segments[static_cast<std::size_t>(seg)];
    if (sg.kind == 0) return f(s);
    const double one_minus = 1.0 - s;
    const double x = sg.kind == 1 ? sg.anchor - s / one_minus : sg.anchor + s / one_minus;
    const double v = f(x);
    if (v == 0.0) return 0.0;
    return v / (one_minus * one_minus);
  };

  struct Item {
    detail::Panel panel;
    int seg;
    bool operator<(const Item& o) const { return panel.error < o.panel.error; }
  };
  std::priority_queue<Item> heap;
  std::vector<Item> settled;

  auto eval_panel = [&](int seg, double lo, double hi) {
    auto fn = [&](double s) { return mapped(seg, s); };
    return Item{detail::gk15(fn, lo, hi), seg};
  };

  std::vector<double> knots;
  knots.push_back(left_inf ? cuts.front() : a);
  for (double c : cuts) {
    if (c > knots.back()) knots.push_back(c);
  }
  if (!right_inf && b > knots.back()) knots.push_back(b);
  if (left_inf) {
    segments.push_back({1, knots.front()});
    heap.push(eval_panel(static_cast<int>(segments.size()) - 1, 0.0, 1.0));
  }
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    segments.push_back({0, 0.0});
    heap.push(eval_panel(static_cast<int>(segments.size()) - 1, knots[i], knots[i + 1]));
  }
  if (right_inf) {
    segments.push_back({2, knots.back()});
    heap.push(eval_panel(static_cast<int>(segments.size()) - 1, 0.0, 1.0));
  }

  auto totals = [&](double& value, double& error) {
    CompensatedSum v;
    CompensatedSum e;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().panel.value;
      e += copy.top().panel.error;
      copy.pop();
    }
    for (const auto& it : settled) {
      v += it.panel.value;
      e += it.panel.error;
    }
    value = v.value();
    error = e.value();
  };

  double value = 0.0;
  double error = 0.0;
  double heap_error = 0.0;
  double heap_value = 0.0;
  {
    totals(value, error);
    heap_value = value;
    heap_error = error;
  }
  // Running totals are refreshed exactly every so often to avoid drift.
  std::size_t since_refresh = 0;
  while (true) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(heap_value));
    if (heap_error <= target) break;
    if (heap.empty()) break;
    if (evals + 30 > opt.max_evals) break;
    Item worst = heap.top();
    heap.pop();
    const double lo = worst.panel.a;
    const double hi = worst.panel.b;
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi) || (hi - lo) <= 1e-14 * std::max(1.0, std::abs(mid))) {
      settled.push_back(worst);
      continue;
    }
    Item left = eval_panel(worst.seg, lo, mid);
    Item right = eval_panel(worst.seg, mid, hi);
    heap_value += left.panel.value + right.panel.value - worst.panel.value;
    heap_error += left.panel.error + right.panel.error - worst.panel.error;
    heap.push(left);
    heap.push(right);
    if (++since_refresh == 64) {
      totals(heap_value, heap_error);
      since_refresh = 0;
    }
  }
  totals(value, error);
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::QuadratureFailure, "integrand produced a non-finite value");
  }
  const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  if (error > target) {
    throw Error(ErrorCode::QuadratureFailure,
                "tolerance " + std::to_string(target) + " not met (error estimate " +
                    std::to_string(error) + ", " + std::to_string(evals) + " evaluations)");
  }
  return Result{value, error, evals};
}

}  // namespace loggas::quad
