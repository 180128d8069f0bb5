#include <doctest.h>

#include <cmath>
#include <vector>

#include "loggas/energy.hpp"
#include "loggas/error.hpp"
#include "loggas/quadrature.hpp"
#include "loggas/sampler.hpp"
#include "loggas/stats.hpp"

using namespace loggas;

namespace {

PointConfiguration lattice_on(const Window& w) {
  std::vector<double> p;
  for (double x = w.lo() + 0.5; x < w.hi(); x += 1.0) p.push_back(x);
  return PointConfiguration(p, w);
}

// Interaction of two tiles by direct quadrature of every background term.
double interaction_oracle(const PointConfiguration& ca, const PointConfiguration& cb) {
  quad::Options o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-12;
  const Window ka = ca.carrier(), kb = cb.carrier();
  auto pot = [&](double x, const Window& w) {
    return quad::integrate([x](double y) { return std::log(std::abs(x - y)); }, w.lo(), w.hi(), o).value;
  };
  double s = 0.0;
  for (double p : ca.values()) {
    for (double q : cb.values()) s -= std::log(std::abs(p - q));
  }
  for (double p : ca.values()) s += pot(p, kb);
  for (double q : cb.values()) s += pot(q, ka);
  s -= quad::integrate([&](double x) { return pot(x, kb); }, ka.lo(), ka.hi(), o).value;
  return s;
}

}  // namespace

TEST_CASE("mean, standard error and linear fit") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto m = mean_stderr(v);
  CHECK(m.mean == 2.5);
  CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.n == 4);
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{1.0, 3.0, 5.0, 7.0};
  const auto f = linear_fit(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.slope_stderr == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("discrepancy variance curves") {
  const std::vector<int> Rs{2, 4, 8};
  std::vector<PointConfiguration> lat(200, lattice_on(Window::centered(8)));
  for (const auto& p : discrepancy_variance_curve(lat, Rs)) CHECK(p.value == 0.0);
  Rng rng(91);
  std::vector<PointConfiguration> pois;
  for (int k = 0; k < 3000; ++k) pois.push_back(sample_poisson(1.0, Window::centered(8), rng));
  for (const auto& p : discrepancy_variance_curve(pois, Rs)) {
    CHECK(std::abs(p.value - 1.0) < 4.0 * p.stderr_);
    CHECK(p.draws == 3000);
  }
  const auto sampled = discrepancy_variance_curve(
      [](std::size_t i) {
        Rng r = make_stream(5, i);
        return sample_poisson(1.0, Window::centered(8), r);
      },
      Rs, 500, 1);
  const auto again = discrepancy_variance_curve(
      [](std::size_t i) {
        Rng r = make_stream(5, i);
        return sample_poisson(1.0, Window::centered(8), r);
      },
      Rs, 500, 3);
  for (std::size_t i = 0; i < Rs.size(); ++i) CHECK(sampled[i].value == again[i].value);
  const std::vector<VariancePoint> down{{2, 1.0, 0.01, 100}, {4, 0.5, 0.01, 100}};
  CHECK(min_decrease_z(down) == doctest::Approx(0.5 / std::hypot(0.01, 0.01)));
}

TEST_CASE("shift S") {
  CHECK(shift_S(lattice_on(Window::centered(4))) == 0);
  // All points on the right: no point below 0, so R + S = 0.
  CHECK(shift_S(PointConfiguration({0.1, 0.6, 1.1, 1.9}, Window::centered(2))) == -2);
  CHECK(shift_S(PointConfiguration({-1.5, -0.5, -0.2, 0.5}, Window::centered(2))) == 1);
  CHECK_THROWS_AS(shift_S(PointConfiguration({0.5}, Window::centered(2))), Error);
  CHECK_THROWS_AS(shift_S(PointConfiguration({-1.5, -0.5, -0.2, -0.1}, Window::centered(2))), Error);
}

TEST_CASE("gain estimator") {
  const int R = 16;
  Rng rng(92);
  std::vector<LabeledTuple> a;
  for (int k = 0; k < 20; ++k) a.push_back(label(sample_bernoulli(2 * R, Window::centered(R), rng)));
  const auto self = gain_estimator(a, a, assignment_coupling(a, a), R);
  CHECK(self.value == 0.0);
  CHECK(self.shift_used >= 0);

  // Lattice against conditioned Poisson.
  const auto lat = label(lattice_on(Window::centered(R)));
  std::vector<LabeledTuple> l, p;
  while (p.size() < 60) {
    const auto c = sample_bernoulli(2 * R, Window::centered(R), rng);
    if (std::abs(shift_S(c)) > 3) continue;
    l.push_back(lat);
    p.push_back(label(c));
  }
  const auto est = gain_estimator(l, p, assignment_coupling(l, p), R);
  CHECK(est.ci_low() > 0.01);
  for (double v : est.per_pair) {
    CHECK(v >= 0.0);
    CHECK(v * R <= R + 1.0);
  }
  GainOptions flip;
  flip.flip_sign = true;
  CHECK(gain_estimator(l, p, assignment_coupling(l, p), R, flip).value == doctest::Approx(-est.value));
}

TEST_CASE("gap functional is translation invariant") {
  Rng rng(93);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const auto a = label(sample_bernoulli(8, Window::centered(4), rng));
    const auto b = label(sample_bernoulli(8, Window::centered(4), rng));
    const double t = u(rng);
    std::vector<double> as(a.vec()), bs(b.vec());
    for (double& x : as) x += t;
    for (double& x : bs) x += t;
    CHECK(gain(LabeledTuple(as), LabeledTuple(bs)) == doctest::Approx(gain(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("gap distribution distance") {
  Rng rng(94);
  std::vector<std::vector<double>> g0, g1;
  while (g0.size() < 400) {
    const auto c = sample_bernoulli(16, Window::centered(8), rng);
    if (count_in(c, Window(-8, 0)) < 3 || count_in(c, Window(0, 8)) < 4) continue;
    g0.push_back(gap_vector(c, 2));
    g1.push_back(gap_vector(lattice_on(Window::centered(8)), 2));
  }
  const auto same = gap_distribution_distance(g0, g0, 2);
  CHECK(same.value == 0.0);
  CHECK(same.holdout == 0.0);
  const auto diff = gap_distribution_distance(g0, g1, 2);
  CHECK(diff.value > 0.0);
  CHECK(diff.value <= 1.0);
  CHECK(diff.holdout - 1.96 * diff.holdout_stderr > 0.0);
  CHECK_THROWS_AS(gap_distribution_distance(g0, g1, 3), Error);
  CHECK(gap_vector(lattice_on(Window::centered(4)), 1) == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("gap L2 diagnostic") {
  for (int R : {4, 8, 16}) {
    const auto g = gap_l2_diagnostic(lattice_on(Window::centered(R)), 3.0);
    CHECK(g.sum_gaps_sq == doctest::Approx(2 * (R / 2) + 1));
    CHECK(g.bound == R + 3.0);
  }
  CHECK_THROWS_AS(gap_l2_diagnostic(PointConfiguration({0.5, 1.5, 2.5, 3.5}, Window::centered(4)), 0.0), Error);
  // Stationary input: the sum grows linearly in R.
  Rng rng(95);
  std::vector<double> Rs, sums;
  for (int R : {8, 16, 32, 64}) {
    double acc = 0.0;
    for (int k = 0; k < 50;) {
      const auto c = sample_bernoulli(2 * R, Window::centered(R), rng);
      // Skip the rare draws with too few points on one side.
      if (count_in(c, Window(-R, 0)) < static_cast<std::size_t>(R / 2 + 2) ||
          count_in(c, Window(0, R)) < static_cast<std::size_t>(R / 2 + 2)) {
        continue;
      }
      acc += gap_l2_diagnostic(c, 0.0).sum_gaps_sq;
      ++k;
    }
    Rs.push_back(R);
    sums.push_back(acc / 50);
  }
  CHECK(linear_fit(Rs, sums).slope > 0.0);
}

TEST_CASE("tile interaction") {
  const int R = 8;
  const auto a = lattice_on(Window(-R, R));
  const auto b = lattice_on(Window(-R - 2.0 * R * 2, R - 2.0 * R * 2));
  const auto t = pairwise_interaction_bound(a, 0, b, 2, R);
  CHECK(std::abs(t.interaction) < 1e-3);
  CHECK(t.bound > 0.0);
  CHECK_THROWS_AS(pairwise_interaction_bound(a, 0, lattice_on(Window(-3.0 * R, -R)), 1, R), Error);
  Rng rng(96);
  for (int k = 0; k < 5; ++k) {
    const int Rs = 3;
    const auto ca = sample_bernoulli(2 * Rs, Window::centered(Rs), rng);
    const auto cb = translate(sample_bernoulli(2 * Rs, Window::centered(Rs), rng), 2.0 * Rs * 3);
    const auto ti = pairwise_interaction_bound(ca, 0, cb, 3, Rs);
    CHECK(ti.interaction == doctest::Approx(interaction_oracle(ca, cb)).epsilon(1e-8));
  }
}

TEST_CASE("discrepancy sandwich along interpolation") {
  Rng rng(97);
  for (int k = 0; k < 200; ++k) {
    const auto a = label(sample_bernoulli(16, Window::centered(8), rng));
    const auto b = label(sample_bernoulli(16, Window::centered(8), rng));
    for (double t : {0.25, 0.5, 0.75}) CHECK(discrepancy_sandwich(a, b, 8, t).holds());
  }
  const auto a = label(lattice_on(Window::centered(4)));
  CHECK(discrepancy_sandwich(a, a, 4).worst_slack == 0.0);
}

TEST_CASE("free energy report") {
  Rng rng(98);
  std::vector<PointConfiguration> pois;
  for (int k = 0; k < 200; ++k) pois.push_back(sample_bernoulli(16, Window::centered(8), rng));
  const auto r = free_energy_report(pois, 1.0, 0.0);
  REQUIRE(r.sre_estimate.has_value());
  CHECK(*r.sre_estimate == 0.0);
  CHECK(*r.f_beta == doctest::Approx(r.per_volume_wint));
  CHECK_FALSE(free_energy_report(pois, 1.0, std::nullopt).f_beta.has_value());

  // Rigid beta = 4 windows carry less energy per volume than Poisson ones.
  const EnsembleSpec spec{256, 4.0, 99, SamplerId::Tridiagonal};
  std::vector<PointConfiguration> b4;
  for (std::uint64_t i = 0; b4.size() < 100 && i < 1000; ++i) {
    const auto w = microscopic_window(sample_ensemble(spec, i), 0.0, 8).config;
    if (w.size() == 16) b4.push_back(w);
  }
  REQUIRE(b4.size() >= 50);
  const auto q = free_energy_report(b4, 4.0, std::nullopt);
  CHECK(q.per_volume_wint + 3.0 * q.stderr_ < r.per_volume_wint - 3.0 * r.stderr_);
  CHECK_THROWS_AS(free_energy_report(std::vector<PointConfiguration>{}, 1.0, 0.0), Error);
}
