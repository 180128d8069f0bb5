#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <vector>

#include "loggas/error.hpp"
#include "loggas/quadrature.hpp"
#include "loggas/sampler.hpp"
#include "loggas/stats.hpp"

using namespace loggas;

TEST_CASE("spec validation") {
  CHECK_THROWS_AS((EnsembleSpec{1, 2.0, 0, SamplerId::Tridiagonal}.validate()), Error);
  CHECK_THROWS_AS((EnsembleSpec{4, 0.0, 0, SamplerId::Tridiagonal}.validate()), Error);
  CHECK(sampler_from_string("mcmc") == SamplerId::Mcmc);
  CHECK(to_string(SamplerId::Poisson) == "poisson");
  CHECK_THROWS_AS(sampler_from_string("lapack"), Error);
}

TEST_CASE("Sturm bisection agrees with a dense eigensolver") {
  Rng rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {2, 3, 7, 20, 64}) {
    std::vector<double> d(n), e(n - 1);
    for (double& x : d) x = g(rng);
    for (double& x : e) x = g(rng);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const auto ours = tridiagonal_eigenvalues(d, e, 1e-12);
    REQUIRE(ours.size() == static_cast<std::size_t>(n));
    CHECK(std::is_sorted(ours.begin(), ours.end()));
    for (int i = 0; i < n; ++i) CHECK(std::abs(ours[i] - es.eigenvalues()(i)) < 1e-10);
  }
}

TEST_CASE("two-particle gap law") {
  // beta = 2, N = 2 after the 1/sqrt(beta N) rescale: gap density proportional to g^2 exp(-g^2).
  quad::Options o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-13;
  auto dens = [](double g) { return g * g * std::exp(-g * g); };
  const double z = quad::integrate(dens, 0.0, std::numeric_limits<double>::infinity(), o).value;
  auto cdf = [&](double x) { return x <= 0.0 ? 0.0 : quad::integrate(dens, 0.0, x, o).value / z; };
  const EnsembleSpec spec{2, 2.0, 77, SamplerId::Tridiagonal};
  std::vector<double> gaps;
  for (const auto& s : sample_ensembles(spec, 10000, 1)) {
    REQUIRE(s.points.size() == 2);
    CHECK(s.points[0] <= s.points[1]);
    gaps.push_back(s.points[1] - s.points[0]);
  }
  const double d = ks_statistic(gaps, cdf);
  CHECK(ks_pvalue(d, static_cast<double>(gaps.size())) > 0.01);
}

TEST_CASE("draws do not depend on the worker count") {
  for (SamplerId id : {SamplerId::Tridiagonal, SamplerId::Mcmc, SamplerId::Poisson}) {
    const EnsembleSpec spec{16, 2.0, 5, id};
    const auto a = sample_ensembles(spec, 12, 1, 40);
    const auto b = sample_ensembles(spec, 12, 4, 40);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].points == b[i].points);
      CHECK(a[i].index == i);
    }
    CHECK(sample_ensemble(spec, 3, 40).points == a[3].points);
  }
}

TEST_CASE("mcmc without interaction samples the Gaussian confinement") {
  const int N = 4;
  const double beta = 2.0;
  Rng rng(41);
  McmcOptions opt;
  opt.interaction = false;
  opt.thin_sweeps = 5;
  const auto chain = mcmc_chain({N, beta, 0, SamplerId::Mcmc}, 4000, 200, rng, opt);
  std::vector<double> sq;
  for (const auto& s : chain) {
    double acc = 0.0;
    for (double x : s.points) acc += x * x;
    sq.push_back(acc / N);
  }
  const auto m = mean_stderr(sq);
  // Variance 1/(beta N) per coordinate; the thinned chain is close to independent.
  CHECK(std::abs(m.mean - 1.0 / (beta * N)) < 5.0 * m.stderr_);
}

TEST_CASE("metropolis step satisfies detailed balance on three states") {
  const double pi[3] = {0.2, 0.5, 0.3};
  double P[3][3] = {};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      P[i][j] = 0.5 * metropolis_acceptance(std::log(pi[j] / pi[i]));
    }
    P[i][i] = 1.0 - P[i][(i + 1) % 3] - P[i][(i + 2) % 3];
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(pi[i] * P[i][j] == doctest::Approx(pi[j] * P[j][i]).epsilon(1e-15));
    double stat = 0.0;
    for (int k = 0; k < 3; ++k) stat += pi[k] * P[k][i];
    CHECK(stat == doctest::Approx(pi[i]).epsilon(1e-15));
  }
  CHECK(metropolis_acceptance(0.5) == 1.0);
  CHECK(metropolis_acceptance(-1.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("tridiagonal and mcmc agree on the second moment") {
  const int N = 8;
  const double beta = 1.0;
  auto second_moment = [&](SamplerId id) {
    const auto draws = sample_ensembles({N, beta, 19, id}, 2000, 1, 200);
    std::vector<double> v;
    for (const auto& s : draws) {
      double acc = 0.0;
      for (double x : s.points) acc += x * x;
      v.push_back(acc / N);
    }
    return mean_stderr(v);
  };
  const auto a = second_moment(SamplerId::Tridiagonal);
  const auto b = second_moment(SamplerId::Mcmc);
  CHECK(std::abs(a.mean - b.mean) < 3.0 * std::hypot(a.stderr_, b.stderr_));
}

TEST_CASE("poisson counts") {
  Rng rng(51);
  std::vector<double> n;
  for (int k = 0; k < 10000; ++k) {
    const auto c = sample_poisson(1.0, Window(0, 10), rng);
    CHECK(std::is_sorted(c.values().begin(), c.values().end()));
    n.push_back(static_cast<double>(c.size()));
  }
  const auto m = mean_stderr(n);
  CHECK(std::abs(m.mean - 10.0) < 4.0 * m.stderr_);
  double var = 0.0;
  for (double x : n) var += (x - m.mean) * (x - m.mean);
  var /= static_cast<double>(n.size() - 1);
  CHECK(var == doctest::Approx(10.0).epsilon(0.06));
  int nonempty = 0;
  for (int k = 0; k < 1000; ++k) nonempty += !sample_poisson(1.0, Window(0, 1e-6), rng).empty();
  CHECK(nonempty <= 2);
  CHECK_THROWS_AS(sample_poisson(0.0, Window(0, 1), rng), Error);
}

TEST_CASE("microscopic windows have unit intensity") {
  const int R = 8;
  const EnsembleSpec spec{256, 2.0, 61, SamplerId::Tridiagonal};
  std::vector<double> count, left, right;
  std::vector<double> spacings;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto w = microscopic_window(sample_ensemble(spec, i), 0.0, R);
    CHECK(w.config.carrier() == Window::centered(R));
    CHECK(w.density_used > 0.0);
    count.push_back(static_cast<double>(w.config.size()));
    left.push_back(discrepancy(w.config, Window(-R, 0)));
    right.push_back(discrepancy(w.config, Window(0, R)));
    const auto& p = w.config.values();
    for (std::size_t k = 1; k < p.size(); ++k) spacings.push_back(p[k] - p[k - 1]);
  }
  const auto m = mean_stderr(count);
  // The density estimate carries a small bias of its own, hence the extra 0.1.
  CHECK(std::abs(m.mean - 2.0 * R) < 4.0 * m.stderr_ + 0.1);
  const auto l = mean_stderr(left), r = mean_stderr(right);
  CHECK(std::abs(l.mean - r.mean) < 4.0 * std::hypot(l.stderr_, r.stderr_));
  // Repulsion: small spacings are much rarer than for Poisson (P(s < 0.1) = 0.095).
  const auto small = std::count_if(spacings.begin(), spacings.end(), [](double s) { return s < 0.1; });
  CHECK(static_cast<double>(small) / static_cast<double>(spacings.size()) < 0.01);
  CHECK_THROWS_AS(microscopic_window(sample_ensemble(spec, 0), 1.4, R), Error);
}

TEST_CASE("KS helpers") {
  Rng rng(71);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(2000), b(2000);
  for (double& x : a) x = u(rng);
  for (double& x : b) x = u(rng);
  const double d1 = ks_statistic(a, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(ks_pvalue(d1, 2000.0) > 0.001);
  CHECK(ks_statistic(a, a) == 0.0);
  CHECK(ks_statistic(std::vector<double>{0.0, 1.0}, std::vector<double>{2.0, 3.0}) == 1.0);
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.2238) == doctest::Approx(0.10).epsilon(1e-3));
  const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(sorted, 0.5) == 2.5);
  CHECK(quantile_sorted(sorted, 1.0) == 4.0);
}
