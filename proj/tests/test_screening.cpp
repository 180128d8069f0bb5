#include <doctest.h>

#include <cmath>
#include <vector>

#include "loggas/energy.hpp"
#include "loggas/error.hpp"
#include "loggas/screening.hpp"
#include "loggas/sampler.hpp"

using namespace loggas;

namespace {

PointConfiguration lattice(int R) {
  std::vector<double> p;
  for (int k = -R; k < R; ++k) p.push_back(k + 0.5);
  return PointConfiguration(p, Window::centered(R));
}

// Cumulative-mass inversion by bisection.
std::vector<double> offsets_oracle(const std::vector<double>& len, const std::vector<double>& m, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) total += len[i] * m[i];
  auto cum = [&](double x) {
    double acc = 0.0, start = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      acc += m[i] * std::clamp(x - start, 0.0, len[i]);
      start += len[i];
    }
    return acc * static_cast<double>(n) / total;
  };
  double L = 0.0;
  for (double l : len) L += l;
  std::vector<double> out;
  for (std::size_t k = 1; k <= n; ++k) {
    double lo = 0.0, hi = L;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cum(mid) < k - 0.5 ? lo : hi) = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

struct Screened {
  PointConfiguration original;
  ScreenResult result;
};

std::vector<Screened> screened_windows(int R, std::size_t want) {
  ScreeningParams p;
  p.R = R;
  const EnsembleSpec spec{256, 2.0, 404, SamplerId::Tridiagonal};
  Rng rng(405);
  std::vector<Screened> out;
  for (std::uint64_t i = 0; out.size() < want && i < 200; ++i) {
    const auto w = microscopic_window(sample_ensemble(spec, i), 0.0, R).config;
    if (!clearance_ok(w, p)) continue;
    try {
      out.push_back({w, screen(w, p, rng, 1e-7)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval) throw;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("parameter validation") {
  ScreeningParams p;
  CHECK_NOTHROW(p.validate());
  p.s = 0.3;
  CHECK_THROWS_AS(p.validate(), Error);
  p.s = 0.125;
  p.R = 8;  // sR = 1
  CHECK_THROWS_AS(p.validate(), Error);
  p.R = 16;
  CHECK(p.r_old() == 14.0);
  CHECK_THROWS_AS(check_preconditions(lattice(8), p, 1e-7), Error);
}

TEST_CASE("clearance around the Old boundary") {
  ScreeningParams p;
  p.R = 16;
  CHECK(clearance_ok(lattice(16), p));
  std::vector<double> pts(lattice(16).values());
  pts[1] = -14.05;
  CHECK_FALSE(clearance_ok(PointConfiguration(pts, Window::centered(16)), p));
  pts[1] = -14.11;
  CHECK(clearance_ok(PointConfiguration(pts, Window::centered(16)), p));
}

TEST_CASE("preconditions and ell on the lattice") {
  ScreeningParams p;
  p.R = 16;
  const auto c = lattice(16);
  const auto pre = check_preconditions(c, p, 1e-8);
  CHECK(pre.m_scr >= 0.0);
  CHECK(pre.e_scr >= 0.0);
  CHECK(pre.passed());
  const auto ell = choose_ell(c, p, 1e-8);
  const double base = p.s * p.s * p.R;
  CHECK(ell.ell >= base);
  CHECK(ell.ell <= 2.0 * base + 1e-12);
  CHECK(ell.line_energy >= 0.0);
}

TEST_CASE("quantile offsets") {
  CHECK(quantile_offsets({1.0, 1.0}, {1.0, 1.0}, 2) == std::vector<double>{0.5, 1.5});
  const auto o = quantile_offsets({1.0, 1.0}, {0.5, 1.5}, 2);
  CHECK(o[0] == doctest::Approx(1.0));
  CHECK(o[1] == doctest::Approx(1.0 + 1.0 / 1.5));
  CHECK(quantile_offsets({1.0}, {1.0}, 0).empty());
  CHECK_THROWS_AS(quantile_offsets({1.0}, {1.0, 1.0}, 1), Error);
  Rng rng(7);
  std::uniform_real_distribution<double> ul(0.3, 1.5), um(0.6, 1.4);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> len(5), m(5);
    for (double& x : len) x = ul(rng);
    for (double& x : m) x = um(rng);
    const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
    const auto got = quantile_offsets(len, m, n);
    const auto want = offsets_oracle(len, m, n);
    REQUIRE(got.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("regular input lands on the ideal positions") {
  ScreeningParams p;
  p.R = 16;
  Rng rng(8);
  const auto r = screen(lattice(16), p, rng, 1e-8);
  const auto& z = r.screened.values();
  REQUIRE(z.size() == 32);
  for (int k = 1; k <= 2; ++k) {
    CHECK(std::abs(z[k - 1] - (-16.0 + k - 0.5)) <= p.eta / 4.0 + 0.05);
    CHECK(std::abs(z[32 - k] - (16.0 - k + 0.5)) <= p.eta / 4.0 + 0.05);
  }
  for (const auto& h : r.report.mi.intervals) CHECK(std::abs(h.m - 1.0) < 0.05);
}

TEST_CASE("screening invariants on sampled windows") {
  ScreeningParams p;
  p.R = 16;
  const auto ws = screened_windows(16, 4);
  REQUIRE(ws.size() >= 2);
  const double rp = p.r_old();
  for (const auto& w : ws) {
    const auto& out = w.result.screened;
    CHECK(out.size() == 32);
    CHECK(restrict(out, Window(-rp, rp)).values() == restrict(w.original, Window(-rp, rp)).values());
    CHECK(out.values().front() >= -16.0 + 0.1);
    CHECK(out.values().back() <= 16.0 - 0.1);
    CHECK(truncation_error(out, p.eta / 2, out.carrier()) <= truncation_error(w.original, p.eta / 2, out.carrier()));
    // Every new point sits within eta/4 of its centre.
    const auto fresh_l = restrict(out, Window(-16, -rp));
    const auto fresh_r = restrict(out, Window(rp, 16));
    std::vector<double> fresh(fresh_l.values());
    fresh.insert(fresh.end(), fresh_r.values().begin(), fresh_r.values().end());
    std::vector<double> centers(w.result.centers);
    std::sort(centers.begin(), centers.end());
    REQUIRE(fresh.size() == centers.size());
    for (std::size_t i = 0; i < fresh.size(); ++i) CHECK(std::abs(fresh[i] - centers[i]) <= p.eta / 4 + 1e-12);
    // Flux bookkeeping: masses plus the kept points account for 2R up to less than 1.
    const auto& mi = w.result.report.mi;
    CHECK(std::abs(mi.mass() + static_cast<double>(mi.n_old) - 32.0) < 1.0);
    for (const auto& h : mi.intervals) {
      CHECK(std::abs(h.m - 1.0) < 0.5);
      CHECK(h.H.length() >= w.result.report.ell / 2 - 1e-12);
      CHECK(h.H.length() <= 2 * w.result.report.ell + 1e-12);
    }
    CHECK(w.result.report.k_max_left + w.result.report.k_max_right + mi.n_old == 32);
    CHECK_FALSE(to_json(w.result.report).at("claim_checks").empty());
  }
}

TEST_CASE("failed preconditions raise") {
  ScreeningParams p;
  p.R = 16;
  std::vector<double> pts(lattice(16).values());
  pts[1] = -14.02;
  Rng rng(1);
  try {
    screen(PointConfiguration(pts, Window::centered(16)), p, rng, 1e-7);
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
  p.M = 1e-9;
  CHECK_THROWS_AS(screen(lattice(16), p, rng, 1e-7), Error);
}

TEST_CASE("screening energy error term is linear in s") {
  ScreeningParams p;
  p.R = 16;
  p.M = 5.0;
  const auto c = lattice(16);
  const auto a = screening_energy_check(c, c, p, 1e-6, 10.0);
  p.s = 0.1875;
  const auto b = screening_energy_check(c, c, p, 1e-6, 10.0);
  CHECK(b.err_term == doctest::Approx(1.5 * a.err_term).epsilon(1e-14));
  CHECK(a.err_term == doctest::Approx(10.0 * std::abs(std::log(0.05)) * 5.0 * 0.125 * 16).epsilon(1e-14));
  CHECK(a.lhs >= 0.0);
  CHECK(a.lhs <= a.rhs);
}
