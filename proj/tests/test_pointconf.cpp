#include <doctest.h>

#include <cmath>
#include <vector>

#include "loggas/error.hpp"
#include "loggas/pointconf.hpp"
#include "loggas/sampler.hpp"

using namespace loggas;

namespace {

PointConfiguration random_config(Rng& rng, double R, std::size_t n) {
  return sample_bernoulli(n, Window::centered(R), rng);
}

std::vector<double> filter(const std::vector<double>& p, double lo, double hi) {
  std::vector<double> out;
  for (double x : p) {
    if (x >= lo && x <= hi) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("window rejects empty or reversed ranges") {
  CHECK_THROWS_AS(Window(1.0, 1.0), Error);
  CHECK_THROWS_AS(Window(2.0, 1.0), Error);
  CHECK(Window(-1.0, 3.0).length() == 4.0);
  CHECK_FALSE(intersect(Window(0, 1), Window(2, 3)).has_value());
}

TEST_CASE("configuration sorts on construction and rejects points outside the carrier") {
  const PointConfiguration c({0.9, -1.5, 0.2}, Window::centered(2));
  CHECK(c.values() == std::vector<double>{-1.5, 0.2, 0.9});
  try {
    PointConfiguration({3.0}, Window::centered(2));
    FAIL("expected OutOfWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfWindow);
  }
  CHECK_THROWS_AS(PointConfiguration::from_sorted({0.5, 0.1}, Window::centered(1)), Error);
}

TEST_CASE("restrict") {
  const PointConfiguration c({-1.5, 0.2, 0.9}, Window::centered(2));
  const auto r = restrict(c, Window(0, 1));
  CHECK(r.values() == std::vector<double>{0.2, 0.9});
  CHECK(r.carrier() == Window(0, 1));
  CHECK(restrict(PointConfiguration({}, Window::centered(1)), Window(-0.5, 0.5)).empty());
  // Closed intervals: boundary points are kept.
  CHECK(restrict(c, Window(0.2, 0.9)).size() == 2);
}

TEST_CASE("restrict composes as restriction to the intersection") {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    const auto c = random_config(rng, 4, 12);
    double a = u(rng), b = u(rng), e = u(rng), d = u(rng);
    if (a > b) std::swap(a, b);
    if (e > d) std::swap(e, d);
    if (b - a < 1e-9 || d - e < 1e-9) continue;
    const Window w1(a, b), w2(e, d);
    const auto both = intersect(w1, w2);
    if (!both) continue;
    CHECK(restrict(restrict(c, w1), w2).values() == restrict(c, *both).values());
    // Oracle: direct double filter.
    CHECK(restrict(c, *both).values() == filter(filter(c.values(), a, b), e, d));
  }
}

TEST_CASE("translate") {
  const PointConfiguration c({0.5, 1.5}, Window(0, 2));
  const auto t = translate(c, 1.0);
  CHECK(t.values() == std::vector<double>{-0.5, 0.5});
  CHECK(t.carrier() == Window(-1, 1));
  CHECK(translate(c, 0.0) == c);
  Rng rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const auto r = random_config(rng, 3, 7);
    const double a = std::round(u(rng) * 8) / 8, b = std::round(u(rng) * 8) / 8;
    const auto twice = translate(translate(r, a), b);
    const auto once = translate(r, a + b);
    CHECK(twice.carrier() == once.carrier());
    REQUIRE(twice.size() == once.size());
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-14));
    const Window w(-1.0, 2.0);
    CHECK(translate(restrict(r, w), a).values() == restrict(translate(r, a), w.shifted(a)).values());
  }
}

TEST_CASE("discrepancy") {
  CHECK(discrepancy(PointConfiguration({0.5, 1.5, 1.7}, Window(0, 2)), Window(0, 2)) == 1.0);
  Rng rng(5);
  for (int R : {1, 3, 8}) {
    const auto c = random_config(rng, R, 2 * R);
    CHECK(discrepancy(c, Window::centered(R)) == 0.0);
  }
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const auto c = random_config(rng, 5, 9);
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double m = 0.5 * (a + b);
    if (b - a < 1e-6) continue;
    // Additivity over [a, m] and (m, b]; a point exactly at m has probability 0.
    const double split = discrepancy(c, Window(a, m)) + discrepancy(c, Window(m, b));
    CHECK(split == doctest::Approx(discrepancy(c, Window(a, b))).epsilon(1e-12));
  }
}

TEST_CASE("gaps counted from the origin and from the left") {
  const PointConfiguration c({-0.3, 0.2, 1.0}, Window::centered(2));
  const auto g = gaps(c);
  CHECK(g.x(0) == 0.2);
  CHECK(g.origin_gap(0) == doctest::Approx(0.8));
  CHECK(g.origin_gap(-1) == doctest::Approx(0.5));
  CHECK(std::isinf(g.origin_gap(1)));
  CHECK(std::isinf(gaps(PointConfiguration({-0.3, 0.2}, Window::centered(1))).origin_gap(0)));
  CHECK(g.z(1) == -0.3);
  CHECK(g.left_gap(2) == doctest::Approx(0.8));
  CHECK_THROWS_AS(g.x(5), Error);
  CHECK_THROWS_AS(g.left_gap(3), Error);
  try {
    gaps(PointConfiguration({0.1, 0.1}, Window::centered(1)));
    FAIL("expected MultiplePoint");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MultiplePoint);
  }
}

TEST_CASE("gap indexings agree up to the count of negative points") {
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const auto c = random_config(rng, 6, 12);
    const auto g = gaps(c);
    const long neg = static_cast<long>(g.origin_offset());
    double total = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      total += g.left_gap(i);
      // z_i is x_{i - 1 - neg}.
      CHECK(g.left_gap(i) == g.origin_gap(static_cast<long>(i) - 1 - neg));
    }
    CHECK(total == doctest::Approx(c.values().back() - c.values().front()).epsilon(1e-12));
  }
}

TEST_CASE("position after translation") {
  const PointConfiguration c({0.5, 1.5, 2.5, 3.5}, Window(0, 4));
  CHECK(position_after_translation(c, 2.0) == 2);
  CHECK(position_after_translation(c, 0.0) == 0);
  CHECK_THROWS_AS(position_after_translation(c, 3.9), Error);
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto r = random_config(rng, 5, 10);
    const auto g = gaps(r);
    for (long j = -static_cast<long>(g.origin_offset()); g.has_x(j + 1); ++j) {
      const double u = std::nextafter(g.x(j), 1e9);
      CHECK(position_after_translation(r, u) == j + 1);
      const long m = position_after_translation(r, u);
      CHECK(g.x(m) >= u);
      if (g.has_x(m - 1)) CHECK(g.x(m - 1) < u);
    }
  }
}

TEST_CASE("paste") {
  const PointConfiguration one({0.0}, Window::centered(1));
  const std::vector<PointConfiguration> single{one};
  CHECK(paste(single, 1).values() == one.values());
  const std::vector<PointConfiguration> two{one, one};
  const auto p = paste(two, 1);
  CHECK(p.values() == std::vector<double>{-2.0, 0.0});
  CHECK(p.carrier() == Window(-3, 1));
  const std::vector<PointConfiguration> bad{PointConfiguration({0.0}, Window(0, 1))};
  try {
    paste(bad, 1);
    FAIL("expected CarrierMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CarrierMismatch);
  }
  Rng rng(4);
  std::vector<PointConfiguration> cs;
  for (int i = 0; i < 4; ++i) cs.push_back(random_config(rng, 3, 6));
  const auto q = paste(cs, 3);
  CHECK(q.size() == 24);
  for (int i = 0; i < 4; ++i) {
    const Window tile = Window::centered(3).shifted(6.0 * i);
    CHECK(restrict(q, tile).values() == translate(cs[i], 6.0 * i).values());
  }
}

TEST_CASE("translation average keeps unit intensity") {
  Rng rng(9);
  const int R = 4;
  std::size_t count = 0;
  const int draws = 4000;
  for (int k = 0; k < draws; ++k) {
    std::vector<PointConfiguration> tiles;
    for (int i = 0; i < 6; ++i) tiles.push_back(random_config(rng, R, 2 * R));
    const auto tot = paste(tiles, R);
    const auto s = average_translate_sample(tot, R, rng);
    CHECK(s.size() == tot.size());
    count += count_in(s, Window(-20.5, -19.5));
  }
  // Count per draw is at most Binomial(16, 1/8) + Binomial(..); sd below 1.
  const double mean = static_cast<double>(count) / draws;
  CHECK(std::abs(mean - 1.0) < 4.0 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("fluctuation bound") {
  const TestFunction one{[](double) { return 1.0; }, 1.0, 0.0};
  const auto a = fluctuation_bound(one, PointConfiguration({0.5, 1.5}, Window(0, 2)), Window(0, 2));
  CHECK(a.lhs == doctest::Approx(0.0).epsilon(1e-12));
  const TestFunction id{[](double x) { return x; }, 2.0, 1.0};
  const auto b = fluctuation_bound(id, PointConfiguration({0.5, 1.5}, Window(0, 2)), Window(0, 2));
  CHECK(std::abs(b.lhs) < 1e-12);
  CHECK(b.rhs >= 0.0);
}
