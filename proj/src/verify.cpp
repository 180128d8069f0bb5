#include "loggas/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "loggas/calibration.hpp"
#include "loggas/energy.hpp"
#include "loggas/error.hpp"
#include "loggas/field.hpp"
#include "loggas/numeric.hpp"
#include "loggas/quadrature.hpp"
#include "loggas/sampler.hpp"
#include "loggas/screening.hpp"
#include "loggas/stats.hpp"
#include "loggas/transport.hpp"

namespace loggas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream families, so that checks never share random numbers.
enum Stream : std::uint64_t {
  kCertPairs = 1,
  kFluxBoxes = 2,
  kScreenBeta2 = 3,
  kScreenJitter = 4,
  kMcmc = 5,
  kVarianceBeta2 = 6,
  kVariancePoisson = 7,
  kGainPoisson = 8,
  kGainBeta4 = 9,
  kTileLattice = 10,
};

std::uint64_t family_seed(const VerifyOptions& opt, Stream s) { return stream_seed(opt.seed, s); }

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

struct CertStats {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t bf_violations = 0;
  double min_slack = kInf;
  double max_bf = -kInf;
};

struct GainFixture {
  std::vector<LabeledTuple> beta4;
  std::vector<LabeledTuple> poisson;
  Coupling coupling;
  std::size_t attempts = 0;
};

// Lazily built data shared between checks of one run.
struct Context {
  const VerifyOptions& opt;
  std::optional<CertStats> cert;
  std::optional<GainFixture> gain;

  const CertStats& certificates() {
    if (cert) return *cert;
    CertStats st;
    const int Rs[] = {2, 4, 8, 16};
    const std::size_t per_R = 2500;
    Rng rng = make_stream(family_seed(opt, kCertPairs), 0);
    for (int R : Rs) {
      const Window w = Window::centered(R);
      for (std::size_t k = 0; k < per_R; ++k) {
        const auto x0 = label(sample_bernoulli(2 * R, w, rng));
        const auto x1 = label(sample_bernoulli(2 * R, w, rng));
        const auto c = convexity_certificate(x0, x1, R);
        ++st.pairs;
        if (!c.holds(1e-9)) ++st.violations;
        if (c.bf > 1e-10) ++st.bf_violations;
        st.min_slack = std::min(st.min_slack, c.slack);
        st.max_bf = std::max(st.max_bf, c.bf);
      }
    }
    cert = st;
    return *cert;
  }

  const GainFixture& gain_fixture() {
    if (gain) return *gain;
    GainFixture g;
    const int R = 16;
    const std::size_t pairs = opt.fast ? 100 : 200;
    ScreeningParams p;
    p.R = R;
    p.s = 0.125;
    p.eta = 0.05;
    const EnsembleSpec spec{256, 4.0, family_seed(opt, kGainBeta4), SamplerId::Tridiagonal};
    Rng jitter = make_stream(family_seed(opt, kGainBeta4), 1u << 20);
    for (std::uint64_t i = 0; g.beta4.size() < pairs && i < 20 * pairs; ++i) {
      ++g.attempts;
      const auto w = microscopic_window(sample_ensemble(spec, i), 0.0, R);
      if (w.config.size() < static_cast<std::size_t>(2 * R - 8) || !clearance_ok(w.config, p)) continue;
      try {
        g.beta4.push_back(label(screen(w.config, p, jitter, opt.tol).screened));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval &&
            e.code() != ErrorCode::DuplicatePoint) {
          throw;
        }
      }
    }
    Rng rng = make_stream(family_seed(opt, kGainPoisson), 0);
    for (std::size_t k = 0; k < g.beta4.size(); ++k) {
      g.poisson.push_back(label(sample_bernoulli(2 * R, Window::centered(R), rng)));
    }
    g.coupling = assignment_coupling(g.beta4, g.poisson);
    gain = std::move(g);
    return *gain;
  }
};

CheckResult check_convexity(Context& ctx) {
  const auto& st = ctx.certificates();
  CheckResult r;
  r.lhs = st.min_slack;
  r.relation = ">=";
  r.rhs = 0.0;
  r.tolerance = 1e-9;
  r.pass = st.violations == 0 && st.min_slack >= -1e-9;
  r.detail = std::to_string(st.pairs) + " pairs over 2R in {4,8,16,32}, " + std::to_string(st.violations) +
             " violations";
  return r;
}

CheckResult check_bf(Context& ctx) {
  const auto& st = ctx.certificates();
  CheckResult r;
  r.lhs = st.max_bf;
  r.rhs = 0.0;
  r.tolerance = 1e-10;
  r.pass = st.bf_violations == 0;
  r.detail = std::to_string(st.pairs) + " pairs, " + std::to_string(st.bf_violations) + " with BF > 1e-10";
  return r;
}

CheckResult check_convlog(Context&) {
  double worst = kInf;
  std::size_t bad = 0;
  for (int i = 1; i <= 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      const double s = convlog_slack(i / 10.0, j / 10.0);
      worst = std::min(worst, s);
      if (s < 0.0) ++bad;
    }
  }
  // -log 2 <= -(log 3)/2 - 1/20 at x = 1, y = 3.
  const double worked = convlog_slack(1.0, 3.0);
  const double direct = -(std::log(3.0) / 2.0) - 0.05 + std::log(2.0);
  const bool worked_ok = worked > 0.0 && std::abs(worked - direct) < 1e-15;
  CheckResult r;
  r.lhs = worst;
  r.relation = ">=";
  r.rhs = 0.0;
  r.pass = bad == 0 && worked_ok;
  r.detail = "10^4 grid points, " + std::to_string(bad) + " negative; x=1,y=3 slack " + fmt("%.12f", worked) +
             " (direct " + fmt("%.12f", direct) + ")";
  return r;
}

double rect_distance(double p, double xlo, double xhi, double ylo, double yhi) {
  const bool inside = p > xlo && p < xhi && ylo < 0.0 && yhi > 0.0;
  if (inside) return std::min({p - xlo, xhi - p, -ylo, yhi});
  const double dx = std::max({xlo - p, 0.0, p - xhi});
  const double dy = std::max({ylo, 0.0, -yhi});
  return std::hypot(dx, dy);
}

CheckResult check_flux(Context& ctx) {
  const double tol = ctx.opt.tol;
  const double eta = 0.1;
  const Window carrier = Window::centered(3.0);
  Rng rng = make_stream(family_seed(ctx.opt, kFluxBoxes), 0);
  std::uniform_int_distribution<int> npts(1, 6);
  std::uniform_real_distribution<double> ux(-5.0, 5.0);
  std::uniform_real_distribution<double> uy(-2.0, 0.5);
  std::uniform_real_distribution<double> uh(0.3, 2.0);
  double worst = 0.0;
  std::size_t crossing = 0;
  for (int k = 0; k < 50; ++k) {
    const auto c = sample_bernoulli(npts(rng), carrier, rng);
    const auto f = FieldEvaluator::local(c, eta);
    double xlo, xhi, ylo, yhi;
    for (;;) {
      xlo = ux(rng);
      xhi = ux(rng);
      if (xlo > xhi) std::swap(xlo, xhi);
      ylo = uy(rng);
      yhi = ylo + uh(rng);
      if (xhi - xlo < 0.5) continue;
      bool clear = true;
      for (double p : c.values()) clear = clear && rect_distance(p, xlo, xhi, ylo, yhi) > eta;
      if (clear) break;
    }
    double discr = 0.0;
    if (ylo < 0.0 && yhi > 0.0) {
      ++crossing;
      for (double p : c.values()) discr += (p > xlo && p < xhi) ? 1.0 : 0.0;
      if (const auto in = intersect(carrier, Window(xlo, xhi))) discr -= in->length();
    }
    const double fl = box_flux(f, xlo, xhi, ylo, yhi, tol);
    worst = std::max(worst, std::abs(fl + 2.0 * std::numbers::pi * discr));
  }
  CheckResult r;
  r.lhs = worst;
  r.rhs = 10.0 * tol;
  r.pass = worst <= r.rhs;
  r.detail = "max |flux + 2 pi Discr| over 50 boxes (" + std::to_string(crossing) + " crossing the axis)";
  return r;
}

CheckResult check_monotonicity(Context&) {
  const std::vector<std::pair<std::vector<double>, double>> fixtures = {
      {{-0.5, 0.5}, 1.0},
      {{-0.9, 0.2}, 1.0},
      {{-1.3, -0.1, 0.6, 1.7}, 2.0},
      {{-2.6, -1.2, -0.4, 0.5, 1.5, 2.7}, 3.0},
      {{-3.4, -2.6, -1.45, -0.6, 0.55, 1.4, 2.6, 3.5}, 4.0},
  };
  const double etas[] = {0.2, 0.1, 0.05, 0.025};
  const double qtol = 1e-10;
  double worst_step = -kInf;  // max of gap_{k+1} - gap_k, must be < 0
  double min_gap = kInf;
  for (const auto& [pts, R] : fixtures) {
    const PointConfiguration c(pts, Window::centered(R));
    const double wint = intrinsic_energy(c).total;
    double prev = kInf;
    for (double eta : etas) {
      const double gap = welec_eta(c, eta, std::nullopt, qtol) - wint;
      min_gap = std::min(min_gap, gap);
      if (std::isfinite(prev)) worst_step = std::max(worst_step, gap - prev);
      prev = gap;
    }
  }
  const double fixture = intrinsic_energy(PointConfiguration({-0.5, 0.5}, Window::centered(1.0))).total;
  const double fixture_err = std::abs(fixture - (-3.7260924347));
  CheckResult r;
  r.lhs = worst_step;
  r.relation = "<";
  r.rhs = 0.0;
  r.tolerance = 0.0;
  r.pass = worst_step < 0.0 && min_gap > 0.0 && fixture_err < 1e-9;
  r.detail = "largest step of W_eta - W_int as eta halves (min gap " + fmt("%.3e", min_gap) +
             "); W_int({-0.5,0.5}) = " + fmt("%.10f", fixture);
  return r;
}

CheckResult check_closed_forms(Context& ctx) {
  quad::Options o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-12;
  double worst = 0.0;
  for (double R : {1.0, 2.0, 4.0}) {
    for (int k = 0; k <= 8; ++k) {
      const double t = -R + k * R / 4.0;
      const double bp[] = {t};
      const double q = quad::integrate([&](double s) { return std::log(std::abs(t - s)); }, -R, R, o, bp).value;
      worst = std::max(worst, std::abs(q - background_potential(t, R)));
    }
    quad::Options inner = o;
    inner.abs_tol = 1e-13;
    auto row = [&](double x) {
      const double bp[] = {x};
      return quad::integrate([&](double y) { return -std::log(std::abs(x - y)); }, -R, R, inner, bp).value;
    };
    quad::Options outer = o;
    outer.abs_tol = 1e-11;
    const double q = quad::integrate(row, -R, R, outer).value;
    worst = std::max(worst, std::abs(q - background_const(R)));
  }
  const double v10 = background_potential(0.0, 1.0);
  CheckResult r;
  r.lhs = worst;
  r.rhs = 1e-8;
  r.pass = worst <= 1e-8 && std::abs(v10 + 2.0) < 1e-14;
  r.detail = "max |closed - quadrature| for V_R, const_R, R in {1,2,4}; V_1(0) = " + fmt("%.15f", v10);
  (void)ctx;
  return r;
}

CheckResult check_screening(Context& ctx) {
  const int target = ctx.opt.fast ? 20 : 50;
  const int pool_size = ctx.opt.fast ? 30 : 60;
  ScreeningParams p;
  p.R = 32;
  p.s = 0.125;
  p.eta = 0.05;
  const double R = p.R;
  const double rp = p.r_old();
  const EnsembleSpec spec{512, 2.0, family_seed(ctx.opt, kScreenBeta2), SamplerId::Tridiagonal};
  Rng jitter = make_stream(family_seed(ctx.opt, kScreenJitter), 0);

  std::size_t draws = 0, no_clearance = 0, over_M = 0, degenerate = 0;
  std::uint64_t next = 0;
  auto next_candidate = [&]() -> std::optional<PointConfiguration> {
    while (next < 4000) {
      ++draws;
      const auto w = microscopic_window(sample_ensemble(spec, next++), 0.0, p.R);
      if (clearance_ok(w.config, p)) return w.config;
      ++no_clearance;
    }
    return std::nullopt;
  };
  // M is the 95th percentile of the boundary energy over a pool of candidates.
  std::vector<PointConfiguration> pool;
  std::vector<double> m_scr;
  while (static_cast<int>(pool.size()) < pool_size) {
    auto c = next_candidate();
    if (!c) break;
    m_scr.push_back(check_preconditions(*c, p, ctx.opt.tol * 100).m_scr);
    pool.push_back(std::move(*c));
  }
  std::vector<double> sorted = m_scr;
  std::sort(sorted.begin(), sorted.end());
  p.M = quantile_sorted(sorted, 0.95);

  int done = 0;
  std::size_t exact_fail = 0, claim_fail = 0;
  double worst_ratio = 0.0;
  std::string worst_claim;
  std::size_t pool_i = 0;
  while (done < target) {
    std::optional<PointConfiguration> c;
    if (pool_i < pool.size()) {
      c = pool[pool_i++];
    } else {
      c = next_candidate();
    }
    if (!c) break;
    ScreenResult res{*c, {}, {}};
    try {
      res = screen(*c, p, jitter, ctx.opt.tol * 100);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PreconditionViolated) {
        ++over_M;
        continue;
      }
      if (e.code() == ErrorCode::DegenerateInterval) {
        ++degenerate;
        continue;
      }
      throw;
    }
    ++done;
    const auto& out = res.screened;
    bool ok = out.size() == static_cast<std::size_t>(2 * p.R);
    const Window old(-rp, rp);
    ok = ok && restrict(out, old).values() == restrict(*c, old).values();
    for (double x : out.values()) ok = ok && R - std::abs(x) >= 0.1;
    std::vector<double> fresh;
    for (double x : out.values()) {
      if (std::abs(x) > rp) fresh.push_back(x);
    }
    std::vector<double> centers = res.centers;
    std::sort(centers.begin(), centers.end());
    ok = ok && fresh.size() == centers.size();
    for (std::size_t k = 0; ok && k < fresh.size(); ++k) {
      ok = std::abs(fresh[k] - centers[k]) <= p.eta / 4.0 + 1e-12;
    }
    const Window all = Window::centered(R);
    ok = ok && truncation_error(out, p.eta / 2.0, all) <= truncation_error(*c, p.eta / 2.0, all);
    if (!ok) ++exact_fail;
    if (!res.report.claims_pass()) ++claim_fail;
    for (const auto& cl : res.report.claim_checks) {
      const double ratio = cl.rhs > 0.0 ? cl.lhs / cl.rhs : (cl.lhs > 0.0 ? kInf : 0.0);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_claim = cl.name;
      }
    }
  }
  CheckResult r;
  r.lhs = worst_ratio;
  r.rhs = 1.0;
  r.pass = done == target && exact_fail == 0 && claim_fail == 0;
  r.detail = std::to_string(done) + "/" + std::to_string(target) + " screened from " + std::to_string(draws) +
             " windows (no clearance " + std::to_string(no_clearance) + ", over M " + std::to_string(over_M) +
             ", degenerate " + std::to_string(degenerate) + "); M = " + fmt("%.3f", p.M) + "; exact failures " +
             std::to_string(exact_fail) + ", claim failures " + std::to_string(claim_fail) +
             "; lhs = worst claim ratio (" + worst_claim + ")";
  return r;
}

CheckResult check_samplers(Context& ctx) {
  const std::size_t draws = 10000;
  double worst = 0.0;
  std::string per_beta;
  for (double beta : {1.0, 2.0, 4.0}) {
    const EnsembleSpec spec{8, beta, stream_seed(family_seed(ctx.opt, kMcmc), static_cast<std::uint64_t>(beta)),
                            SamplerId::Tridiagonal};
    std::vector<double> a, b;
    for (const auto& s : sample_ensembles(spec, draws, ctx.opt.threads)) a.insert(a.end(), s.points.begin(), s.points.end());
    Rng rng = make_stream(spec.seed, 1u << 30);
    for (const auto& s : mcmc_chain(spec, draws, 2000, rng)) b.insert(b.end(), s.points.begin(), s.points.end());
    const double d = ks_statistic(a, b);
    worst = std::max(worst, d);
    per_beta += (per_beta.empty() ? "" : ", ") + fmt("beta=%g", beta) + fmt(": %.4f", d);
  }
  CheckResult r;
  r.lhs = worst;
  r.relation = "<";
  r.rhs = 0.05;
  r.pass = worst < 0.05;
  r.detail = "two-sample KS, N=8, 10^4 draws each (" + per_beta + ")";
  return r;
}

CheckResult check_variance(Context& ctx) {
  const std::size_t draws = ctx.opt.fast ? 150 : 500;
  const int Rs[] = {4, 8, 16, 32};
  const EnsembleSpec spec{512, 2.0, family_seed(ctx.opt, kVarianceBeta2), SamplerId::Tridiagonal};
  const auto samples = sample_ensembles(spec, draws, ctx.opt.threads);
  // One pooled density at the centre for every draw; a per-draw estimate
  // adds its own noise to the counts.
  std::vector<double> pooled;
  for (const auto& s : samples) pooled.insert(pooled.end(), s.points.begin(), s.points.end());
  const double rho = local_density(pooled, 0.0);
  std::vector<PointConfiguration> windows;
  for (const auto& s : samples) windows.push_back(microscopic_window(s, 0.0, 32, rho).config);
  const auto curve = discrepancy_variance_curve(windows, Rs);
  const double z = min_decrease_z(curve);

  const EnsembleSpec pspec{512, 1.0, family_seed(ctx.opt, kVariancePoisson), SamplerId::Poisson};
  std::vector<PointConfiguration> pw;
  for (const auto& s : sample_ensembles(pspec, draws, ctx.opt.threads)) {
    pw.push_back(microscopic_window(s, 0.0, 32, 1.0).config);
  }
  const auto pcurve = discrepancy_variance_curve(pw, Rs);
  // Four simultaneous intervals: Bonferroni at overall 95%.
  const double zc = 2.498;
  bool poisson_ok = true;
  std::string detail = "beta=2:";
  for (const auto& v : curve) detail += fmt(" %.4f", v.value) + fmt("(%.4f)", v.stderr_);
  detail += "; Poisson:";
  for (const auto& v : pcurve) {
    poisson_ok = poisson_ok && std::abs(v.value - 1.0) <= zc * v.stderr_;
    detail += fmt(" %.3f", v.value) + fmt("(%.3f)", v.stderr_);
  }
  CheckResult r;
  r.lhs = z;
  r.relation = ">";
  r.rhs = 1.645;
  r.pass = z > 1.645 && poisson_ok;
  r.detail = "min one-sided z of successive decreases, " + std::to_string(draws) + " draws; " + detail +
             (poisson_ok ? "" : " [Poisson control outside CI]");
  return r;
}

CheckResult check_gain(Context& ctx) {
  const auto& g = ctx.gain_fixture();
  const int R = 16;
  GainOptions go;
  go.flip_sign = ctx.opt.flip_gain_sign;
  const auto est = gain_estimator(g.beta4, g.poisson, g.coupling, R, go);
  Coupling self;
  for (std::size_t i = 0; i < g.beta4.size(); ++i) self.pairs.push_back({i, i, 1.0 / g.beta4.size()});
  const auto zero = gain_estimator(g.beta4, g.beta4, self, R, go);
  CheckResult r;
  r.lhs = est.ci_low();
  r.relation = ">";
  r.rhs = 0.0;
  r.pass = est.ci_low() > 0.0 && zero.value == 0.0;
  r.detail = std::to_string(est.per_pair.size()) + " coupled pairs (screened beta=4 vs Poisson with 2R points, " +
             std::to_string(g.attempts) + " windows drawn); gain_R/R = " + fmt("%.4f", est.value) + " +- " +
             fmt("%.4f", est.stderr_) + ", 95% CI low end as lhs; max |S| " + std::to_string(est.shift_used) +
             "; self-coupling " + fmt("%g", zero.value);
  return r;
}

CheckResult check_sandwich(Context& ctx) {
  const auto& g = ctx.gain_fixture();
  const int R = 16;
  double worst = kInf;
  std::size_t bad = 0;
  for (const auto& pr : g.coupling.pairs) {
    const auto s = discrepancy_sandwich(g.beta4[pr.from], g.poisson[pr.to], R);
    worst = std::min(worst, s.worst_slack);
    if (!s.holds()) ++bad;
  }
  CheckResult r;
  r.lhs = worst;
  r.relation = ">=";
  r.rhs = 0.0;
  r.pass = bad == 0 && !g.coupling.pairs.empty();
  r.detail = "min over pairs and integer r of max(|D0|,|D1|) - |Dh|; " + std::to_string(g.coupling.pairs.size()) +
             " pairs, " + std::to_string(bad) + " violations";
  return r;
}

CheckResult check_entropy_toy(Context&) {
  std::vector<double> ts;
  for (int k = 0; k <= 16; ++k) ts.push_back(k / 16.0);
  const auto curve = gaussian_entropy_convexity_toy(0.0, 1.0, 2.0, 3.0, ts);
  const double slack = midpoint_convexity_slack(curve);
  const auto three = gaussian_entropy_convexity_toy(0.0, 1.0, 2.0, 3.0, std::vector<double>{0.0, 0.5, 1.0});
  // sigma_{1/2} = 2: -log 2 against (-log 1 - log 3)/2.
  const double closed = std::log(2.0) - 0.5 * std::log(3.0);
  const double three_slack = midpoint_convexity_slack(three);
  const auto flat = gaussian_entropy_convexity_toy(-1.0, 2.0, 5.0, 2.0, ts);
  bool flat_ok = true;
  for (const auto& e : flat) flat_ok = flat_ok && e.neg_entropy == flat.front().neg_entropy;
  CheckResult r;
  r.lhs = slack;
  r.relation = ">";
  r.rhs = 0.0;
  r.pass = slack > 0.0 && std::abs(three_slack - closed) < 1e-15 && flat_ok;
  r.detail = "min midpoint slack on a 17-point grid, s0=1, s1=3; three-point slack " + fmt("%.15f", three_slack) +
             " vs closed form " + fmt("%.15f", closed) + (flat_ok ? "; equal widths flat" : "; equal widths NOT flat");
  return r;
}

CheckResult check_tiles(Context& ctx) {
  const int R = 16;
  const std::size_t n_pairs = 8;
  ScreeningParams p;
  p.R = R;
  p.s = 0.125;
  p.eta = 0.05;
  Rng rng = make_stream(family_seed(ctx.opt, kTileLattice), 0);
  std::uniform_real_distribution<double> jit(-0.25, 0.25);
  std::vector<PointConfiguration> screened;
  std::size_t tries = 0;
  while (screened.size() < 2 * n_pairs && tries < 200) {
    ++tries;
    std::vector<double> pts;
    for (int k = -R; k < R; ++k) pts.push_back(k + 0.5 + jit(rng));
    const PointConfiguration c(pts, Window::centered(R));
    try {
      screened.push_back(screen(c, p, rng, ctx.opt.tol * 100).screened);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval) throw;
    }
  }
  // From d = 4 on the dipole term dominates; closer tiles with a small
  // dipole product are still dominated by the quadrupole correction.
  const int ds[] = {4, 6, 8, 12, 16, 24, 32, 48, 64};
  std::vector<double> lx, ly;
  std::size_t over_bound = 0;
  for (int d : ds) {
    double mean_abs = 0.0;
    for (std::size_t k = 0; k < n_pairs; ++k) {
      const auto ca = screened[2 * k];
      const auto cb = translate(screened[2 * k + 1], 2.0 * R * d);
      const auto ti = pairwise_interaction_bound(ca, 0, cb, d, R);
      mean_abs += std::abs(ti.interaction) / n_pairs;
      if (std::abs(ti.interaction) > ti.bound) ++over_bound;
    }
    lx.push_back(std::log(static_cast<double>(d)));
    ly.push_back(std::log(mean_abs));
  }
  const auto fit = linear_fit(lx, ly);
  CheckResult r;
  r.lhs = std::abs(fit.slope + 2.0);
  r.rhs = 0.3;
  r.pass = screened.size() == 2 * n_pairs && r.lhs <= 0.3;
  r.detail = "log-log slope " + fmt("%.3f", fit.slope) + " +- " + fmt("%.3f", fit.slope_stderr) + " over d in 4..64, " +
             std::to_string(n_pairs) + " screened jittered-lattice pairs at R=16; lhs = |slope + 2|; " +
             std::to_string(over_bound) + " of " + std::to_string(n_pairs * std::size(ds)) +
             " interactions above the calibrated bound";
  return r;
}

using CheckFn = CheckResult (*)(Context&);

struct Entry {
  const char* name;
  CheckFn fn;
};

constexpr Entry kChecks[kCheckCount] = {
    {"convexity-certificate", check_convexity},
    {"background-field-nonpositive", check_bf},
    {"scalar-log-convexity", check_convlog},
    {"flux-identity", check_flux},
    {"welec-monotonicity", check_monotonicity},
    {"closed-forms-vs-quadrature", check_closed_forms},
    {"screening-contract", check_screening},
    {"sampler-cross-validation", check_samplers},
    {"discrepancy-variance-decay", check_variance},
    {"gain-positivity", check_gain},
    {"interpolation-discrepancy-sandwich", check_sandwich},
    {"gaussian-entropy-toy", check_entropy_toy},
    {"tile-interaction-decay", check_tiles},
};

CheckResult run_in(Context& ctx, int id) {
  if (id < 1 || id > kCheckCount) throw Error(ErrorCode::InvalidArgument, "no check " + std::to_string(id));
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = kChecks[id - 1].fn(ctx);
  } catch (const Error& e) {
    r.pass = false;
    r.lhs = r.rhs = std::numeric_limits<double>::quiet_NaN();
    r.detail = std::string("error: ") + e.what();
  }
  r.id = id;
  r.name = kChecks[id - 1].name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

std::string check_name(int id) {
  if (id < 1 || id > kCheckCount) throw Error(ErrorCode::InvalidArgument, "no check " + std::to_string(id));
  return kChecks[id - 1].name;
}

CheckResult run_check(int id, const VerifyOptions& opt) {
  Context ctx{opt, {}, {}};
  return run_in(ctx, id);
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerifyReport run_verification(const VerifyOptions& opt) {
  Context ctx{opt, {}, {}};
  VerifyReport rep;
  for (int id = 1; id <= kCheckCount; ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    rep.checks.push_back(run_in(ctx, id));
  }
  return rep;
}

nlohmann::json to_json(const CheckResult& c) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"id", c.id},           {"name", c.name},   {"lhs", num(c.lhs)},
          {"relation", c.relation}, {"rhs", num(c.rhs)}, {"tolerance", c.tolerance},
          {"pass", c.pass},       {"detail", c.detail}, {"seconds", c.seconds}};
}

nlohmann::json to_json(const VerifyReport& r, const VerifyOptions& opt) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"format", "loggas-verify-report"},
          {"code_version", LOGGAS_VERSION},
          {"seed", opt.seed},
          {"fast", opt.fast},
          {"threads", opt.threads},
          {"flip_gain_sign", opt.flip_gain_sign},
          {"passed", r.passed()},
          {"checks", checks}};
}

std::string format_line(const CheckResult& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "[%s] %2d %-36s lhs=%-12.6g %-2s rhs=%-12.6g tol=%-8.2g (%.1f s) ",
                c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.lhs, c.relation.c_str(), c.rhs, c.tolerance,
                c.seconds);
  return buf + c.detail;
}

}  // namespace loggas
