#include "loggas/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loggas/error.hpp"

namespace loggas {

std::string to_string(SamplerId id) {
  switch (id) {
    case SamplerId::Tridiagonal: return "tridiagonal";
    case SamplerId::Mcmc: return "mcmc";
    case SamplerId::Poisson: return "poisson";
  }
  return "unknown";
}

SamplerId sampler_from_string(const std::string& s) {
  if (s == "tridiagonal") return SamplerId::Tridiagonal;
  if (s == "mcmc") return SamplerId::Mcmc;
  if (s == "poisson") return SamplerId::Poisson;
  throw Error(ErrorCode::InvalidArgument, "unknown sampler '" + s + "'");
}

void EnsembleSpec::validate() const {
  if (n_particles < 2) throw Error(ErrorCode::InvalidArgument, "need N >= 2");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "need beta > 0");
}

namespace {

// Number of eigenvalues strictly below x.
int sturm_count(std::span<const double> d, std::span<const double> e2, double x) {
  constexpr double tiny = 1e-300;
  int neg = 0;
  double q = d[0] - x;
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++neg;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - x - e2[i - 1] / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++neg;
  }
  return neg;
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                            double tol) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw Error(ErrorCode::SizeMismatch, "off-diagonal must have n-1 entries");
  std::vector<double> e2(off.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  for (std::size_t i = 0; i < off.size(); ++i) e2[i] = off[i] * off[i];
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::EigensolverFailure, "non-finite matrix entries");
  }
  const double pad = 1e-12 * std::max(1.0, hi - lo);
  lo -= pad;
  hi += pad;

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Bracket of the (k+1)-th smallest eigenvalue; earlier roots tighten it.
    double a = k > 0 ? out[k - 1] - tol : lo;
    double b = hi;
    int guard = 0;
    while (b - a > tol && guard++ < 200) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (sturm_count(diag, e2, m) > static_cast<int>(k)) {
        b = m;
      } else {
        a = m;
      }
    }
    if (b - a > std::max(tol, 4e-16 * std::max(std::abs(a), std::abs(b)))) {
      throw Error(ErrorCode::EigensolverFailure, "bisection did not converge");
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

EnsembleSample sample_tridiagonal(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  const int n = spec.n_particles;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  // N(0, 2)/sqrt(2) on the diagonal, chi_{beta (N - i)}/sqrt(2) off it.
  for (auto& d : diag) d = normal(rng);
  for (int i = 1; i < n; ++i) {
    std::chi_squared_distribution<double> chi2(spec.beta * (n - i));
    off[static_cast<std::size_t>(i - 1)] = std::sqrt(chi2(rng) / 2.0);
  }
  constexpr double tol = 1e-12;
  auto ev = tridiagonal_eigenvalues(diag, off, tol);
  const double scale = 1.0 / std::sqrt(spec.beta * n);
  for (double& v : ev) v *= scale;
  EnsembleSample s;
  s.spec = spec;
  s.points = std::move(ev);
  s.diagnostic = tol * scale;
  return s;
}

double metropolis_acceptance(double logratio) {
  if (std::isnan(logratio)) return 0.0;
  return logratio >= 0.0 ? 1.0 : std::exp(logratio);
}

namespace {

class Chain {
 public:
  Chain(const EnsembleSpec& spec, const McmcOptions& opt) : spec_(spec), opt_(opt) {
    const int n = spec.n_particles;
    x_.resize(static_cast<std::size_t>(n));
    // Start on an even grid inside the equilibrium support.
    for (int i = 0; i < n; ++i) x_[static_cast<std::size_t>(i)] = -1.2 + 2.4 * (i + 0.5) / n;
    if (!opt.interaction) std::fill(x_.begin(), x_.end(), 0.0);
    sigma_ = 1.0 / n;
  }

  double sweep(Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double beta = spec_.beta;
    const double n = spec_.n_particles;
    int accepted = 0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
      const double old = x_[k];
      const double prop = old + sigma_ * normal(rng);
      double dlog = -beta * n * 0.5 * (prop * prop - old * old);
      if (opt_.interaction) {
        double s = 0.0;
        for (std::size_t j = 0; j < x_.size(); ++j) {
          if (j == k) continue;
          s += std::log(std::abs(prop - x_[j])) - std::log(std::abs(old - x_[j]));
        }
        dlog += beta * s;
      }
      if (unif(rng) < metropolis_acceptance(dlog)) {
        x_[k] = prop;
        ++accepted;
      }
    }
    return static_cast<double>(accepted) / static_cast<double>(x_.size());
  }

  void tune(double rate) {
    if (rate < 0.2) sigma_ *= 0.8;
    if (rate > 0.4) sigma_ *= 1.25;
  }

  EnsembleSample snapshot(double acceptance) const {
    EnsembleSample s;
    s.spec = spec_;
    s.points = x_;
    std::sort(s.points.begin(), s.points.end());
    s.diagnostic = acceptance;
    return s;
  }

 private:
  EnsembleSpec spec_;
  McmcOptions opt_;
  std::vector<double> x_;
  double sigma_;
};

}  // namespace

EnsembleSample sample_mcmc(const EnsembleSpec& spec, int steps, Rng& rng, const McmcOptions& opt) {
  spec.validate();
  if (steps < 4) throw Error(ErrorCode::InvalidArgument, "need at least 4 sweeps");
  Chain chain(spec, opt);
  const int burn = steps / 4;
  for (int i = 0; i < burn; ++i) chain.tune(chain.sweep(rng));
  double acc = 0.0;
  for (int i = burn; i < steps; ++i) acc += chain.sweep(rng);
  return chain.snapshot(acc / (steps - burn));
}

std::vector<EnsembleSample> mcmc_chain(const EnsembleSpec& spec, std::size_t count, int burn_in,
                                       Rng& rng, const McmcOptions& opt) {
  spec.validate();
  Chain chain(spec, opt);
  for (int i = 0; i < burn_in; ++i) chain.tune(chain.sweep(rng));
  const int thin = opt.thin_sweeps > 0 ? opt.thin_sweeps : spec.n_particles;
  std::vector<EnsembleSample> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    double acc = 0.0;
    for (int i = 0; i < thin; ++i) acc += chain.sweep(rng);
    out.push_back(chain.snapshot(acc / thin));
    out.back().index = c;
  }
  return out;
}

PointConfiguration sample_bernoulli(std::size_t n, const Window& w, Rng& rng) {
  std::uniform_real_distribution<double> u(w.lo(), w.hi());
  std::vector<double> p(n);
  for (double& x : p) x = u(rng);
  return PointConfiguration(std::move(p), w);
}

PointConfiguration sample_poisson(double intensity, const Window& w, Rng& rng) {
  if (!(intensity > 0.0)) throw Error(ErrorCode::InvalidArgument, "intensity must be positive");
  std::poisson_distribution<std::size_t> count(intensity * w.length());
  return sample_bernoulli(count(rng), w, rng);
}

EnsembleSample sample_poisson_ensemble(const EnsembleSpec& spec, Rng& rng) {
  spec.validate();
  const auto c = sample_poisson(spec.n_particles, Window(-0.5, 0.5), rng);
  EnsembleSample s;
  s.spec = spec;
  s.points = c.values();
  return s;
}

EnsembleSample sample_ensemble(const EnsembleSpec& spec, std::uint64_t index, int mcmc_steps) {
  Rng rng = make_stream(spec.seed, index);
  EnsembleSample s;
  switch (spec.sampler_id) {
    case SamplerId::Tridiagonal: s = sample_tridiagonal(spec, rng); break;
    case SamplerId::Mcmc: s = sample_mcmc(spec, mcmc_steps, rng); break;
    case SamplerId::Poisson: s = sample_poisson_ensemble(spec, rng); break;
  }
  s.index = index;
  return s;
}

std::vector<EnsembleSample> sample_ensembles(const EnsembleSpec& spec, std::size_t draws,
                                             unsigned threads, int mcmc_steps) {
  spec.validate();
  std::vector<EnsembleSample> out(draws);
  parallel_for(draws, threads, [&](std::size_t i) { out[i] = sample_ensemble(spec, i, mcmc_steps); });
  return out;
}

double local_density(std::span<const double> points, double x) {
  if (points.empty()) throw Error(ErrorCode::InsufficientPoints, "empty sample");
  const double n = static_cast<double>(points.size());
  const double b = 0.5 * std::pow(n, -1.0 / 3.0);
  CompensatedSum s;
  for (double p : points) {
    const double u = (p - x) / b;
    if (std::abs(u) < 1.0) s += 0.75 * (1.0 - u * u);
  }
  return s.value() / (n * b);
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::InsufficientPoints, "quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double f = pos - static_cast<double>(i);
  return sorted[i] + f * (sorted[i + 1] - sorted[i]);
}

MicroWindow microscopic_window(const EnsembleSample& sample, double x, int R,
                               std::optional<double> density) {
  if (R < 1) throw Error(ErrorCode::InvalidArgument, "R must be >= 1");
  const auto& pts = sample.points;
  const double n = static_cast<double>(sample.spec.n_particles);
  const double rho = density ? *density : local_density(pts, x);
  if (!(rho > 0.0)) throw Error(ErrorCode::EdgeWindow, "zero local density at the window center");
  const double spacing = 1.0 / (rho * n);
  const double q_lo = quantile_sorted(pts, 0.005);
  const double q_hi = quantile_sorted(pts, 0.995);
  const double reach = (R + 10.0) * spacing;
  if (x - reach < q_lo || x + reach > q_hi) {
    throw Error(ErrorCode::EdgeWindow, "window at " + std::to_string(x) + " reaches the spectrum edge");
  }
  std::vector<double> mapped;
  for (double p : pts) {
    const double y = rho * n * (p - x);
    if (y >= -R && y <= R) mapped.push_back(y);
  }
  return MicroWindow{x, R, PointConfiguration(std::move(mapped), Window::centered(R)), rho};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InsufficientPoints, "empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_statistic(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw Error(ErrorCode::InsufficientPoints, "empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // the alternating series is 1 to double precision here
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double ks_pvalue(double d, double ne) {
  const double sq = std::sqrt(ne);
  return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace loggas
