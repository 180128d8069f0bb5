#pragma once

// Samplers for the log-gas Gibbs measure with quadratic confinement, Poisson
// auxiliaries, and the unit-intensity microscopic windows cut out of a draw.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loggas/numeric.hpp"
#include "loggas/pointconf.hpp"

namespace loggas {

enum class SamplerId { Tridiagonal, Mcmc, Poisson };

std::string to_string(SamplerId id);
SamplerId sampler_from_string(const std::string& s);

struct EnsembleSpec {
  int n_particles = 2;
  double beta = 2.0;
  std::uint64_t seed = 0;
  SamplerId sampler_id = SamplerId::Tridiagonal;

  void validate() const;
};

struct EnsembleSample {
  EnsembleSpec spec;
  std::uint64_t index = 0;   ///< draw index within the run; selects the RNG stream
  std::vector<double> points;
  /// Acceptance rate (mcmc), widest bisection bracket (tridiagonal), 0 (poisson).
  double diagnostic = 0.0;
};

/// Eigenvalues of the symmetric tridiagonal matrix (diag, off) in increasing
/// order, by Sturm-sequence bisection to absolute accuracy tol.
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off,
                                            double tol = 1e-12);

/// Beta-Hermite tridiagonal model, eigenvalues rescaled by 1/sqrt(beta N).
EnsembleSample sample_tridiagonal(const EnsembleSpec& spec, Rng& rng);

struct McmcOptions {
  /// Test hook: drop the pairwise term so only the Gaussian confinement remains.
  bool interaction = true;
  /// Sweeps between retained states in a chain; 0 means N.
  int thin_sweeps = 0;
};

/// min(1, exp(logratio)).
double metropolis_acceptance(double logratio);

/// Single-coordinate Metropolis chain: steps/4 tuning sweeps, then the rest;
/// returns the final state.
EnsembleSample sample_mcmc(const EnsembleSpec& spec, int steps, Rng& rng, const McmcOptions& opt = {});

/// One chain, `count` states spaced by thin_sweeps after `burn_in` tuning sweeps.
std::vector<EnsembleSample> mcmc_chain(const EnsembleSpec& spec, std::size_t count, int burn_in,
                                       Rng& rng, const McmcOptions& opt = {});

/// Poisson point process of the given intensity on w.
PointConfiguration sample_poisson(double intensity, const Window& w, Rng& rng);

/// n iid uniform points on w (the Poisson process conditioned on n points).
PointConfiguration sample_bernoulli(std::size_t n, const Window& w, Rng& rng);

/// Macroscopic Poisson draw: Poisson(N) uniform points on [-1/2, 1/2], so
/// the known density is 1 there.
EnsembleSample sample_poisson_ensemble(const EnsembleSpec& spec, Rng& rng);

/// Draw `index` of a run, on its own stream derived from (seed, index).
EnsembleSample sample_ensemble(const EnsembleSpec& spec, std::uint64_t index, int mcmc_steps = 400);

std::vector<EnsembleSample> sample_ensembles(const EnsembleSpec& spec, std::size_t draws,
                                             unsigned threads, int mcmc_steps = 400);

struct MicroWindow {
  double center = 0.0;
  int half_width = 0;
  PointConfiguration config;
  double density_used = 0.0;
};

/// Epanechnikov estimate of the macroscopic density at x with full width N^(-1/3).
double local_density(std::span<const double> points, double x);

/// Points mapped by p -> rho N (p - x) and restricted to [-R, R]. rho is the
/// local estimate unless given (Poisson draws use their known density 1).
/// Throws EdgeWindow when the window, padded by 10 spacings, leaves the bulk
/// delimited by the 0.5% and 99.5% empirical quantiles.
MicroWindow microscopic_window(const EnsembleSample& sample, double x, int R,
                               std::optional<double> density = std::nullopt);

/// Empirical quantile (linear interpolation) of sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);
/// One-sample statistic against a continuous CDF.
double ks_statistic(std::vector<double> a, const std::function<double(double)>& cdf);
/// Asymptotic Kolmogorov survival function Q(lambda).
double kolmogorov_survival(double lambda);
/// p-value for statistic d with effective sample size ne (n m / (n + m) for two samples).
double ks_pvalue(double d, double ne);

}  // namespace loggas
