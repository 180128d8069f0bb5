// Sweeps that produce the constants in include/loggas/calibration.hpp.
// Prints the largest ratio observed for each bound (the constant needed to
// cover the sweep) next to the value currently compiled in.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "loggas/calibration.hpp"
#include "loggas/error.hpp"
#include "loggas/field.hpp"
#include "loggas/sampler.hpp"
#include "loggas/screening.hpp"
#include "loggas/stats.hpp"

using namespace loggas;

namespace {

void row(const char* name, double needed, double current, std::size_t n) {
  std::printf("%-20s needed %-10.4g current %-8.4g samples %-5zu %s\n", name, needed, current, n,
              needed <= current ? "ok" : "TOO SMALL");
}

struct Screened {
  PointConfiguration original;
  ScreenResult result;
};

std::vector<Screened> screened_windows(std::uint64_t seed, std::size_t want, ScreeningParams& p, double tol) {
  const EnsembleSpec spec{512, 2.0, seed, SamplerId::Tridiagonal};
  std::vector<PointConfiguration> pool;
  std::vector<double> m;
  std::uint64_t i = 0;
  while (pool.size() < 2 * want && i < 50 * want) {
    const auto w = microscopic_window(sample_ensemble(spec, i++), 0.0, p.R);
    if (!clearance_ok(w.config, p)) continue;
    m.push_back(check_preconditions(w.config, p, tol).m_scr);
    pool.push_back(w.config);
  }
  std::sort(m.begin(), m.end());
  p.M = quantile_sorted(m, 0.95);
  std::vector<Screened> out;
  Rng rng = make_stream(seed, 1u << 24);
  for (const auto& c : pool) {
    if (out.size() >= want) break;
    try {
      out.push_back({c, screen(c, p, rng, tol)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval) throw;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibration sweeps for the bound constants"};
  std::uint64_t seed = 99;
  std::size_t windows = 100;
  double tol = 1e-7;
  app.add_option("--seed", seed);
  app.add_option("--windows", windows, "Screened windows in the claim sweep");
  app.add_option("--tol", tol);
  CLI11_PARSE(app, argc, argv);

  ScreeningParams p;
  p.R = 32;
  const auto sw = screened_windows(stream_seed(seed, 1), windows, p, tol);
  std::printf("screened %zu windows at R=%d s=%g eta=%g, M (95th pct of m_scr) = %.4f\n", sw.size(), p.R, p.s,
              p.eta, p.M);

  struct Need {
    const char* prefix;
    double current;
    double worst = 0.0;
  };
  Need needs[] = {{"kmax", calibration::kKmax},
                  {"far_position", calibration::kFarPosition},
                  {"far_discrepancy", calibration::kFarDiscrepancy},
                  {"near_position", calibration::kNearPosition},
                  {"near_discrepancy", calibration::kNearDiscrepancy}};
  double interior = 0.0;
  std::size_t interior_n = 0;
  for (const auto& s : sw) {
    for (const auto& cl : s.result.report.claim_checks) {
      for (auto& nd : needs) {
        if (cl.name.rfind(nd.prefix, 0) == 0 && cl.rhs > 0.0) {
          nd.worst = std::max(nd.worst, cl.lhs / (cl.rhs / nd.current));
        }
      }
    }
    for (const auto& h : s.result.report.mi.intervals) {
      if (h.abuts_old) continue;
      interior = std::max(interior, std::abs(h.m - 1.0) * std::sqrt(static_cast<double>(p.R)));
      ++interior_n;
    }
  }
  for (const auto& nd : needs) row(nd.prefix, nd.worst, nd.current, sw.size());
  row("interior_mass", interior, calibration::kInteriorMass, interior_n);

  // Screening energy: smallest C with lhs <= original energy + C |log eta| M s R.
  double energy_need = 0.0;
  const std::size_t n_energy = std::min<std::size_t>(20, sw.size());
  for (std::size_t i = 0; i < n_energy; ++i) {
    const auto chk = screening_energy_check(sw[i].original, sw[i].result.screened, p, tol, 1.0);
    energy_need = std::max(energy_need, (chk.lhs - (chk.rhs - chk.err_term)) / chk.err_term);
  }
  row("screening_energy", energy_need, calibration::kScreeningEnergy, n_energy);

  // Fluctuations of smooth test functions on beta=2 windows.
  {
    const EnsembleSpec spec{512, 2.0, stream_seed(seed, 2), SamplerId::Tridiagonal};
    Rng rng = make_stream(seed, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double need = 0.0;
    std::size_t n = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto c = microscopic_window(sample_ensemble(spec, i), 0.0, 32).config;
      const double a = -30.0 + 20.0 * u(rng);
      const double b = a + 5.0 + 45.0 * u(rng);
      const double om = 0.2 + 2.0 * u(rng);
      const double ph = 2.0 * std::numbers::pi * u(rng);
      TestFunction g{[=](double x) { return std::sin(om * x + ph); }, 1.0, om};
      const auto fb = fluctuation_bound(g, c, Window(a, std::min(b, 32.0)));
      need = std::max(need, std::abs(fb.lhs) / fb.rhs);
      ++n;
    }
    row("fluctuation", need, calibration::kFluctuation, n);
  }

  // Gap L2 against R plus the truncated field energy on the window.
  {
    double need = 0.0;
    std::size_t n = 0;
    for (const auto& s : sw) {
      const auto& c = s.original;
      const double e = energy_rectangle(FieldEvaluator::local(c, p.eta), c.carrier(), p.R, tol) /
                       (2.0 * std::numbers::pi);
      const auto gl = gap_l2_diagnostic(c, e);
      need = std::max(need, gl.sum_gaps_sq / gl.bound);
      ++n;
      if (n >= 20) break;
    }
    row("gap_l2", need, calibration::kGapL2, n);
  }

  // Tile interactions of screened jittered lattices at R = 16.
  {
    ScreeningParams q;
    q.R = 16;
    Rng rng = make_stream(seed, 4);
    std::uniform_real_distribution<double> jit(-0.25, 0.25);
    std::vector<PointConfiguration> cs;
    while (cs.size() < 16) {
      std::vector<double> pts;
      for (int k = -q.R; k < q.R; ++k) pts.push_back(k + 0.5 + jit(rng));
      try {
        cs.push_back(screen(PointConfiguration(pts, Window::centered(q.R)), q, rng, tol).screened);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval) throw;
      }
    }
    double need = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k + 1 < cs.size(); k += 2) {
      for (int d : {2, 3, 5, 8, 13}) {
        const auto ti = pairwise_interaction_bound(cs[k], 0, translate(cs[k + 1], 2.0 * q.R * d), d, q.R);
        need = std::max(need, std::abs(ti.interaction) / (ti.bound / calibration::kInteraction));
        ++n;
      }
    }
    row("interaction", need, calibration::kInteraction, n);
  }
  return 0;
}
