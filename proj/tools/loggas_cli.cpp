#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/config_io.hpp"
#include "loggas/energy.hpp"
#include "loggas/error.hpp"
#include "loggas/field.hpp"
#include "loggas/sampler.hpp"
#include "loggas/screening.hpp"
#include "loggas/stats.hpp"
#include "loggas/store.hpp"
#include "loggas/transport.hpp"
#include "loggas/verify.hpp"

using namespace loggas;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double tol = 1e-8;
  std::string out;
};

json provenance(const Globals& g, const std::string& command, int argc, char** argv) {
  json args = json::array();
  for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
  return {{"tool", "loggas"}, {"code_version", LOGGAS_VERSION}, {"command", command},
          {"seed", g.seed},   {"tol", g.tol},                   {"args", args}};
}

// Empty path or "-" means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorCode::Io, "write failed for " + path);
}

std::string store_path(const std::string& given) {
  if (!given.empty()) return given;
  if (const char* env = std::getenv("LOGGAS_STORE")) return env;
  throw Error(ErrorCode::InvalidArgument, "no store given and LOGGAS_STORE is unset");
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad integer list: " + s);
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty integer list");
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number list: " + s);
    }
  }
  return out;
}

// Microscopic windows of every draw; draws whose window leaves the bulk are skipped.
std::vector<PointConfiguration> store_windows(const EnsembleStore& st, double x, int R) {
  std::vector<PointConfiguration> out;
  const std::optional<double> rho =
      st.spec.sampler_id == SamplerId::Poisson ? std::optional<double>(1.0) : std::nullopt;
  for (const auto& s : st.samples) {
    try {
      out.push_back(microscopic_window(s, x, R, rho).config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EdgeWindow) throw;
    }
  }
  return out;
}

int cmd_sample(const Globals& g, const json& prov, int n, double beta, std::size_t draws,
               const std::string& sampler, int mcmc_steps, const std::string& out) {
  EnsembleSpec spec{n, beta, g.seed, sampler_from_string(sampler)};
  spec.validate();
  const auto samples = sample_ensembles(spec, draws, g.threads, mcmc_steps);
  write_store(store_path(out.empty() ? g.out : out), spec, samples, prov);
  std::cerr << "wrote " << samples.size() << " samples\n";
  return kExitOk;
}

int cmd_energy(const Globals& g, const json& prov, const std::string& in, const std::vector<double>& etas,
               std::optional<double> T) {
  std::ostringstream os;
  os << json({{"provenance", prov}}).dump() << '\n';
  for (const auto& c : read_config_file(in)) {
    json row;
    const auto e = intrinsic_energy(c);
    row["n"] = c.size();
    row["carrier"] = {c.carrier().lo(), c.carrier().hi()};
    row["wint"] = {{"pair_term", e.pair_term},
                   {"background_term", e.background_term},
                   {"const_term", e.const_term},
                   {"total", e.total}};
    json we = json::array();
    for (double eta : etas) {
      we.push_back({{"eta", eta},
                    {"welec", welec_eta(c, eta, T, g.tol)},
                    {"truncation_error", truncation_error(c, eta, c.carrier())}});
    }
    row["welec"] = we;
    os << row.dump() << '\n';
  }
  emit(g.out, os.str());
  return kExitOk;
}

int cmd_field(const Globals& g, const json& prov, const std::string& in, double eta,
              const std::vector<std::string>& at, const std::vector<std::string>& boxes) {
  std::ostringstream os;
  os << json({{"provenance", prov}}).dump() << '\n';
  for (const auto& c : read_config_file(in)) {
    const auto f = FieldEvaluator::local(c, eta);
    json row;
    json pts = json::array();
    for (const auto& a : at) {
      const auto v = parse_doubles(a);
      if (v.size() != 2) throw Error(ErrorCode::InvalidArgument, "--at expects x,y");
      const Vec2 e = f.eval({v[0], v[1]});
      pts.push_back({{"x", v[0]}, {"y", v[1]}, {"E", {e.x, e.y}}});
    }
    row["field"] = pts;
    json bx = json::array();
    for (const auto& b : boxes) {
      const auto v = parse_doubles(b);
      if (v.size() != 4) throw Error(ErrorCode::InvalidArgument, "--box expects xlo,xhi,ylo,yhi");
      bx.push_back({{"box", v},
                    {"flux", box_flux(f, v[0], v[1], v[2], v[3], g.tol)},
                    {"energy", energy_region(f, v[0], v[1], v[2], v[3], g.tol)}});
    }
    row["boxes"] = bx;
    os << row.dump() << '\n';
  }
  emit(g.out, os.str());
  return kExitOk;
}

int cmd_screen(const Globals& g, const json& prov, const std::string& in, int R, double s, double eta,
               const std::string& M) {
  ScreeningParams p;
  p.R = R;
  p.s = s;
  p.eta = eta;
  const auto input = read_config_file(in);
  std::vector<Preconditions> pre;
  for (const auto& c : input) pre.push_back(check_preconditions(c, p, g.tol));
  if (M == "auto") {
    std::vector<double> m;
    for (const auto& x : pre) m.push_back(x.m_scr);
    std::sort(m.begin(), m.end());
    if (m.empty()) throw Error(ErrorCode::InvalidArgument, "no configurations to screen");
    p.M = quantile_sorted(m, 0.95);
  } else {
    try {
      p.M = std::stod(M);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "--M must be a number or 'auto'");
    }
  }
  p.validate();
  std::vector<PointConfiguration> screened;
  json reports = json::array();
  for (std::size_t i = 0; i < input.size(); ++i) {
    Rng rng = make_stream(g.seed, i);
    json rep{{"index", i}};
    try {
      const auto r = screen(input[i], p, rng, g.tol);
      screened.push_back(r.screened);
      rep["status"] = "screened";
      rep["report"] = to_json(r.report);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval) throw;
      rep["status"] = std::string(to_string(e.code()));
      rep["message"] = e.what();
      rep["m_scr"] = pre[i].m_scr;
      rep["e_scr"] = pre[i].e_scr;
    }
    reports.push_back(rep);
  }
  const std::string dir = g.out.empty() ? "." : g.out;
  std::filesystem::create_directories(dir);
  write_config_file(dir + "/screened.jsonl", screened);
  json report{{"provenance", prov},
              {"params", {{"R", p.R}, {"s", p.s}, {"eta", p.eta}, {"M", p.M}}},
              {"screened", screened.size()},
              {"input", input.size()},
              {"windows", reports}};
  emit(dir + "/report.json", report.dump(2) + "\n");
  std::cerr << "screened " << screened.size() << " of " << input.size() << "\n";
  return kExitOk;
}

std::vector<LabeledTuple> tuples_from_store(const EnsembleStore& st, int R, double x, bool do_screen,
                                            const Globals& g) {
  ScreeningParams p;
  p.R = R;
  std::vector<LabeledTuple> out;
  std::size_t i = 0;
  for (const auto& c : store_windows(st, x, R)) {
    Rng rng = make_stream(g.seed, i++);
    try {
      if (do_screen) {
        out.push_back(label(screen(c, p, rng, g.tol).screened));
      } else if (c.size() == static_cast<std::size_t>(2 * R) && c.is_simple()) {
        out.push_back(label(c));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::DegenerateInterval) throw;
    }
  }
  return out;
}

int cmd_interpolate(const Globals& g, const json& prov, const std::string& a, const std::string& b, int R,
                    double t, double x, bool do_screen) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "--t must lie in [0, 1]");
  auto ta = tuples_from_store(read_store(a), R, x, do_screen, g);
  auto tb = tuples_from_store(read_store(b), R, x, do_screen, g);
  const std::size_t m = std::min(ta.size(), tb.size());
  if (m == 0) throw Error(ErrorCode::InsufficientPoints, "no usable windows with 2R points");
  ta.resize(m);
  tb.resize(m);
  const auto cp = assignment_coupling(ta, tb);
  std::ostringstream os;
  os << json({{"provenance", prov}, {"pairs", m}, {"coupling_cost", cp.cost}}).dump() << '\n';
  std::size_t violations = 0;
  for (const auto& pr : cp.pairs) {
    const auto& x0 = ta[pr.from];
    const auto& x1 = tb[pr.to];
    const auto cert = convexity_certificate(x0, x1, R);
    const auto sw = discrepancy_sandwich(x0, x1, R, t);
    const bool ok = cert.holds(1e-9) && cert.bf <= 1e-10 && sw.holds();
    if (!ok) ++violations;
    os << json({{"from", pr.from},
                {"to", pr.to},
                {"interpolate", interpolate(x0, x1, t).vec()},
                {"certificate",
                 {{"lhs", cert.lhs}, {"rhs_mean", cert.rhs_mean}, {"gain", cert.gain}, {"bf", cert.bf},
                  {"slack", cert.slack}}},
                {"sandwich_slack", sw.worst_slack},
                {"ok", ok}})
              .dump()
       << '\n';
  }
  emit(g.out, os.str());
  std::cerr << m << " pairs, " << violations << " violations\n";
  return violations == 0 ? kExitOk : kExitVerify;
}

int cmd_stats_discrepancy(const Globals& g, const json& prov, const std::string& store, const std::string& Rs_s,
                          std::size_t block) {
  const auto st = read_store(store_path(store));
  const auto Rs = parse_ints(Rs_s);
  const int Rmax = *std::max_element(Rs.begin(), Rs.end());
  const auto windows = store_windows(st, 0.0, Rmax);
  if (block == 0) block = windows.size();
  std::ostringstream os;
  os << "# " << prov.dump() << '\n';
  os << "estimator,R,block,value,stderr,draws\n";
  for (std::size_t b = 0; b * block < windows.size(); ++b) {
    const std::size_t hi = std::min(windows.size(), (b + 1) * block);
    const std::span<const PointConfiguration> part(windows.data() + b * block, hi - b * block);
    for (const auto& v : discrepancy_variance_curve(part, Rs)) {
      os << "discrepancy_variance," << v.R << ',' << b << ',' << v.value << ',' << v.stderr_ << ',' << v.draws
         << '\n';
    }
  }
  emit(g.out, os.str());
  return kExitOk;
}

int cmd_stats_free_energy(const Globals& g, const json& prov, const std::string& store, const std::string& Rs_s) {
  const auto st = read_store(store_path(store));
  std::optional<double> sre;
  if (st.spec.sampler_id == SamplerId::Poisson) sre = 0.0;
  std::ostringstream os;
  os << "# " << prov.dump() << '\n';
  os << "estimator,R,block,value,stderr,draws,sre,f_beta\n";
  for (int R : parse_ints(Rs_s)) {
    std::vector<PointConfiguration> ws;
    for (const auto& c : store_windows(st, 0.0, R)) {
      if (c.is_simple()) ws.push_back(c);
    }
    const auto r = free_energy_report(ws, st.spec.beta, sre);
    os << "per_volume_wint," << R << ",0," << r.per_volume_wint << ',' << r.stderr_ << ',' << ws.size() << ','
       << (r.sre_estimate ? std::to_string(*r.sre_estimate) : "unavailable") << ','
       << (r.f_beta ? std::to_string(*r.f_beta) : "") << '\n';
  }
  emit(g.out, os.str());
  return kExitOk;
}

int cmd_verify(const Globals& g, bool fast, bool flip, const std::string& only) {
  VerifyOptions opt;
  opt.fast = fast;
  opt.threads = g.threads;
  opt.flip_gain_sign = flip;
  if (g.seed != 0) opt.seed = g.seed;
  if (!only.empty()) opt.only = parse_ints(only);
  const VerifyReport rep = run_verification(opt);
  for (const auto& c : rep.checks) std::cerr << format_line(c) << '\n';
  emit(g.out, to_json(rep, opt).dump(2) + "\n");
  std::cerr << (rep.passed() ? "all checks passed\n" : "verification FAILED\n");
  return rep.passed() ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume log-gas experiments"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand.
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Base RNG seed");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file or directory");

  auto* sample = app.add_subcommand("sample", "Draw an ensemble store");
  double beta = 2.0;
  int n = 512;
  std::size_t draws = 100;
  std::string sampler = "tridiagonal";
  int mcmc_steps = 400;
  std::string sample_out;
  sample->add_option("--beta", beta)->required();
  sample->add_option("--n", n)->required();
  sample->add_option("--draws", draws)->required();
  sample->add_option("--sampler", sampler)->check(CLI::IsMember({"tridiagonal", "mcmc", "poisson"}));
  sample->add_option("--mcmc-steps", mcmc_steps);
  sample->add_option("--out", sample_out, "Store directory (default: LOGGAS_STORE)");

  auto* energy = app.add_subcommand("energy", "Intrinsic and truncated electric energies");
  std::string in;
  std::string etas_s;
  std::optional<double> T;
  energy->add_option("--in", in)->required();
  energy->add_option("--eta", etas_s, "Comma-separated truncation radii");
  energy->add_option("--T", T, "Clip the field energy to [-R, R] x [-T, T]");

  auto* field = app.add_subcommand("field", "Local field values, fluxes and energies");
  double eta = 0.0;
  std::vector<std::string> at, boxes;
  field->add_option("--in", in)->required();
  field->add_option("--eta", eta);
  field->add_option("--at", at, "x,y (repeatable)");
  field->add_option("--box", boxes, "xlo,xhi,ylo,yhi (repeatable)");

  auto* scr = app.add_subcommand("screen", "Screen configurations");
  int R = 32;
  double s = 0.125;
  double scr_eta = 0.05;
  std::string M = "auto";
  scr->add_option("--in", in)->required();
  scr->add_option("--R", R);
  scr->add_option("--s", s);
  scr->add_option("--eta", scr_eta);
  scr->add_option("--M", M, "Boundary energy threshold or 'auto'");

  auto* interp = app.add_subcommand("interpolate", "Couple two stores and certify convexity");
  std::string sa, sb;
  double t = 0.5;
  double x0 = 0.0;
  bool do_screen = false;
  interp->add_option("--a", sa)->required();
  interp->add_option("--b", sb)->required();
  interp->add_option("--R", R)->required();
  interp->add_option("--t", t);
  interp->add_option("--x", x0, "Window centre");
  interp->add_flag("--screen", do_screen, "Screen windows instead of keeping those with 2R points");

  auto* stats = app.add_subcommand("stats", "Estimator tables as CSV");
  stats->require_subcommand(1);
  std::string store, Rs_s = "4,8,16,32";
  std::size_t block = 0;
  auto* disc = stats->add_subcommand("discrepancy", "Discrepancy variance per volume");
  disc->add_option("--store", store);
  disc->add_option("--Rs", Rs_s);
  disc->add_option("--block", block, "Draws per block (default: all)");
  auto* fe = stats->add_subcommand("free-energy", "Per-volume intrinsic energy");
  fe->add_option("--store", store);
  fe->add_option("--Rs", Rs_s);

  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  bool fast = false, flip = false;
  std::string only;
  verify->add_flag("--fast", fast);
  verify->add_flag("--flip-gain-sign", flip, "Test hook: negate gain summands");
  verify->add_option("--only", only, "Comma-separated check ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample) {
      return cmd_sample(g, provenance(g, "sample", argc, argv), n, beta, draws, sampler, mcmc_steps, sample_out);
    }
    if (*energy) return cmd_energy(g, provenance(g, "energy", argc, argv), in, parse_doubles(etas_s), T);
    if (*field) return cmd_field(g, provenance(g, "field", argc, argv), in, eta, at, boxes);
    if (*scr) return cmd_screen(g, provenance(g, "screen", argc, argv), in, R, s, scr_eta, M);
    if (*interp) return cmd_interpolate(g, provenance(g, "interpolate", argc, argv), sa, sb, R, t, x0, do_screen);
    if (*disc) return cmd_stats_discrepancy(g, provenance(g, "stats discrepancy", argc, argv), store, Rs_s, block);
    if (*fe) return cmd_stats_free_energy(g, provenance(g, "stats free-energy", argc, argv), store, Rs_s);
    if (*verify) return cmd_verify(g, fast, flip, only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? kExitIo : kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
