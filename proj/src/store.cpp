#include "loggas/store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

#include "loggas/error.hpp"

namespace loggas {

namespace fs = std::filesystem;

nlohmann::json spec_to_json(const EnsembleSpec& spec) {
  return {{"n_particles", spec.n_particles},
          {"beta", spec.beta},
          {"seed", spec.seed},
          {"sampler", to_string(spec.sampler_id)}};
}

EnsembleSpec spec_from_json(const nlohmann::json& j) {
  EnsembleSpec s;
  s.n_particles = j.at("n_particles").get<int>();
  s.beta = j.at("beta").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.sampler_id = sampler_from_string(j.at("sampler").get<std::string>());
  s.validate();
  return s;
}

void write_store(const std::string& dir, const EnsembleSpec& spec,
                 const std::vector<EnsembleSample>& samples, const nlohmann::json& args) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double diag_max = 0.0;
  for (const auto& s : samples) {
    if (!s.points.empty()) {
      lo = std::min(lo, s.points.front());
      hi = std::max(hi, s.points.back());
    }
    diag_max = std::max(diag_max, s.diagnostic);
  }
  nlohmann::json manifest = {{"format", "loggas-ensemble-store"},
                             {"code_version", LOGGAS_VERSION},
                             {"spec", spec_to_json(spec)},
                             {"draws", samples.size()},
                             {"samples_file", "samples.ndjson"},
                             {"max_diagnostic", diag_max},
                             {"args", args.is_null() ? nlohmann::json::object() : args}};
  if (!samples.empty() && lo <= hi) manifest["measured_support"] = {lo, hi};

  {
    std::ofstream out(fs::path(dir) / "samples.ndjson");
    if (!out) throw Error(ErrorCode::Io, "cannot write samples in " + dir);
    for (const auto& s : samples) {
      out << nlohmann::json{{"index", s.index}, {"points", s.points}, {"diagnostic", s.diagnostic}}.dump()
          << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "write failed in " + dir);
  }
  std::ofstream mout(fs::path(dir) / "manifest.json");
  if (!mout) throw Error(ErrorCode::Io, "cannot write manifest in " + dir);
  mout << manifest.dump(2) << '\n';
  if (!mout) throw Error(ErrorCode::Io, "write failed in " + dir);
}

EnsembleStore read_store(const std::string& dir) {
  std::ifstream min(fs::path(dir) / "manifest.json");
  if (!min) throw Error(ErrorCode::Io, "no manifest.json in " + dir);
  EnsembleStore st;
  try {
    st.manifest = nlohmann::json::parse(min);
    st.spec = spec_from_json(st.manifest.at("spec"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("bad manifest: ") + e.what());
  }
  std::ifstream in(fs::path(dir) / "samples.ndjson");
  if (!in) throw Error(ErrorCode::Io, "no samples.ndjson in " + dir);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EnsembleSample s;
      s.spec = st.spec;
      s.index = j.at("index").get<std::uint64_t>();
      s.points = j.at("points").get<std::vector<double>>();
      s.diagnostic = j.value("diagnostic", 0.0);
      if (!std::is_sorted(s.points.begin(), s.points.end())) {
        throw Error(ErrorCode::UnsortedInput, "sample " + std::to_string(s.index) + " is not sorted");
      }
      st.samples.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Io, std::string("bad sample line: ") + e.what());
    }
  }
  if (st.manifest.contains("draws") && st.manifest["draws"].get<std::size_t>() != st.samples.size()) {
    throw Error(ErrorCode::Io, "sample count does not match manifest");
  }
  return st;
}

}  // namespace loggas
