#include "loggas/config_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "loggas/error.hpp"

namespace loggas {

nlohmann::json to_json(const PointConfiguration& c) {
  return nlohmann::json{{"carrier", {c.carrier().lo(), c.carrier().hi()}}, {"points", c.values()}};
}

PointConfiguration config_from_json(const nlohmann::json& j) {
  try {
    const auto& car = j.at("carrier");
    if (!car.is_array() || car.size() != 2) {
      throw Error(ErrorCode::InvalidArgument, "carrier must be [lo, hi]");
    }
    auto pts = j.at("points").get<std::vector<double>>();
    return PointConfiguration::from_sorted(std::move(pts),
                                           Window(car[0].get<double>(), car[1].get<double>()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed configuration: ") + e.what());
  }
}

void write_configs(std::ostream& out, const std::vector<PointConfiguration>& cs) {
  for (const auto& c : cs) out << to_json(c).dump() << '\n';
}

std::vector<PointConfiguration> read_configs(std::istream& in) {
  std::vector<PointConfiguration> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument,
                  "line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(config_from_json(j));
  }
  return out;
}

std::vector<PointConfiguration> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_configs(in);
}

void write_config_file(const std::string& path, const std::vector<PointConfiguration>& cs) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  write_configs(out, cs);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace loggas
