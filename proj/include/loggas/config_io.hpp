#pragma once

// JSON-lines exchange format: one {"carrier":[lo,hi],"points":[...]} per line.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/pointconf.hpp"

namespace loggas {

nlohmann::json to_json(const PointConfiguration& c);
/// Rejects unsorted point lists with UnsortedInput.
PointConfiguration config_from_json(const nlohmann::json& j);

void write_configs(std::ostream& out, const std::vector<PointConfiguration>& cs);
std::vector<PointConfiguration> read_configs(std::istream& in);

std::vector<PointConfiguration> read_config_file(const std::string& path);
void write_config_file(const std::string& path, const std::vector<PointConfiguration>& cs);

}  // namespace loggas
