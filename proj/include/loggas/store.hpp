#pragma once

// Ensemble store: a directory holding manifest.json and samples.ndjson.

#include <string>
#include <vector>

#include <json.hpp>

#include "loggas/sampler.hpp"

namespace loggas {

struct EnsembleStore {
  EnsembleSpec spec;
  std::vector<EnsembleSample> samples;
  nlohmann::json manifest;
};

/// Writes the store; `args` is recorded verbatim for reproducibility.
/// The manifest holds no timestamps so reruns are byte-identical.
void write_store(const std::string& dir, const EnsembleSpec& spec,
                 const std::vector<EnsembleSample>& samples, const nlohmann::json& args = {});

EnsembleStore read_store(const std::string& dir);

nlohmann::json spec_to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const nlohmann::json& j);

}  // namespace loggas
