#pragma once

#include <string>

#include <json.hpp>

#include "tqsearch/channel.hpp"
#include "tqsearch/experiments.hpp"
#include "tqsearch/ormac.hpp"

namespace tq {

// Shorthand noise map notation used by CLI flags:
//   "const:0.11"          f(q) = 0.11
//   "affine:0.3,0.1"      f(q) = 0.3 + 0.1 q
//   "table:0=0.2,1=0.4"   piecewise-linear through the listed (q, f) knots
NoiseMap noise_map_from_shorthand(const std::string& text);

// {"family":"bsc","f":{"kind":"affine","a":0.3,"b":0.1},"mu":0.1};
// "mu" is optional (derived from the map when absent). The custom family
// additionally carries "levels", "tables" and "alphabet". Unknown keys are
// rejected so config typos fail loudly.
NoiseModel noise_from_json(const nlohmann::json& doc);
nlohmann::json noise_to_json(const NoiseModel& noise);

NoiseModel noise_from_family(const std::string& family, NoiseMap map);

ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

nlohmann::json rac_report_to_json(const RacReport& report);

}  // namespace tq
