#pragma once

// Config documents and JSON renderings of the analysis reports.
//
// Config schema:
//   {"k": 2, "b": [4, 1], "d": [1, 0.3],
//    "kernel": {"type": "logistic", "K": 1, "c": 1, "weights": [1, 1]},
//    "continuous": false}
// `weights` is also accepted at the top level.

#include <string>

#include <json.hpp>

#include "turnover/continuous.hpp"
#include "turnover/equilibria.hpp"
#include "turnover/exclusion.hpp"
#include "turnover/model.hpp"
#include "turnover/periodic.hpp"

namespace turnover {

using Json = nlohmann::json;

struct RunConfig {
  CompetitionModel model;
  bool continuous = false;
};

/// Parses without validating. Throws Error(InvalidArgument) on schema errors.
RunConfig parse_config(const Json& doc);

/// Validates in the mode the config asks for.
RunConfig validated(RunConfig config);

RunConfig load_config_file(const std::string& path);

/// Fully resolved config (defaults filled in), suitable for round-tripping.
Json to_json(const RunConfig& config);

Json to_json(const ExclusionReport& report);
Json to_json(const Period2Result& result);
Json to_json(const OrbitPair& pair);
Json to_json(const FeasibilityReport& report);
Json to_json(const FixedPointReport& report);
Json to_json(const ConsistencyReport& report);

}  // namespace turnover
