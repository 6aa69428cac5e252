#pragma once

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpclust/dph_clustering.hpp"
#include "dpclust/dynamic.hpp"
#include "dpclust/instance.hpp"
#include "dpclust/metrics.hpp"
#include "dpclust/oracle.hpp"
#include "dpclust/spectral.hpp"

namespace dpclust::io {

using Json = nlohmann::json;

// Instance: {"b", "u", "bs": [[x,y]...], "users": [[x,y]...], "weights": [[row]...],
//            "generator": {...}}. Coordinates are optional when weights are given;
// weights are optional when coordinates and generator are given.
Json to_json(const Instance& instance, bool matrix_only = false);
Instance instance_from_json(const Json& j);

Json to_json(const GeneratorConfig& config);
GeneratorConfig generator_from_json(const Json& j);

// {"bs_classes": [[i...]...], "user_classes": [[j...]...], "switched_off": [...]}
Json to_json(const ClusterSystem& system);
ClusterSystem system_from_json(const Json& j, Index bs_count, Index user_count);

Json to_json(const TinfBreakdown<double>& breakdown);
Json to_json(const MergeTrace<double>& trace);
Json to_json(const OracleResult<double>& result);
Json to_json(const SpectralOutcome& outcome);
Json to_json(const ValidationReport& report);

// {"op":"join","weights":[...]}, {"op":"leave","j":int}, {"op":"update","i":int,"j":int,"w":real}
Event event_from_json(const Json& j);
/// One event per nonempty line; DataError messages carry the line number.
std::vector<Event> read_events(std::istream& in);

Json read_json(std::istream& in, const std::string& source);
Json read_json_file(const std::string& path);

}  // namespace dpclust::io
