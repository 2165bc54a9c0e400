#pragma once

#include <map>
#include <string>
#include <vector>

#include "routeio/zones.hpp"

namespace routeio {

/// Route records grouped by depot code, plus load provenance.
struct DatasetBundle {
  std::map<std::string, std::vector<RouteRecord>> by_depot;

  struct Provenance {
    std::string routes_path;
    std::string times_path;
    std::string sequences_path;
    int loaded = 0;
    int skipped = 0;
    std::vector<std::string> warnings;
  } provenance;

  int route_count() const;
};

/// Load the three-file dataset layout:
///   routes file:    route_id -> {station_code, stops: id -> {lat, lng,
///                   zone_id?, type}}
///   times file:     route_id -> from_stop -> to_stop -> seconds
///   sequences file: route_id -> stop_id -> 0-based order index
/// Stops lacking zones are imputed from the route's own zone centers.
/// Malformed routes are skipped with a warning tally.
DatasetBundle load_dataset(const std::string& routes_path,
                           const std::string& times_path,
                           const std::string& sequences_path);

/// Write a bundle back out in the same three-file layout (fixtures, tests).
void save_dataset(const DatasetBundle& bundle, const std::string& routes_path,
                  const std::string& times_path,
                  const std::string& sequences_path);

/// Proposed sequences: route_id -> stop_id -> 0-based order index.
void save_sequences(const std::map<std::string, std::vector<std::string>>& seqs,
                    const std::string& path);
std::map<std::string, std::vector<std::string>> load_sequences(
    const std::string& path);

/// Versioned JSON persistence for per-depot zone models. Round-trips weights
/// at full precision; the node ordering is recorded so indexing is stable.
void save_models(const std::map<std::string, ZoneGraphModel>& models,
                 const std::string& path);
std::map<std::string, ZoneGraphModel> load_models(const std::string& path);

}  // namespace routeio
