#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routeio/data.hpp"
#include "routeio/learn.hpp"
#include "routeio/scoring.hpp"
#include "routeio/zones.hpp"

namespace routeio {

enum class InitMode { euclidean, uniform };

struct ZoneTrainOptions {
  TrainConfig config;                  // init is filled in per depot
  InitMode init = InitMode::euclidean;
  double uniform_init_value = 0.01;
  double fraction = 1.0;               // seeded random subset of routes
  std::vector<std::string>* warnings = nullptr;
};

/// Zone-level training inputs for one depot: the hypernode universe (station
/// included), per-zone centers, penalties, and one R-TSP example per route.
struct ZoneProblem {
  NodeUniverse zones;
  std::string station_node;
  std::vector<LatLng> centers;
  PenaltyMatrix penalties;
  std::vector<SignalResponseExample> examples;
  std::vector<std::vector<std::string>> zone_sequences;  // parallel to examples
};

ZoneProblem build_zone_problem(const std::vector<RouteRecord>& routes,
                               const std::string& depot);

/// Steps 1-2 for one depot: build the zone problem and run the learner.
ZoneGraphModel train_zone_model(const std::vector<RouteRecord>& routes,
                                const std::string& depot,
                                const ZoneTrainOptions& options,
                                TrainTrace* trace_out = nullptr);

/// Steps 3-4 for one route: predict the zone sequence and expand to stops.
/// R < 0 means use the per-route default penalization constant.
std::vector<std::string> predict_route(const ZoneGraphModel& model,
                                       const RouteRecord& route, double R,
                                       const SolverChoice& choice);

/// Score every route in the bundle against proposed stop sequences
/// (route_id -> ordered stop ids). Routes without a proposal are skipped.
std::vector<ScoreReport> score_bundle(
    const DatasetBundle& bundle,
    const std::map<std::string, std::vector<std::string>>& proposed);

}  // namespace routeio
