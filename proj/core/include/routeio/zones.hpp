#pragma once

#include <optional>
#include <string>
#include <vector>

#include "routeio/solvers.hpp"
#include "routeio/types.hpp"

namespace routeio {

/// Zone identifier of the form W-x.yZ (letter, dash, integer, dot, integer,
/// letter). Area = W-x.Z, region = W-x.
struct ZoneId {
  std::string raw;
  char w = 0;
  int x = 0;
  int y = 0;
  char z = 0;

  bool same_area(const ZoneId& other) const {
    return w == other.w && x == other.x && z == other.z;
  }
  bool same_region(const ZoneId& other) const {
    return w == other.w && x == other.x;
  }
};

ZoneId parse_zone_id(const std::string& raw);

/// d(z1, z2) = |ord(W)-ord(A)| + |x-b| + |y-c| + |ord(Z)-ord(D)|.
int zone_diff(const ZoneId& z1, const ZoneId& z2);

struct Stop {
  enum class Kind { delivery, station };
  std::string id;
  double lat = 0.0;
  double lng = 0.0;
  std::optional<std::string> zone;
  Kind kind = Kind::delivery;
};

/// One historical route: stops, the driver's actual visiting order, and the
/// travel-time matrix over the stops.
struct RouteRecord {
  std::string route_id;
  std::string depot;
  std::vector<Stop> stops;
  std::vector<int> actual_sequence;    // stop indices, station first
  std::vector<double> travel_seconds;  // n*n row-major

  int station_index() const;
  double travel(int i, int j) const {
    return travel_seconds[i * stops.size() + j];
  }
  void validate() const;
};

/// Learned zone-level routing model for one depot. The zone universe includes
/// a station hypernode (named after the depot) whose penalties are zero.
struct ZoneGraphModel {
  std::string depot;
  NodeUniverse zones;                  // station node included
  std::string station_node;
  CostVector theta;
  std::vector<LatLng> centers;         // parallel to zones
  PenaltyMatrix penalties;
};

/// Penalties M = M_area + M_region + M_diff over a zone universe; edges
/// touching `station_node` get zero.
PenaltyMatrix build_penalties(const NodeUniverse& zones,
                              const std::string& station_node);

/// Step 1: collapse a stop sequence to a zone sequence, placing each zone at
/// its longest consecutive run (earliest run on ties). The station stop is
/// skipped; every delivery stop must already have a zone.
std::vector<std::string> extract_zone_sequence(const RouteRecord& route);

/// Euclidean-closest zone center in (lat, lng) degree space; ties go to the
/// lexicographically smaller zone id.
std::string assign_missing_zone(const Stop& stop,
                                const std::vector<std::string>& zone_ids,
                                const std::vector<LatLng>& centers);

/// theta_1 as pairwise Euclidean center distances.
CostVector init_weights_euclidean(const NodeUniverse& zones,
                                  const std::vector<LatLng>& centers);

/// A zone to visit at prediction time; the center matters only for zones the
/// model has not seen.
struct ZoneVisit {
  std::string id;
  LatLng center;
};

/// Step 3: R-TSP over zones with weights theta + M; unseen zones fall back to
/// Euclidean center distance plus the pair's penalty. The returned cycle
/// begins at `start_zone`.
std::vector<std::string> predict_zone_sequence(const ZoneGraphModel& model,
                                               const std::vector<ZoneVisit>& zones_to_visit,
                                               const std::string& start_zone,
                                               const SolverChoice& choice);

/// Default penalization constant: 10 * (#stops) * (max travel time).
double default_zone_penalty(const RouteRecord& route);

/// Step 4: stop tour under the zone-sequence-penalized travel times
/// (same zone: c; consecutive zones: c + R; otherwise c + 2R), starting at
/// the station. Returns stop ids in visiting order.
std::vector<std::string> expand_to_stops(const std::vector<std::string>& zone_seq,
                                         const RouteRecord& route, double R,
                                         const SolverChoice& choice);

}  // namespace routeio
