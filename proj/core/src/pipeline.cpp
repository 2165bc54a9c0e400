#include "routeio/pipeline.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace routeio {

ZoneProblem build_zone_problem(const std::vector<RouteRecord>& routes,
                               const std::string& depot) {
  if (routes.empty()) {
    throw std::invalid_argument("build_zone_problem: no routes for depot " + depot);
  }
  // Zone centers over the whole depot; the station hypernode takes the
  // station's own coordinates.
  std::map<std::string, std::pair<LatLng, int>> acc;
  LatLng station_coord{};
  bool have_station = false;
  for (const RouteRecord& rec : routes) {
    for (const Stop& s : rec.stops) {
      if (s.kind == Stop::Kind::station) {
        if (!have_station) {
          station_coord = {s.lat, s.lng};
          have_station = true;
        }
        continue;
      }
      if (!s.zone) {
        throw std::invalid_argument("build_zone_problem: unzoned stop '" + s.id + "'");
      }
      auto& [center, count] = acc[*s.zone];
      center.lat += s.lat;
      center.lng += s.lng;
      ++count;
    }
  }

  ZoneProblem problem;
  problem.station_node = depot;
  std::vector<std::string> names{depot};
  std::vector<LatLng> centers{station_coord};
  for (const auto& [zone, entry] : acc) {
    if (zone == depot) {
      throw std::invalid_argument("build_zone_problem: zone id collides with depot code");
    }
    names.push_back(zone);
    centers.push_back({entry.first.lat / entry.second, entry.first.lng / entry.second});
  }
  problem.zones = NodeUniverse(names);
  problem.centers = std::move(centers);
  problem.penalties = build_penalties(problem.zones, depot);

  for (const RouteRecord& rec : routes) {
    std::vector<std::string> zone_seq = extract_zone_sequence(rec);
    std::vector<int> tour{problem.zones.rank(depot)};
    for (const std::string& z : zone_seq) tour.push_back(problem.zones.rank(z));
    SignalResponseExample example;
    example.signal.kind = ProblemKind::rtsp;
    example.signal.required = tour;
    std::sort(example.signal.required.begin(), example.signal.required.end());
    example.signal.start_node = problem.zones.rank(depot);
    example.response = tour_to_binary(tour, problem.zones);
    problem.examples.push_back(std::move(example));
    problem.zone_sequences.push_back(std::move(zone_seq));
  }
  return problem;
}

ZoneGraphModel train_zone_model(const std::vector<RouteRecord>& routes,
                                const std::string& depot,
                                const ZoneTrainOptions& options,
                                TrainTrace* trace_out) {
  std::vector<const RouteRecord*> selected;
  selected.reserve(routes.size());
  for (const RouteRecord& r : routes) selected.push_back(&r);
  if (options.fraction < 1.0) {
    std::mt19937_64 rng(options.config.rng_seed ^ 0x5DEECE66DULL);
    std::shuffle(selected.begin(), selected.end(), rng);
    const size_t keep = std::max<size_t>(
        1, static_cast<size_t>(options.fraction * selected.size()));
    selected.resize(keep);
  }
  std::vector<RouteRecord> subset;
  subset.reserve(selected.size());
  for (const RouteRecord* r : selected) subset.push_back(*r);

  ZoneProblem problem = build_zone_problem(subset, depot);

  TrainConfig config = options.config;
  if (options.init == InitMode::euclidean) {
    config.init = init_weights_euclidean(problem.zones, problem.centers);
  } else {
    config.init = CostVector::constant(problem.zones.edge_count(),
                                       options.uniform_init_value);
  }
  // Unit penalties only dominate when the weights stay well below 1.
  double max_init = 0.0;
  for (double w : config.init.values()) max_init = std::max(max_init, w);
  if (max_init > 0.1 && options.warnings) {
    options.warnings->push_back(
        depot + ": initial weights reach " + std::to_string(max_init) +
        "; penalties of one unit may no longer dominate");
  }

  TrainTrace trace = train(problem.examples, problem.zones, problem.penalties,
                           config);
  ZoneGraphModel model;
  model.depot = depot;
  model.zones = problem.zones;
  model.station_node = problem.station_node;
  model.theta = trace.final_theta;
  model.centers = problem.centers;
  model.penalties = problem.penalties;
  if (trace_out) *trace_out = std::move(trace);
  return model;
}

std::vector<std::string> predict_route(const ZoneGraphModel& model,
                                       const RouteRecord& route, double R,
                                       const SolverChoice& choice) {
  // Zones to visit, with centers from this route's stops (used only when the
  // model has not seen a zone).
  std::map<std::string, std::pair<LatLng, int>> acc;
  for (const Stop& s : route.stops) {
    if (s.kind != Stop::Kind::delivery) continue;
    if (!s.zone) {
      throw std::invalid_argument("predict_route: unzoned stop '" + s.id + "'");
    }
    auto& [center, count] = acc[*s.zone];
    center.lat += s.lat;
    center.lng += s.lng;
    ++count;
  }
  const int station = route.station_index();
  std::vector<ZoneVisit> visits;
  visits.push_back({model.station_node,
                    {route.stops[station].lat, route.stops[station].lng}});
  for (const auto& [zone, entry] : acc) {
    visits.push_back({zone, {entry.first.lat / entry.second,
                             entry.first.lng / entry.second}});
  }

  std::vector<std::string> zone_seq =
      predict_zone_sequence(model, visits, model.station_node, choice);
  zone_seq.erase(zone_seq.begin());  // drop the station hypernode

  const double penalty = R < 0.0 ? default_zone_penalty(route) : R;
  return expand_to_stops(zone_seq, route, penalty, choice);
}

std::vector<ScoreReport> score_bundle(
    const DatasetBundle& bundle,
    const std::map<std::string, std::vector<std::string>>& proposed) {
  std::vector<ScoreReport> reports;
  for (const auto& [depot, routes] : bundle.by_depot) {
    for (const RouteRecord& rec : routes) {
      auto it = proposed.find(rec.route_id);
      if (it == proposed.end()) continue;
      std::map<std::string, int> stop_rank;
      for (size_t i = 0; i < rec.stops.size(); ++i) stop_rank[rec.stops[i].id] = i;
      std::vector<int> seq;
      for (const std::string& id : it->second) {
        auto si = stop_rank.find(id);
        if (si == stop_rank.end()) {
          throw std::invalid_argument("score_bundle: unknown stop '" + id +
                                      "' in proposal for " + rec.route_id);
        }
        seq.push_back(si->second);
      }
      ScoreReport report = challenge_score(rec, seq);

      // Zone-level error between the induced and actual zone sequences.
      RouteRecord proposed_rec = rec;
      proposed_rec.actual_sequence = seq;
      const std::vector<std::string> pred_zones = extract_zone_sequence(proposed_rec);
      const std::vector<std::string> true_zones = extract_zone_sequence(rec);
      if (std::set<std::string>(pred_zones.begin(), pred_zones.end()) ==
          std::set<std::string>(true_zones.begin(), true_zones.end()) &&
          pred_zones.size() == true_zones.size()) {
        auto [count, len] = zone_prediction_error(pred_zones, true_zones);
        report.zone_error_count = count;
        report.zone_seq_len = len;
      } else {
        report.zone_error_count = static_cast<int>(true_zones.size());
        report.zone_seq_len = static_cast<int>(true_zones.size());
      }
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

}  // namespace routeio
