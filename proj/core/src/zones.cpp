#include "routeio/zones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <regex>
#include <set>
#include <stdexcept>

namespace routeio {

ZoneId parse_zone_id(const std::string& raw) {
  static const std::regex pattern(R"(^([A-Za-z])-(\d+)\.(\d+)([A-Za-z])$)");
  std::smatch m;
  if (!std::regex_match(raw, m, pattern)) {
    throw std::invalid_argument("parse_zone_id: malformed zone id '" + raw + "'");
  }
  ZoneId z;
  z.raw = raw;
  z.w = m[1].str()[0];
  z.x = std::stoi(m[2].str());
  z.y = std::stoi(m[3].str());
  z.z = m[4].str()[0];
  return z;
}

int zone_diff(const ZoneId& z1, const ZoneId& z2) {
  return std::abs(static_cast<int>(z1.w) - static_cast<int>(z2.w)) +
         std::abs(z1.x - z2.x) + std::abs(z1.y - z2.y) +
         std::abs(static_cast<int>(z1.z) - static_cast<int>(z2.z));
}

int RouteRecord::station_index() const {
  for (size_t i = 0; i < stops.size(); ++i) {
    if (stops[i].kind == Stop::Kind::station) return static_cast<int>(i);
  }
  throw std::invalid_argument("RouteRecord: no station stop");
}

void RouteRecord::validate() const {
  const size_t n = stops.size();
  if (n < 2) throw std::invalid_argument("RouteRecord: fewer than 2 stops");
  if (travel_seconds.size() != n * n) {
    throw std::invalid_argument("RouteRecord: travel matrix size mismatch");
  }
  for (double t : travel_seconds) {
    if (!(t >= 0.0)) throw std::invalid_argument("RouteRecord: negative travel time");
  }
  if (actual_sequence.size() != n) {
    throw std::invalid_argument("RouteRecord: sequence length != stop count");
  }
  std::vector<bool> seen(n, false);
  for (int idx : actual_sequence) {
    if (idx < 0 || idx >= static_cast<int>(n) || seen[idx]) {
      throw std::invalid_argument("RouteRecord: sequence not a permutation");
    }
    seen[idx] = true;
  }
  if (stops[actual_sequence.front()].kind != Stop::Kind::station) {
    throw std::invalid_argument("RouteRecord: sequence does not start at station");
  }
}

PenaltyMatrix build_penalties(const NodeUniverse& zones,
                              const std::string& station_node) {
  std::vector<std::optional<ZoneId>> parsed(zones.size());
  for (int i = 0; i < zones.size(); ++i) {
    if (zones.name(i) == station_node) continue;
    parsed[i] = parse_zone_id(zones.name(i));
  }
  std::vector<double> entries(zones.edge_count(), 0.0);
  for (int i = 0; i < zones.size(); ++i) {
    for (int j = 0; j < zones.size(); ++j) {
      if (i == j) continue;
      if (!parsed[i] || !parsed[j]) continue;  // station edges stay 0
      const ZoneId& a = *parsed[i];
      const ZoneId& b = *parsed[j];
      double m = 0.0;
      if (!a.same_area(b)) m += 1.0;
      if (!a.same_region(b)) m += 1.0;
      m += zone_diff(a, b);
      entries[zones.edge_index(i, j)] = m;
    }
  }
  return PenaltyMatrix(std::move(entries));
}

std::vector<std::string> extract_zone_sequence(const RouteRecord& route) {
  // Zones of delivery stops in visiting order.
  std::vector<std::string> visit_zones;
  for (int idx : route.actual_sequence) {
    const Stop& s = route.stops[idx];
    if (s.kind == Stop::Kind::station) continue;
    if (!s.zone) {
      throw std::invalid_argument("extract_zone_sequence: stop '" + s.id +
                                  "' has no zone (impute first)");
    }
    visit_zones.push_back(*s.zone);
  }
  // Longest run per zone, earliest run wins ties.
  struct Run {
    size_t start;
    size_t length;
  };
  std::map<std::string, Run> best;
  size_t i = 0;
  while (i < visit_zones.size()) {
    size_t j = i;
    while (j < visit_zones.size() && visit_zones[j] == visit_zones[i]) ++j;
    const Run run{i, j - i};
    auto it = best.find(visit_zones[i]);
    if (it == best.end() || run.length > it->second.length) {
      best[visit_zones[i]] = run;  // strictly longer; earliest kept on ties
    }
    i = j;
  }
  std::vector<std::pair<size_t, std::string>> ordered;
  ordered.reserve(best.size());
  for (const auto& [zone, run] : best) ordered.emplace_back(run.start, zone);
  std::sort(ordered.begin(), ordered.end());
  std::vector<std::string> out;
  out.reserve(ordered.size());
  for (auto& [start, zone] : ordered) out.push_back(std::move(zone));
  return out;
}

std::string assign_missing_zone(const Stop& stop,
                                const std::vector<std::string>& zone_ids,
                                const std::vector<LatLng>& centers) {
  if (zone_ids.empty() || zone_ids.size() != centers.size()) {
    throw std::invalid_argument("assign_missing_zone: no zones available");
  }
  int pick = -1;
  double best = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < zone_ids.size(); ++k) {
    const double dx = stop.lat - centers[k].lat;
    const double dy = stop.lng - centers[k].lng;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best || (d2 == best && zone_ids[k] < zone_ids[pick])) {
      best = d2;
      pick = static_cast<int>(k);
    }
  }
  return zone_ids[pick];
}

CostVector init_weights_euclidean(const NodeUniverse& zones,
                                  const std::vector<LatLng>& centers) {
  if (zones.size() < 2) {
    throw std::invalid_argument("init_weights_euclidean: fewer than 2 zones");
  }
  if (static_cast<int>(centers.size()) != zones.size()) {
    throw std::invalid_argument("init_weights_euclidean: centers size mismatch");
  }
  std::vector<double> w(zones.edge_count(), 0.0);
  for (int i = 0; i < zones.size(); ++i) {
    for (int j = 0; j < zones.size(); ++j) {
      if (i == j) continue;
      const double dx = centers[i].lat - centers[j].lat;
      const double dy = centers[i].lng - centers[j].lng;
      w[zones.edge_index(i, j)] = std::sqrt(dx * dx + dy * dy);
    }
  }
  return CostVector(std::move(w));
}

std::vector<std::string> predict_zone_sequence(
    const ZoneGraphModel& model, const std::vector<ZoneVisit>& zones_to_visit,
    const std::string& start_zone, const SolverChoice& choice) {
  if (zones_to_visit.empty()) {
    throw std::invalid_argument("predict_zone_sequence: nothing to visit");
  }
  // Local universe over the visiting set (station included by contract).
  std::vector<std::string> names;
  names.reserve(zones_to_visit.size());
  for (const auto& v : zones_to_visit) names.push_back(v.id);
  NodeUniverse local(names);
  const int n = local.size();

  auto model_rank = [&](const std::string& id) -> int {
    return model.zones.contains(id) ? model.zones.rank(id) : -1;
  };
  std::vector<std::optional<ZoneId>> parsed(n);
  for (int i = 0; i < n; ++i) {
    if (names[i] != model.station_node && names[i] != start_zone) {
      parsed[i] = parse_zone_id(names[i]);
    }
  }

  std::vector<double> w(local.edge_count(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int mi = model_rank(names[i]);
      const int mj = model_rank(names[j]);
      double value;
      if (mi >= 0 && mj >= 0) {
        const int e = model.zones.edge_index(mi, mj);
        value = model.theta[e] + model.penalties[e];
      } else {
        // Unseen zone: Euclidean center distance plus the pair's penalty.
        const double dx = zones_to_visit[i].center.lat - zones_to_visit[j].center.lat;
        const double dy = zones_to_visit[i].center.lng - zones_to_visit[j].center.lng;
        value = std::sqrt(dx * dx + dy * dy);
        if (parsed[i] && parsed[j]) {
          double m = 0.0;
          if (!parsed[i]->same_area(*parsed[j])) m += 1.0;
          if (!parsed[i]->same_region(*parsed[j])) m += 1.0;
          m += zone_diff(*parsed[i], *parsed[j]);
          value += m;
        }
      }
      w[local.edge_index(i, j)] = value;
    }
  }

  std::vector<int> required(n);
  for (int i = 0; i < n; ++i) required[i] = i;
  const RouteBinary cycle = solve_rtsp(w, required, std::nullopt, local, choice);
  std::vector<int> tour = binary_to_tour(cycle, local.rank(start_zone), local);
  std::vector<std::string> out;
  out.reserve(tour.size());
  for (int r : tour) out.push_back(local.name(r));
  return out;
}

double default_zone_penalty(const RouteRecord& route) {
  double max_c = 0.0;
  for (double t : route.travel_seconds) max_c = std::max(max_c, t);
  return 10.0 * static_cast<double>(route.stops.size()) * max_c;
}

std::vector<std::string> expand_to_stops(const std::vector<std::string>& zone_seq,
                                         const RouteRecord& route, double R,
                                         const SolverChoice& choice) {
  if (R < 0.0) throw std::invalid_argument("expand_to_stops: R < 0");
  const int n = static_cast<int>(route.stops.size());
  const int station = route.station_index();

  // Zone positions in the target order; the station sits at position -1 so
  // station -> first-zone edges count as consecutive. A leading station entry
  // (as produced by predict_zone_sequence) is tolerated and stripped.
  std::vector<std::string> seq = zone_seq;
  const std::string& station_id = route.stops[station].id;
  std::erase_if(seq, [&](const std::string& z) { return z == station_id; });
  std::map<std::string, int> zone_pos;
  for (size_t k = 0; k < seq.size(); ++k) {
    zone_pos[seq[k]] = static_cast<int>(k);
  }
  auto pos_of = [&](int stop) -> int {
    if (stop == station) return -1;
    const Stop& s = route.stops[stop];
    if (!s.zone || zone_pos.find(*s.zone) == zone_pos.end()) {
      throw std::invalid_argument("expand_to_stops: stop '" + s.id +
                                  "' not covered by the zone sequence");
    }
    return zone_pos[*s.zone];
  };
  std::set<std::string> stop_zones;
  for (const Stop& s : route.stops) {
    if (s.kind == Stop::Kind::delivery && s.zone) stop_zones.insert(*s.zone);
  }
  if (stop_zones != std::set<std::string>(seq.begin(), seq.end())) {
    throw std::invalid_argument("expand_to_stops: zone sequence does not match stops");
  }

  // Penalized weights over stops.
  std::vector<std::string> names;
  names.reserve(n);
  for (const Stop& s : route.stops) names.push_back(s.id);
  NodeUniverse local(names);
  std::vector<double> w(local.edge_count(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int pi = pos_of(i);
      const int pj = pos_of(j);
      double c = route.travel(i, j);
      if (pi == pj) {
        // same zone, unpenalized
      } else if (pj == pi + 1) {
        c += R;
      } else {
        c += 2.0 * R;
      }
      w[local.edge_index(i, j)] = c;
    }
  }
  std::vector<int> required(n);
  for (int i = 0; i < n; ++i) required[i] = i;
  const RouteBinary cycle = solve_rtsp(w, required, station, local, choice);
  std::vector<int> tour = binary_to_tour(cycle, station, local);
  std::vector<std::string> out;
  out.reserve(tour.size());
  for (int r : tour) out.push_back(route.stops[r].id);
  return out;
}

}  // namespace routeio
