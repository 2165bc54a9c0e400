#include "routeio/data.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace routeio {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

RouteRecord parse_route(const std::string& route_id, const json& jroute,
                        const json& jtimes, const json& jseq) {
  RouteRecord rec;
  rec.route_id = route_id;
  rec.depot = jroute.at("station_code").get<std::string>();

  const json& jstops = jroute.at("stops");
  for (auto it = jstops.begin(); it != jstops.end(); ++it) {
    Stop s;
    s.id = it.key();
    s.lat = it.value().at("lat").get<double>();
    s.lng = it.value().at("lng").get<double>();
    const std::string type = it.value().at("type").get<std::string>();
    if (type == "station") {
      s.kind = Stop::Kind::station;
    } else if (type == "delivery") {
      s.kind = Stop::Kind::delivery;
    } else {
      throw std::runtime_error("stop '" + s.id + "': unknown type '" + type + "'");
    }
    if (it.value().contains("zone_id") && !it.value()["zone_id"].is_null()) {
      s.zone = it.value()["zone_id"].get<std::string>();
    }
    rec.stops.push_back(std::move(s));
  }
  const int n = static_cast<int>(rec.stops.size());
  std::map<std::string, int> stop_rank;
  for (int i = 0; i < n; ++i) stop_rank[rec.stops[i].id] = i;

  rec.travel_seconds.assign(n * n, 0.0);
  for (auto from = jtimes.begin(); from != jtimes.end(); ++from) {
    auto fi = stop_rank.find(from.key());
    if (fi == stop_rank.end()) {
      throw std::runtime_error("travel times reference unknown stop '" + from.key() + "'");
    }
    for (auto to = from.value().begin(); to != from.value().end(); ++to) {
      auto ti = stop_rank.find(to.key());
      if (ti == stop_rank.end()) {
        throw std::runtime_error("travel times reference unknown stop '" + to.key() + "'");
      }
      rec.travel_seconds[fi->second * n + ti->second] = to.value().get<double>();
    }
  }

  rec.actual_sequence.assign(n, -1);
  for (auto it = jseq.begin(); it != jseq.end(); ++it) {
    auto si = stop_rank.find(it.key());
    if (si == stop_rank.end()) {
      throw std::runtime_error("sequence references unknown stop '" + it.key() + "'");
    }
    const int order = it.value().get<int>();
    if (order < 0 || order >= n || rec.actual_sequence[order] != -1) {
      throw std::runtime_error("sequence order index invalid for stop '" + it.key() + "'");
    }
    rec.actual_sequence[order] = si->second;
  }
  rec.validate();
  return rec;
}

// Impute zones for delivery stops that lack one, from the route's own zone
// centers.
void impute_zones(RouteRecord& rec) {
  std::map<std::string, std::pair<LatLng, int>> acc;
  for (const Stop& s : rec.stops) {
    if (s.kind == Stop::Kind::delivery && s.zone) {
      auto& [center, count] = acc[*s.zone];
      center.lat += s.lat;
      center.lng += s.lng;
      ++count;
    }
  }
  std::vector<std::string> ids;
  std::vector<LatLng> centers;
  for (auto& [zone, entry] : acc) {
    ids.push_back(zone);
    centers.push_back({entry.first.lat / entry.second, entry.first.lng / entry.second});
  }
  for (Stop& s : rec.stops) {
    if (s.kind == Stop::Kind::delivery && !s.zone) {
      s.zone = assign_missing_zone(s, ids, centers);
    }
  }
}

}  // namespace

int DatasetBundle::route_count() const {
  int total = 0;
  for (const auto& [depot, routes] : by_depot) {
    total += static_cast<int>(routes.size());
  }
  return total;
}

DatasetBundle load_dataset(const std::string& routes_path,
                           const std::string& times_path,
                           const std::string& sequences_path) {
  const json jroutes = read_json(routes_path);
  const json jtimes = read_json(times_path);
  const json jseqs = read_json(sequences_path);

  DatasetBundle bundle;
  bundle.provenance.routes_path = routes_path;
  bundle.provenance.times_path = times_path;
  bundle.provenance.sequences_path = sequences_path;

  for (auto it = jroutes.begin(); it != jroutes.end(); ++it) {
    const std::string& route_id = it.key();
    try {
      if (!jtimes.contains(route_id)) {
        throw std::runtime_error("no travel times for route");
      }
      if (!jseqs.contains(route_id)) {
        throw std::runtime_error("no actual sequence for route");
      }
      RouteRecord rec = parse_route(route_id, it.value(), jtimes[route_id],
                                    jseqs[route_id]);
      impute_zones(rec);
      bundle.by_depot[rec.depot].push_back(std::move(rec));
      ++bundle.provenance.loaded;
    } catch (const std::exception& e) {
      ++bundle.provenance.skipped;
      bundle.provenance.warnings.push_back(route_id + ": " + e.what());
    }
  }
  return bundle;
}

void save_dataset(const DatasetBundle& bundle, const std::string& routes_path,
                  const std::string& times_path,
                  const std::string& sequences_path) {
  json jroutes = json::object();
  json jtimes = json::object();
  json jseqs = json::object();
  for (const auto& [depot, routes] : bundle.by_depot) {
    for (const RouteRecord& rec : routes) {
      json stops = json::object();
      for (const Stop& s : rec.stops) {
        json js;
        js["lat"] = s.lat;
        js["lng"] = s.lng;
        js["type"] = s.kind == Stop::Kind::station ? "station" : "delivery";
        if (s.zone) js["zone_id"] = *s.zone;
        stops[s.id] = std::move(js);
      }
      jroutes[rec.route_id] = {{"station_code", rec.depot}, {"stops", stops}};

      const int n = static_cast<int>(rec.stops.size());
      json times = json::object();
      for (int i = 0; i < n; ++i) {
        json row = json::object();
        for (int j = 0; j < n; ++j) {
          if (i != j) row[rec.stops[j].id] = rec.travel(i, j);
        }
        times[rec.stops[i].id] = std::move(row);
      }
      jtimes[rec.route_id] = std::move(times);

      json seq = json::object();
      for (int k = 0; k < n; ++k) {
        seq[rec.stops[rec.actual_sequence[k]].id] = k;
      }
      jseqs[rec.route_id] = std::move(seq);
    }
  }
  write_json(jroutes, routes_path);
  write_json(jtimes, times_path);
  write_json(jseqs, sequences_path);
}

void save_sequences(const std::map<std::string, std::vector<std::string>>& seqs,
                    const std::string& path) {
  json j = json::object();
  for (const auto& [route_id, order] : seqs) {
    json rec = json::object();
    for (size_t k = 0; k < order.size(); ++k) {
      rec[order[k]] = k;
    }
    j[route_id] = std::move(rec);
  }
  write_json(j, path);
}

std::map<std::string, std::vector<std::string>> load_sequences(
    const std::string& path) {
  const json j = read_json(path);
  std::map<std::string, std::vector<std::string>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<std::string> order(it.value().size());
    for (auto s = it.value().begin(); s != it.value().end(); ++s) {
      const int idx = s.value().get<int>();
      if (idx < 0 || idx >= static_cast<int>(order.size())) {
        throw std::runtime_error(path + ": bad order index for route " + it.key());
      }
      order[idx] = s.key();
    }
    out[it.key()] = std::move(order);
  }
  return out;
}

namespace {
constexpr int kModelVersion = 1;
}

void save_models(const std::map<std::string, ZoneGraphModel>& models,
                 const std::string& path) {
  json j;
  j["version"] = kModelVersion;
  json jmodels = json::object();
  for (const auto& [depot, model] : models) {
    json jm;
    jm["depot"] = model.depot;
    jm["station_node"] = model.station_node;
    jm["zones"] = model.zones.nodes();
    jm["weights"] = model.theta.values();
    json centers = json::array();
    for (const LatLng& c : model.centers) {
      centers.push_back({c.lat, c.lng});
    }
    jm["centers"] = std::move(centers);
    jm["penalties"] = model.penalties.values();
    jmodels[depot] = std::move(jm);
  }
  j["models"] = std::move(jmodels);
  write_json(j, path);
}

std::map<std::string, ZoneGraphModel> load_models(const std::string& path) {
  const json j = read_json(path);
  if (!j.contains("version") || j["version"].get<int>() != kModelVersion) {
    throw std::runtime_error(path + ": unsupported model file version");
  }
  std::map<std::string, ZoneGraphModel> out;
  for (auto it = j.at("models").begin(); it != j.at("models").end(); ++it) {
    const json& jm = it.value();
    ZoneGraphModel model;
    model.depot = jm.at("depot").get<std::string>();
    model.station_node = jm.at("station_node").get<std::string>();
    std::vector<std::string> zones = jm.at("zones").get<std::vector<std::string>>();
    model.zones = NodeUniverse(zones);
    model.theta = CostVector(jm.at("weights").get<std::vector<double>>());
    if (model.theta.dimension() != model.zones.edge_count()) {
      throw std::runtime_error(path + ": weight count does not match node ordering");
    }
    for (const auto& c : jm.at("centers")) {
      model.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    }
    if (model.centers.size() != zones.size()) {
      throw std::runtime_error(path + ": center count does not match zones");
    }
    std::vector<double> pen = jm.at("penalties").get<std::vector<double>>();
    if (!pen.empty() && static_cast<int>(pen.size()) != model.zones.edge_count()) {
      throw std::runtime_error(path + ": penalty count does not match node ordering");
    }
    model.penalties = PenaltyMatrix(std::move(pen));
    out[it.key()] = std::move(model);
  }
  return out;
}

}  // namespace routeio
