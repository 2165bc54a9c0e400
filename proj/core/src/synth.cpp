#include "routeio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "routeio/zones.hpp"

namespace routeio {

namespace {

std::vector<std::string> numbered_nodes(int n, const std::string& prefix) {
  std::vector<std::string> names;
  names.reserve(n);
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

std::vector<LatLng> random_coords(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<LatLng> coords(n);
  for (auto& c : coords) {
    c.lat = unit(rng);
    c.lng = unit(rng);
  }
  return coords;
}

double euclid(const LatLng& a, const LatLng& b) {
  const double dx = a.lat - b.lat;
  const double dy = a.lng - b.lng;
  return std::sqrt(dx * dx + dy * dy);
}

// Random weights on a dyadic grid (k / 2^20) so sums of a few terms are
// exact; brute-force oracles can then compare costs without tolerance.
double dyadic_uniform(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> grid(1, 1 << 20);
  return static_cast<double>(grid(rng)) / static_cast<double>(1 << 20);
}

CostVector hidden_weights(const SynthConfig& config, const NodeUniverse& u,
                          const std::vector<LatLng>& coords,
                          std::mt19937_64& rng) {
  std::vector<double> w(u.edge_count(), 0.0);
  for (int e = 0; e < u.edge_count(); ++e) {
    auto [i, j] = u.edge_ends(e);
    w[e] = config.hidden == HiddenWeights::euclidean ? euclid(coords[i], coords[j])
                                                     : dyadic_uniform(rng);
  }
  return CostVector(std::move(w));
}

}  // namespace

void SynthConfig::validate() const {
  if (train_count < 1 || test_count < 0) {
    throw std::invalid_argument("SynthConfig: counts must be >= 1 train, >= 0 test");
  }
  switch (kind) {
    case ProblemKind::rtsp:
      if (nodes < 3) throw std::invalid_argument("SynthConfig: rtsp needs >= 3 nodes");
      if (subset_min < 2 || subset_min > subset_max) {
        throw std::invalid_argument("SynthConfig: bad subset range");
      }
      break;
    case ProblemKind::scvrp:
      if (nodes < 3 || nodes > 11) {
        throw std::invalid_argument("SynthConfig: scvrp supports 2..10 customers");
      }
      break;
    case ProblemKind::vrptw:
      if (nodes < 2 || nodes > 9) {
        throw std::invalid_argument("SynthConfig: vrptw supports 1..8 customers");
      }
      break;
  }
}

SynthDataset generate_synthetic(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.rng_seed);

  SynthDataset out;
  const std::vector<LatLng> coords = random_coords(config.nodes, rng);
  out.universe = NodeUniverse(numbered_nodes(config.nodes, "n"), coords);
  out.hidden = hidden_weights(config, out.universe, coords, rng);
  SolverChoice exact;  // responses always come from the exact solver

  auto make_rtsp = [&]() {
    const int hi = std::min(config.subset_max, config.nodes);
    std::uniform_int_distribution<int> size_dist(config.subset_min, hi);
    std::vector<int> all(config.nodes);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const int m = size_dist(rng);
    Signal signal;
    signal.kind = ProblemKind::rtsp;
    signal.required.assign(all.begin(), all.begin() + m);
    std::sort(signal.required.begin(), signal.required.end());
    SignalResponseExample ex;
    ex.signal = std::move(signal);
    ex.response = solve_rtsp(out.hidden.values(), ex.signal.required,
                             std::nullopt, out.universe, exact);
    return ex;
  };

  auto make_scvrp = [&]() {
    std::uniform_int_distribution<int> demand_dist(1, std::max(1, config.demand_max));
    Signal signal;
    signal.kind = ProblemKind::scvrp;
    signal.start_node = 0;
    for (int i = 1; i < config.nodes; ++i) signal.required.push_back(i);
    signal.capacity = config.capacity;
    signal.vehicles = config.vehicles;
    for (int tries = 0;; ++tries) {
      signal.demands.clear();
      double total = 0.0;
      for (size_t k = 0; k < signal.required.size(); ++k) {
        signal.demands.push_back(demand_dist(rng));
        total += signal.demands.back();
      }
      if (total <= config.capacity * config.vehicles) break;
      if (tries >= config.retry_cap) {
        throw std::runtime_error("generate_synthetic: cannot draw feasible demands");
      }
    }
    ScvrpInstance inst;
    inst.universe = &out.universe;
    inst.depot = 0;
    inst.customers = signal.required;
    inst.demands = signal.demands;
    inst.capacity = signal.capacity;
    inst.vehicles = signal.vehicles;
    inst.weights = out.hidden.values();
    SignalResponseExample ex;
    ex.signal = std::move(signal);
    ex.response = solve_scvrp_exact(inst);
    return ex;
  };

  // Base windows from a feasible-by-construction schedule; each example
  // reshuffles them among the customers and keeps only solvable draws.
  std::vector<TimeWindow> base_windows;
  std::vector<double> travel;
  if (config.kind == ProblemKind::vrptw) {
    travel.assign(out.universe.edge_count(), 0.0);
    for (int e = 0; e < out.universe.edge_count(); ++e) {
      auto [i, j] = out.universe.edge_ends(e);
      travel[e] = euclid(coords[i], coords[j]);
    }
    std::vector<int> order(config.nodes - 1);
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng);
    base_windows.resize(config.nodes - 1);
    // Round-robin the reference tour over the vehicles.
    std::vector<double> clock(config.vehicles, 0.0);
    std::vector<int> prev(config.vehicles, 0);
    for (size_t k = 0; k < order.size(); ++k) {
      const int v = static_cast<int>(k) % config.vehicles;
      clock[v] += travel[out.universe.edge_index(prev[v], order[k])];
      base_windows[order[k] - 1] = {std::max(0.0, clock[v] - config.window_slack),
                                    clock[v] + config.window_slack};
      prev[v] = order[k];
    }
  }

  auto make_vrptw = [&]() {
    Signal signal;
    signal.kind = ProblemKind::vrptw;
    signal.start_node = 0;
    for (int i = 1; i < config.nodes; ++i) signal.required.push_back(i);
    signal.vehicles = config.vehicles;
    signal.travel_times = travel;
    signal.service_times.assign(signal.required.size(), 0.0);
    VrptwInstance inst;
    inst.universe = &out.universe;
    inst.depot = 0;
    inst.customers = signal.required;
    inst.service_times = signal.service_times;
    inst.travel_times = travel;
    inst.vehicles = config.vehicles;
    inst.weights = out.hidden.values();
    for (int tries = 0;; ++tries) {
      signal.windows = base_windows;
      std::shuffle(signal.windows.begin(), signal.windows.end(), rng);
      inst.windows = signal.windows;
      try {
        SignalResponseExample ex;
        ex.response = solve_vrptw_exact(inst);
        ex.signal = signal;
        return ex;
      } catch (const std::runtime_error&) {
        if (tries >= config.retry_cap) throw;
      }
    }
  };

  auto make_one = [&]() {
    switch (config.kind) {
      case ProblemKind::rtsp:
        return make_rtsp();
      case ProblemKind::scvrp:
        return make_scvrp();
      case ProblemKind::vrptw:
        return make_vrptw();
    }
    throw std::logic_error("generate_synthetic: unknown kind");
  };

  for (int i = 0; i < config.train_count; ++i) out.train.push_back(make_one());
  for (int i = 0; i < config.test_count; ++i) out.test.push_back(make_one());
  return out;
}

ScvrpDemo make_scvrp_demo() {
  // Two spatial clusters around the depot; with K=2 and c=3 the optimal
  // solution serves the left three and the right two separately.
  const std::vector<LatLng> coords = {
      {0.0, 0.0},    // depot
      {-2.0, 0.5}, {-2.5, 1.5}, {-1.5, 2.0},  // left cluster
      {2.0, 0.5}, {2.2, 1.8},                 // right cluster
  };
  ScvrpDemo demo;
  demo.universe = NodeUniverse(
      {"depot", "c1", "c2", "c3", "c4", "c5"}, coords);
  std::vector<double> w(demo.universe.edge_count(), 0.0);
  for (int e = 0; e < demo.universe.edge_count(); ++e) {
    auto [i, j] = demo.universe.edge_ends(e);
    w[e] = euclid(coords[i], coords[j]);
  }
  demo.true_weights = CostVector(std::move(w));

  Signal signal;
  signal.kind = ProblemKind::scvrp;
  signal.start_node = 0;
  signal.required = {1, 2, 3, 4, 5};
  signal.demands = {1, 1, 1, 1, 1};
  signal.capacity = 3.0;
  signal.vehicles = 2;

  ScvrpInstance inst;
  inst.universe = &demo.universe;
  inst.depot = 0;
  inst.customers = signal.required;
  inst.demands = signal.demands;
  inst.capacity = signal.capacity;
  inst.vehicles = signal.vehicles;
  inst.weights = demo.true_weights.values();

  demo.example.signal = std::move(signal);
  demo.example.response = solve_scvrp_exact(inst);
  return demo;
}

ZoneFixture make_zone_fixture(int route_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::string depot = "DF1";
  const std::vector<std::string> zone_ids = {
      "A-1.1A", "A-1.1B", "A-1.2A", "A-2.1A", "A-2.2B"};

  // Planted model: zone centers on a small coordinate scale so every weight
  // stays well below the unit penalties.
  std::vector<std::string> names{depot};
  names.insert(names.end(), zone_ids.begin(), zone_ids.end());
  std::vector<LatLng> centers{{0.0, 0.0}};
  std::uniform_real_distribution<double> spread(-0.03, 0.03);
  for (size_t k = 0; k < zone_ids.size(); ++k) {
    centers.push_back({spread(rng), spread(rng)});
  }
  NodeUniverse zones(names);
  CostVector base = init_weights_euclidean(zones, centers);
  std::uniform_real_distribution<double> bump(0.5, 1.5);
  std::vector<double> theta = base.values();
  for (double& w : theta) w *= bump(rng);

  ZoneFixture fixture;
  fixture.planted.depot = depot;
  fixture.planted.zones = zones;
  fixture.planted.station_node = depot;
  fixture.planted.theta = CostVector(std::move(theta));
  fixture.planted.centers = centers;
  fixture.planted.penalties = build_penalties(zones, depot);

  SolverChoice exact;
  std::uniform_real_distribution<double> jitter(-0.002, 0.002);
  for (int r = 0; r < route_count; ++r) {
    // Visit all zones or a random four of them.
    std::vector<std::string> visit_ids = zone_ids;
    if (rng() % 2 == 0) {
      visit_ids.erase(visit_ids.begin() + rng() % visit_ids.size());
    }
    std::vector<ZoneVisit> visits{{depot, centers[0]}};
    for (const std::string& z : visit_ids) {
      visits.push_back({z, centers[zones.rank(z)]});
    }
    std::vector<std::string> zone_seq =
        predict_zone_sequence(fixture.planted, visits, depot, exact);
    zone_seq.erase(zone_seq.begin());

    RouteRecord rec;
    rec.route_id = "R" + std::to_string(r);
    rec.depot = depot;
    Stop station;
    station.id = rec.route_id + "_ST";
    station.kind = Stop::Kind::station;
    rec.stops.push_back(station);
    for (const std::string& z : visit_ids) {
      const LatLng& c = centers[zones.rank(z)];
      for (int s = 0; s < 2; ++s) {
        Stop stop;
        stop.id = rec.route_id + "_" + z + "_" + std::to_string(s);
        stop.lat = c.lat + jitter(rng);
        stop.lng = c.lng + jitter(rng);
        stop.zone = z;
        rec.stops.push_back(std::move(stop));
      }
    }
    const int n = static_cast<int>(rec.stops.size());
    rec.travel_seconds.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        rec.travel_seconds[i * n + j] =
            1000.0 * euclid({rec.stops[i].lat, rec.stops[i].lng},
                            {rec.stops[j].lat, rec.stops[j].lng});
      }
    }
    // Actual order: the planted zone sequence, stops within a zone in id order.
    rec.actual_sequence.push_back(0);
    for (const std::string& z : zone_seq) {
      for (int i = 1; i < n; ++i) {
        if (rec.stops[i].zone == z) rec.actual_sequence.push_back(i);
      }
    }
    rec.validate();
    fixture.planted_zone_seqs[rec.route_id] = std::move(zone_seq);
    fixture.bundle.by_depot[depot].push_back(std::move(rec));
  }
  fixture.bundle.provenance.loaded = route_count;
  return fixture;
}

}  // namespace routeio
