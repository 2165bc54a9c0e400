#include "routeio/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace routeio {

NodeUniverse::NodeUniverse(std::vector<std::string> nodes,
                           std::vector<LatLng> coords)
    : nodes_(std::move(nodes)), coords_(std::move(coords)) {
  if (!coords_.empty() && coords_.size() != nodes_.size()) {
    throw std::invalid_argument("NodeUniverse: coords size != nodes size");
  }
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    if (!index_.emplace(nodes_[i], i).second) {
      throw std::invalid_argument("NodeUniverse: duplicate node id '" +
                                  nodes_[i] + "'");
    }
  }
  for (const auto& c : coords_) {
    if (!std::isfinite(c.lat) || !std::isfinite(c.lng)) {
      throw std::invalid_argument("NodeUniverse: non-finite coordinate");
    }
  }
}

int NodeUniverse::rank(const std::string& node) const {
  auto it = index_.find(node);
  if (it == index_.end()) {
    throw std::invalid_argument("NodeUniverse: unknown node '" + node + "'");
  }
  return it->second;
}

CostVector::CostVector(std::vector<double> weights)
    : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("CostVector: weights must be finite and >= 0");
    }
  }
}

CostVector CostVector::zeros(int edge_count) {
  return CostVector(std::vector<double>(edge_count, 0.0));
}

CostVector CostVector::constant(int edge_count, double value) {
  return CostVector(std::vector<double>(edge_count, value));
}

RouteBinary::RouteBinary(std::vector<int> edges, int dimension)
    : edges_(std::move(edges)), dimension_(dimension) {
  std::sort(edges_.begin(), edges_.end());
  for (size_t k = 0; k < edges_.size(); ++k) {
    if (edges_[k] < 0 || edges_[k] >= dimension_) {
      throw std::invalid_argument("RouteBinary: edge index out of range");
    }
    if (k > 0 && edges_[k] == edges_[k - 1]) {
      throw std::invalid_argument("RouteBinary: duplicate edge");
    }
  }
}

bool RouteBinary::uses(int e) const {
  return std::binary_search(edges_.begin(), edges_.end(), e);
}

PenaltyMatrix::PenaltyMatrix(std::vector<double> entries)
    : entries_(std::move(entries)) {
  for (double v : entries_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("PenaltyMatrix: entries must be finite");
    }
  }
}

PenaltyMatrix PenaltyMatrix::zeros(int edge_count) {
  return PenaltyMatrix(std::vector<double>(edge_count, 0.0));
}

void Signal::validate(const NodeUniverse& universe) const {
  if (required.empty()) {
    throw std::invalid_argument("Signal: required nodes empty");
  }
  std::set<int> seen;
  for (int r : required) {
    if (r < 0 || r >= universe.size()) {
      throw std::invalid_argument("Signal: node rank out of range");
    }
    if (!seen.insert(r).second) {
      throw std::invalid_argument("Signal: duplicate required node");
    }
  }
  if (start_node && (*start_node < 0 || *start_node >= universe.size())) {
    throw std::invalid_argument("Signal: start node out of range");
  }
  if (kind == ProblemKind::scvrp) {
    if (demands.size() != required.size()) {
      throw std::invalid_argument("Signal: demands size != required size");
    }
    for (double d : demands) {
      if (!(d >= 0.0)) throw std::invalid_argument("Signal: negative demand");
    }
    if (!(capacity > 0.0)) throw std::invalid_argument("Signal: capacity <= 0");
    if (vehicles < 1) throw std::invalid_argument("Signal: vehicles < 1");
  }
  if (kind == ProblemKind::vrptw) {
    if (windows.size() != required.size()) {
      throw std::invalid_argument("Signal: windows size != required size");
    }
    for (const auto& w : windows) {
      if (w.earliest > w.latest) {
        throw std::invalid_argument("Signal: window earliest > latest");
      }
    }
    if (vehicles < 1) throw std::invalid_argument("Signal: vehicles < 1");
  }
}

RouteBinary tour_to_binary(std::span<const int> tour,
                           const NodeUniverse& universe) {
  if (tour.size() < 2) {
    throw std::invalid_argument("tour_to_binary: tour length < 2");
  }
  std::set<int> seen;
  for (int node : tour) {
    if (node < 0 || node >= universe.size()) {
      throw std::invalid_argument("tour_to_binary: node not in universe");
    }
    if (!seen.insert(node).second) {
      throw std::invalid_argument("tour_to_binary: duplicate node in tour");
    }
  }
  std::vector<int> edges;
  edges.reserve(tour.size());
  for (size_t k = 0; k < tour.size(); ++k) {
    const int from = tour[k];
    const int to = tour[(k + 1) % tour.size()];
    edges.push_back(universe.edge_index(from, to));
  }
  return RouteBinary(std::move(edges), universe.edge_count());
}

std::vector<int> binary_to_tour(const RouteBinary& x, int start,
                                const NodeUniverse& universe) {
  // successor[i] = j for each edge (i, j); degree checks along the way.
  std::vector<int> succ(universe.size(), -1);
  std::vector<int> indeg(universe.size(), 0);
  for (int e : x.edges()) {
    auto [i, j] = universe.edge_ends(e);
    if (succ[i] != -1) {
      throw std::invalid_argument("binary_to_tour: node out-degree > 1");
    }
    succ[i] = j;
    if (++indeg[j] > 1) {
      throw std::invalid_argument("binary_to_tour: node in-degree > 1");
    }
  }
  if (succ[start] == -1) {
    throw std::invalid_argument("binary_to_tour: start not on the cycle");
  }
  std::vector<int> tour;
  tour.reserve(x.count());
  int cur = start;
  do {
    tour.push_back(cur);
    cur = succ[cur];
    if (cur == -1) {
      throw std::invalid_argument("binary_to_tour: broken cycle");
    }
  } while (cur != start && static_cast<int>(tour.size()) <= x.count());
  if (static_cast<int>(tour.size()) != x.count()) {
    throw std::invalid_argument("binary_to_tour: subtours present");
  }
  return tour;
}

std::vector<double> augment_weights(const CostVector& theta,
                                    const RouteBinary& xhat,
                                    const PenaltyMatrix& m) {
  const int dim = theta.dimension();
  if (xhat.dimension() != dim || (!m.empty() && m.dimension() != dim)) {
    throw std::invalid_argument("augment_weights: indexing mismatch");
  }
  std::vector<double> out(theta.values());
  for (double& w : out) w -= 1.0;
  for (int e : xhat.edges()) out[e] += 2.0;
  if (!m.empty()) {
    for (int e = 0; e < dim; ++e) out[e] += m[e];
  }
  return out;
}

namespace {

// Decode the mirrored (symmetric) SCVRP encoding into undirected adjacency.
// Every used undirected edge must appear in both directions.
std::vector<std::vector<int>> undirected_adjacency(const RouteBinary& x,
                                                   const NodeUniverse& u) {
  std::vector<std::vector<int>> adj(u.size());
  for (int e : x.edges()) {
    auto [i, j] = u.edge_ends(e);
    if (!x.uses(u.edge_index(j, i))) {
      throw std::invalid_argument(
          "response: scvrp encoding not mirrored (missing reverse edge)");
    }
    if (i < j) {
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  }
  return adj;
}

}  // namespace

void check_response_feasible(const Signal& signal, const RouteBinary& response,
                             const NodeUniverse& universe) {
  signal.validate(universe);
  if (response.dimension() != universe.edge_count()) {
    throw std::invalid_argument("response: dimension mismatch with universe");
  }
  switch (signal.kind) {
    case ProblemKind::rtsp: {
      // Single cycle over exactly the required nodes.
      std::vector<int> tour = binary_to_tour(response, signal.required.front(),
                                             universe);
      std::set<int> visited(tour.begin(), tour.end());
      std::set<int> req(signal.required.begin(), signal.required.end());
      if (visited != req) {
        throw std::invalid_argument("response: cycle does not cover signal");
      }
      break;
    }
    case ProblemKind::scvrp: {
      // Mirrored binary encoding: a singleton route depot->i->depot shows as
      // a single undirected edge, so route structure is checked by walking,
      // not by raw degree counts.
      const int depot = signal.start_node.value_or(0);
      auto adj = undirected_adjacency(response, universe);
      std::vector<double> demand_of(universe.size(), 0.0);
      for (size_t k = 0; k < signal.required.size(); ++k) {
        demand_of[signal.required[k]] = signal.demands[k];
      }
      std::vector<bool> seen(universe.size(), false);
      std::vector<int> starts = adj[depot];
      std::sort(starts.begin(), starts.end());
      int covered = 0;
      int routes = 0;
      for (int s : starts) {
        if (seen[s]) continue;
        ++routes;
        double load = 0.0;
        int prev = depot, cur = s;
        while (cur != depot) {
          if (seen[cur]) {
            throw std::invalid_argument("response: node revisited");
          }
          seen[cur] = true;
          ++covered;
          load += demand_of[cur];
          int next;
          if (adj[cur].size() == 1) {
            next = adj[cur][0];  // singleton route: straight back to depot
          } else if (adj[cur].size() == 2) {
            next = (adj[cur][0] == prev) ? adj[cur][1] : adj[cur][0];
          } else {
            throw std::invalid_argument("response: customer degree > 2");
          }
          prev = cur;
          cur = next;
        }
        if (load > signal.capacity + 1e-9) {
          throw std::invalid_argument("response: route exceeds capacity");
        }
      }
      if (routes != signal.vehicles) {
        throw std::invalid_argument("response: route count != K");
      }
      if (covered != static_cast<int>(signal.required.size())) {
        throw std::invalid_argument("response: customers not all covered");
      }
      break;
    }
    case ProblemKind::vrptw: {
      const int depot = signal.start_node.value_or(0);
      std::vector<int> succ(universe.size(), -1);
      std::vector<std::vector<int>> from_depot;
      std::vector<int> depot_out;
      for (int e : response.edges()) {
        auto [i, j] = universe.edge_ends(e);
        if (i == depot) {
          depot_out.push_back(j);
        } else {
          if (succ[i] != -1) {
            throw std::invalid_argument("response: out-degree > 1");
          }
          succ[i] = j;
        }
      }
      if (static_cast<int>(depot_out.size()) > signal.vehicles) {
        throw std::invalid_argument("response: more than K routes");
      }
      std::vector<double> earliest(universe.size(), 0.0),
          latest(universe.size(), 0.0), service(universe.size(), 0.0);
      for (size_t k = 0; k < signal.required.size(); ++k) {
        earliest[signal.required[k]] = signal.windows[k].earliest;
        latest[signal.required[k]] = signal.windows[k].latest;
        service[signal.required[k]] =
            signal.service_times.empty() ? 0.0 : signal.service_times[k];
      }
      std::vector<bool> seen(universe.size(), false);
      int covered = 0;
      for (int first : depot_out) {
        double clock = 0.0;
        int prev = depot, cur = first;
        while (cur != depot) {
          if (cur == -1 || seen[cur]) {
            throw std::invalid_argument("response: broken vrptw route");
          }
          seen[cur] = true;
          ++covered;
          clock += signal.travel_times[universe.edge_index(prev, cur)];
          clock = std::max(clock, earliest[cur]);
          if (clock > latest[cur] + 1e-9) {
            throw std::invalid_argument("response: time window violated");
          }
          clock += service[cur];
          prev = cur;
          cur = succ[cur];
        }
      }
      if (covered != static_cast<int>(signal.required.size())) {
        throw std::invalid_argument("response: customers not all covered");
      }
      break;
    }
  }
}

}  // namespace routeio
