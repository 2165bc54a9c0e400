#include "routeio/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>

namespace routeio {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Weights restricted to a node subset, in "local" index space (locals are the
// subset sorted by rank, so local order == lexicographic order by node rank).
struct LocalWeights {
  std::vector<int> ranks;              // local -> rank, ascending
  std::vector<double> w;               // m*m row-major, diagonal unused

  int size() const { return static_cast<int>(ranks.size()); }
  double operator()(int a, int b) const { return w[a * size() + b]; }
};

LocalWeights make_local(std::span<const double> weights,
                        std::span<const int> nodes,
                        const NodeUniverse& universe) {
  LocalWeights lw;
  lw.ranks.assign(nodes.begin(), nodes.end());
  std::sort(lw.ranks.begin(), lw.ranks.end());
  const int m = lw.size();
  lw.w.assign(m * m, 0.0);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (a == b) continue;
      lw.w[a * m + b] = weights[universe.edge_index(lw.ranks[a], lw.ranks[b])];
    }
  }
  return lw;
}

double tour_cost_local(const LocalWeights& lw, const std::vector<int>& tour) {
  double c = 0.0;
  for (size_t k = 0; k < tour.size(); ++k) {
    c += lw(tour[k], tour[(k + 1) % tour.size()]);
  }
  return c;
}

// Rotate so local node 0 (the smallest rank) comes first.
void canonicalize(std::vector<int>& tour) {
  auto it = std::find(tour.begin(), tour.end(), 0);
  std::rotate(tour.begin(), it, tour.end());
}

// Exact tour over all m local nodes via subset DP. b[S][j] is the cheapest
// cost of starting at j, visiting exactly the nodes in S, then returning to
// node 0; the tour is rebuilt forward picking the smallest feasible next node,
// which yields the lexicographically smallest optimal tour.
std::vector<int> held_karp(const LocalWeights& lw) {
  const int m = lw.size();
  const int nbits = m - 1;  // non-anchor nodes are locals 1..m-1; bit k = local k+1
  const std::size_t nmask = std::size_t{1} << nbits;
  std::vector<double> b(nmask * m, kInf);
  for (int j = 1; j < m; ++j) b[j] = lw(j, 0);  // S empty
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    for (int j = 0; j < m; ++j) {
      if (j > 0 && (mask & (std::size_t{1} << (j - 1)))) continue;  // j in S
      double best = kInf;
      for (int k = 1; k < m; ++k) {
        const std::size_t bit = std::size_t{1} << (k - 1);
        if (!(mask & bit)) continue;
        const double v = lw(j, k) + b[(mask ^ bit) * m + k];
        if (v < best) best = v;
      }
      b[mask * m + j] = best;
    }
  }
  std::vector<int> tour{0};
  std::size_t rem = nmask - 1;
  int cur = 0;
  while (rem) {
    int pick = -1;
    double best = kInf;
    for (int k = 1; k < m; ++k) {
      const std::size_t bit = std::size_t{1} << (k - 1);
      if (!(rem & bit)) continue;
      const double v = lw(cur, k) + b[(rem ^ bit) * m + k];
      if (v < best) {
        best = v;
        pick = k;
      }
    }
    tour.push_back(pick);
    rem ^= std::size_t{1} << (pick - 1);
    cur = pick;
  }
  return tour;
}

std::vector<int> nearest_neighbor(const LocalWeights& lw, int start) {
  const int m = lw.size();
  std::vector<bool> used(m, false);
  std::vector<int> tour{start};
  used[start] = true;
  int cur = start;
  for (int step = 1; step < m; ++step) {
    int pick = -1;
    double best = kInf;
    for (int k = 0; k < m; ++k) {
      if (used[k]) continue;
      if (lw(cur, k) < best) {
        best = lw(cur, k);
        pick = k;
      }
    }
    tour.push_back(pick);
    used[pick] = true;
    cur = pick;
  }
  return tour;
}

// 2-opt (segment reversal) + or-opt (segment relocation, lengths 1..3),
// first improvement, iterated to a local optimum.
void improve(const LocalWeights& lw, std::vector<int>& tour, int max_passes) {
  const int m = lw.size();
  if (m < 4) return;
  double cost = tour_cost_local(lw, tour);
  for (int pass = 0; pass < max_passes; ++pass) {
    bool improved = false;
    // 2-opt: reverse tour[i..j]. Asymmetric weights, so recompute candidates.
    for (int i = 1; i < m - 1 && !improved; ++i) {
      for (int j = i + 1; j < m && !improved; ++j) {
        std::vector<int> cand = tour;
        std::reverse(cand.begin() + i, cand.begin() + j + 1);
        const double c = tour_cost_local(lw, cand);
        if (c < cost - 1e-12) {
          tour = std::move(cand);
          cost = c;
          improved = true;
        }
      }
    }
    // or-opt: move a segment of length L elsewhere, orientation kept.
    for (int L = 1; L <= 3 && !improved; ++L) {
      for (int i = 0; i + L <= m && !improved; ++i) {
        for (int j = 0; j < m && !improved; ++j) {
          if (j >= i && j <= i + L) continue;
          std::vector<int> cand;
          cand.reserve(m);
          for (int k = 0; k < m; ++k) {
            if (k >= i && k < i + L) continue;
            cand.push_back(tour[k]);
            // insert after position j maps to: after the element tour[j]
          }
          // insertion point: after the element that was tour[j] (j outside seg)
          auto pos = std::find(cand.begin(), cand.end(), tour[j]);
          cand.insert(pos + 1, tour.begin() + i, tour.begin() + i + L);
          const double c = tour_cost_local(lw, cand);
          if (c < cost - 1e-12) {
            tour = std::move(cand);
            cost = c;
            improved = true;
          }
        }
      }
    }
    if (!improved) break;
  }
}

std::vector<int> local_search(const LocalWeights& lw, const SolverChoice& choice) {
  const int m = lw.size();
  std::vector<int> best;
  double best_cost = kInf;
  const int restarts = std::max(1, choice.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> tour;
    if (r == 0) {
      tour = nearest_neighbor(lw, 0);
    } else {
      std::mt19937_64 rng(choice.seed * 0x9E3779B97F4A7C15ULL + r);
      tour = nearest_neighbor(
          lw, static_cast<int>(rng() % static_cast<std::uint64_t>(m)));
    }
    improve(lw, tour, choice.max_passes);
    canonicalize(tour);
    const double c = tour_cost_local(lw, tour);
    if (c < best_cost - 1e-12 ||
        (std::abs(c - best_cost) <= 1e-12 && tour < best)) {
      best = tour;
      best_cost = c;
    }
  }
  return best;
}

RouteBinary to_binary(const LocalWeights& lw, const std::vector<int>& tour,
                      const NodeUniverse& universe) {
  std::vector<int> ranks;
  ranks.reserve(tour.size());
  for (int loc : tour) ranks.push_back(lw.ranks[loc]);
  return tour_to_binary(ranks, universe);
}

}  // namespace

double route_cost(std::span<const double> weights, const RouteBinary& x) {
  double c = 0.0;
  for (int e : x.edges()) c += weights[e];
  return c;
}

RouteBinary solve_rtsp(std::span<const double> weights,
                       std::span<const int> required,
                       std::optional<int> /*start*/,
                       const NodeUniverse& universe,
                       const SolverChoice& choice) {
  if (required.size() < 2) {
    throw std::invalid_argument("solve_rtsp: fewer than 2 required nodes");
  }
  LocalWeights lw = make_local(weights, required, universe);
  if (static_cast<int>(lw.ranks.size()) != static_cast<int>(required.size())) {
    throw std::invalid_argument("solve_rtsp: duplicate required node");
  }
  const int m = lw.size();
  if (m == 2) {
    return to_binary(lw, {0, 1}, universe);
  }
  bool exact = choice.kind == SolverChoice::Kind::exact_dp;
  if (exact && m > choice.exact_cutoff) {
    if (choice.strict) {
      throw std::runtime_error("solve_rtsp: instance above exact-dp cutoff");
    }
    std::cerr << "solve_rtsp: " << m << " nodes above exact-dp cutoff "
              << choice.exact_cutoff << ", falling back to local search\n";
    exact = false;
  }
  if (m <= 3) exact = true;  // only two candidate tours anyway
  std::vector<int> tour = exact ? held_karp(lw) : local_search(lw, choice);
  return to_binary(lw, tour, universe);
}

void ScvrpInstance::validate() const {
  if (!universe) throw std::invalid_argument("scvrp: null universe");
  if (customers.empty() || customers.size() > 10) {
    throw std::invalid_argument("scvrp: customer count must be in [1, 10]");
  }
  if (demands.size() != customers.size()) {
    throw std::invalid_argument("scvrp: demands size mismatch");
  }
  if (!(capacity > 0.0)) throw std::invalid_argument("scvrp: capacity <= 0");
  if (vehicles < 1) throw std::invalid_argument("scvrp: vehicles < 1");
  double total = 0.0;
  for (size_t k = 0; k < customers.size(); ++k) {
    if (customers[k] == depot) {
      throw std::invalid_argument("scvrp: depot listed as customer");
    }
    if (!(demands[k] >= 0.0)) throw std::invalid_argument("scvrp: demand < 0");
    total += demands[k];
  }
  if (total > capacity * vehicles + 1e-9) {
    throw std::invalid_argument("scvrp: total demand exceeds fleet capacity");
  }
  if (static_cast<size_t>(vehicles) > customers.size()) {
    throw std::invalid_argument("scvrp: more vehicles than customers");
  }
}

namespace {

// Cheapest depot-anchored cycle through one customer group, on symmetrized
// weights. Returns (cost, group tour order excluding the depot).
std::pair<double, std::vector<int>> group_route(
    const std::vector<double>& sym_weights, int depot,
    const std::vector<int>& group, const NodeUniverse& universe) {
  if (group.size() == 1) {
    const double c = 2.0 * sym_weights[universe.edge_index(depot, group[0])];
    return {c, group};
  }
  std::vector<int> nodes = group;
  nodes.push_back(depot);
  LocalWeights lw = make_local(sym_weights, nodes, universe);
  std::vector<int> tour = held_karp(lw);
  // Rotate to start at the depot.
  std::vector<int> ranks;
  for (int loc : tour) ranks.push_back(lw.ranks[loc]);
  auto it = std::find(ranks.begin(), ranks.end(), depot);
  std::rotate(ranks.begin(), it, ranks.end());
  // Mirrored-encoding cost: each undirected edge counts both directions,
  // matching the singleton case above.
  double cost = 0.0;
  for (size_t k = 0; k < ranks.size(); ++k) {
    cost += 2.0 * sym_weights[universe.edge_index(ranks[k], ranks[(k + 1) % ranks.size()])];
  }
  return {cost, std::vector<int>(ranks.begin() + 1, ranks.end())};
}

std::vector<double> symmetrize(std::span<const double> weights,
                               const NodeUniverse& universe) {
  std::vector<double> sym(weights.begin(), weights.end());
  const int n = universe.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int e = universe.edge_index(i, j);
      const int f = universe.edge_index(j, i);
      const double avg = 0.5 * (weights[e] + weights[f]);
      sym[e] = avg;
      sym[f] = avg;
    }
  }
  return sym;
}

// Partition the customer set (as a bitmask DP) into exactly `parts` feasible
// groups minimizing the sum of group costs. group_cost[mask] is +inf when the
// group itself is infeasible.
struct PartitionResult {
  double cost = kInf;
  std::vector<std::size_t> groups;  // masks
};

PartitionResult best_partition(const std::vector<double>& group_cost,
                               int ncust, int parts, bool exact_count) {
  const std::size_t nmask = std::size_t{1} << ncust;
  // dp[k][mask]: cheapest split of `mask` into exactly k groups.
  std::vector<std::vector<double>> dp(parts + 1,
                                      std::vector<double>(nmask, kInf));
  std::vector<std::vector<std::size_t>> pick(
      parts + 1, std::vector<std::size_t>(nmask, 0));
  dp[0][0] = 0.0;
  for (int k = 1; k <= parts; ++k) {
    for (std::size_t mask = 1; mask < nmask; ++mask) {
      // The group containing the lowest set bit, to avoid double counting.
      const std::size_t low = mask & (~mask + 1);
      for (std::size_t sub = mask; sub; sub = (sub - 1) & mask) {
        if (!(sub & low)) continue;
        if (group_cost[sub] == kInf) continue;
        const double rest = dp[k - 1][mask ^ sub];
        if (rest == kInf) continue;
        const double v = group_cost[sub] + rest;
        if (v < dp[k][mask]) {
          dp[k][mask] = v;
          pick[k][mask] = sub;
        }
      }
    }
  }
  PartitionResult out;
  const std::size_t full = nmask - 1;
  int best_k = -1;
  for (int k = exact_count ? parts : 1; k <= parts; ++k) {
    if (dp[k][full] < out.cost) {
      out.cost = dp[k][full];
      best_k = k;
    }
  }
  if (best_k < 0) return out;
  std::size_t mask = full;
  for (int k = best_k; k >= 1; --k) {
    out.groups.push_back(pick[k][mask]);
    mask ^= pick[k][mask];
  }
  return out;
}

}  // namespace

RouteBinary solve_scvrp_exact(const ScvrpInstance& instance) {
  instance.validate();
  const NodeUniverse& u = *instance.universe;
  const int ncust = static_cast<int>(instance.customers.size());
  std::vector<int> cust = instance.customers;
  std::sort(cust.begin(), cust.end());
  std::vector<double> demand(ncust);
  for (int k = 0; k < ncust; ++k) {
    for (size_t j = 0; j < instance.customers.size(); ++j) {
      if (instance.customers[j] == cust[k]) demand[k] = instance.demands[j];
    }
  }
  const std::vector<double> sym = symmetrize(instance.weights, u);

  const std::size_t nmask = std::size_t{1} << ncust;
  std::vector<double> group_cost(nmask, kInf);
  std::vector<std::vector<int>> group_tour(nmask);
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    double load = 0.0;
    std::vector<int> group;
    for (int k = 0; k < ncust; ++k) {
      if (mask & (std::size_t{1} << k)) {
        load += demand[k];
        group.push_back(cust[k]);
      }
    }
    if (load > instance.capacity + 1e-9) continue;
    auto [cost, order] = group_route(sym, instance.depot, group, u);
    group_cost[mask] = cost;
    group_tour[mask] = std::move(order);
  }

  PartitionResult part =
      best_partition(group_cost, ncust, instance.vehicles, /*exact_count=*/true);
  if (part.cost == kInf) {
    throw std::runtime_error("solve_scvrp_exact: no feasible K-partition");
  }

  std::vector<int> edges;
  auto add_mirrored = [&](int a, int b) {
    edges.push_back(u.edge_index(a, b));
    edges.push_back(u.edge_index(b, a));
  };
  for (std::size_t mask : part.groups) {
    const std::vector<int>& order = group_tour[mask];
    add_mirrored(instance.depot, order.front());
    for (size_t k = 0; k + 1 < order.size(); ++k) {
      add_mirrored(order[k], order[k + 1]);
    }
    if (order.size() > 1) add_mirrored(order.back(), instance.depot);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return RouteBinary(std::move(edges), u.edge_count());
}

void VrptwInstance::validate() const {
  if (!universe) throw std::invalid_argument("vrptw: null universe");
  if (customers.empty() || customers.size() > 8) {
    throw std::invalid_argument("vrptw: customer count must be in [1, 8]");
  }
  if (windows.size() != customers.size()) {
    throw std::invalid_argument("vrptw: windows size mismatch");
  }
  for (const auto& w : windows) {
    if (w.earliest > w.latest) {
      throw std::invalid_argument("vrptw: window earliest > latest");
    }
  }
  if (!service_times.empty() && service_times.size() != customers.size()) {
    throw std::invalid_argument("vrptw: service times size mismatch");
  }
  for (double t : travel_times) {
    if (!(t >= 0.0)) throw std::invalid_argument("vrptw: negative travel time");
  }
  if (vehicles < 1) throw std::invalid_argument("vrptw: vehicles < 1");
}

RouteBinary solve_vrptw_exact(const VrptwInstance& instance) {
  instance.validate();
  const NodeUniverse& u = *instance.universe;
  const int ncust = static_cast<int>(instance.customers.size());
  std::vector<int> cust = instance.customers;
  std::sort(cust.begin(), cust.end());
  std::vector<TimeWindow> win(ncust);
  std::vector<double> service(ncust, 0.0);
  for (int k = 0; k < ncust; ++k) {
    for (size_t j = 0; j < instance.customers.size(); ++j) {
      if (instance.customers[j] == cust[k]) {
        win[k] = instance.windows[j];
        if (!instance.service_times.empty()) service[k] = instance.service_times[j];
      }
    }
  }
  auto travel = [&](int a, int b) {
    return instance.travel_times[u.edge_index(a, b)];
  };
  auto weight = [&](int a, int b) {
    return instance.weights[u.edge_index(a, b)];
  };

  // Best feasible single-vehicle order for every customer subset.
  const std::size_t nmask = std::size_t{1} << ncust;
  std::vector<double> group_cost(nmask, kInf);
  std::vector<std::vector<int>> group_order(nmask);  // local customer indices
  for (std::size_t mask = 1; mask < nmask; ++mask) {
    std::vector<int> members;
    for (int k = 0; k < ncust; ++k) {
      if (mask & (std::size_t{1} << k)) members.push_back(k);
    }
    std::sort(members.begin(), members.end());
    std::vector<int> perm = members;
    do {
      double clock = 0.0;
      double cost = 0.0;
      int prev = instance.depot;
      bool ok = true;
      for (int k : perm) {
        const int node = cust[k];
        clock += travel(prev, node);
        clock = std::max(clock, win[k].earliest);
        if (clock > win[k].latest + 1e-9) {
          ok = false;
          break;
        }
        clock += service[k];
        cost += weight(prev, node);
        prev = node;
      }
      if (ok) {
        cost += weight(prev, instance.depot);
        if (cost < group_cost[mask]) {
          group_cost[mask] = cost;
          group_order[mask] = perm;
        }
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  const int parts = std::min<int>(instance.vehicles, ncust);
  PartitionResult part =
      best_partition(group_cost, ncust, parts, /*exact_count=*/false);
  if (part.cost == kInf) {
    throw std::runtime_error("solve_vrptw_exact: no feasible schedule");
  }

  std::vector<int> edges;
  for (std::size_t mask : part.groups) {
    int prev = instance.depot;
    for (int k : group_order[mask]) {
      edges.push_back(u.edge_index(prev, cust[k]));
      prev = cust[k];
    }
    edges.push_back(u.edge_index(prev, instance.depot));
  }
  return RouteBinary(std::move(edges), u.edge_count());
}

namespace {

RouteBinary dispatch(const Signal& signal, std::span<const double> weights,
                     const NodeUniverse& universe, const SolverChoice& choice) {
  switch (signal.kind) {
    case ProblemKind::rtsp:
      return solve_rtsp(weights, signal.required, signal.start_node, universe,
                        choice);
    case ProblemKind::scvrp: {
      ScvrpInstance inst;
      inst.universe = &universe;
      inst.depot = signal.start_node.value_or(0);
      inst.customers = signal.required;
      inst.demands = signal.demands;
      inst.capacity = signal.capacity;
      inst.vehicles = signal.vehicles;
      inst.weights.assign(weights.begin(), weights.end());
      return solve_scvrp_exact(inst);
    }
    case ProblemKind::vrptw: {
      VrptwInstance inst;
      inst.universe = &universe;
      inst.depot = signal.start_node.value_or(0);
      inst.customers = signal.required;
      inst.windows = signal.windows;
      inst.service_times = signal.service_times;
      inst.travel_times = signal.travel_times;
      inst.vehicles = signal.vehicles;
      inst.weights.assign(weights.begin(), weights.end());
      return solve_vrptw_exact(inst);
    }
  }
  throw std::logic_error("dispatch: unknown problem kind");
}

}  // namespace

RouteBinary solve_afop(const CostVector& theta,
                       const SignalResponseExample& example,
                       const PenaltyMatrix& m, const NodeUniverse& universe,
                       const SolverChoice& choice) {
  const std::vector<double> w = augment_weights(theta, example.response, m);
  return dispatch(example.signal, w, universe, choice);
}

RouteBinary solve_fop(const CostVector& theta, const Signal& signal,
                      const PenaltyMatrix& m, const NodeUniverse& universe,
                      const SolverChoice& choice) {
  std::vector<double> w = theta.values();
  if (!m.empty()) {
    for (int e = 0; e < static_cast<int>(w.size()); ++e) w[e] += m[e];
  }
  return dispatch(signal, w, universe, choice);
}

}  // namespace routeio
