#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "routeio/types.hpp"

namespace routeio {

/// Which forward solver to use, and its knobs. exact-dp is Held-Karp-style
/// subset DP, capped at `exact_cutoff` nodes; above the cutoff it falls back
/// to local search (or errors under `strict`).
struct SolverChoice {
  enum class Kind { exact_dp, local_search };
  Kind kind = Kind::exact_dp;
  int exact_cutoff = 16;
  int restarts = 5;
  int max_passes = 64;
  std::uint64_t seed = 0;
  bool strict = false;
};

struct ScvrpInstance {
  const NodeUniverse* universe = nullptr;
  int depot = 0;
  std::vector<int> customers;      // node ranks, depot excluded
  std::vector<double> demands;     // parallel to customers
  double capacity = 0.0;
  int vehicles = 1;
  std::vector<double> weights;     // dense edge-indexed, may be negative

  void validate() const;
};

struct VrptwInstance {
  const NodeUniverse* universe = nullptr;
  int depot = 0;
  std::vector<int> customers;
  std::vector<TimeWindow> windows;     // parallel to customers
  std::vector<double> service_times;   // parallel to customers
  std::vector<double> travel_times;    // dense edge-indexed, seconds
  int vehicles = 1;
  std::vector<double> weights;         // objective, may be negative

  void validate() const;
};

/// Optimal (or locally optimal) directed cycle over exactly `required`.
/// Negative weights are handled; ties prefer the lexicographically smallest
/// tour by node rank.
RouteBinary solve_rtsp(std::span<const double> weights,
                       std::span<const int> required,
                       std::optional<int> start,
                       const NodeUniverse& universe,
                       const SolverChoice& choice);

/// Exact K-route SCVRP by partition enumeration; customers <= 10. Returns the
/// undirected solution mirrored onto both edge directions.
RouteBinary solve_scvrp_exact(const ScvrpInstance& instance);

/// Exact VRPTW by full enumeration over assignments and orderings;
/// customers <= 8. Throws if no feasible schedule exists.
RouteBinary solve_vrptw_exact(const VrptwInstance& instance);

/// A-FOP: argmin over X(s) of <theta + 2*xhat - 1 + M, x>, dispatching on the
/// signal kind.
RouteBinary solve_afop(const CostVector& theta,
                       const SignalResponseExample& example,
                       const PenaltyMatrix& m,
                       const NodeUniverse& universe,
                       const SolverChoice& choice);

/// FOP: argmin over X(s) of <theta + M, x>.
RouteBinary solve_fop(const CostVector& theta, const Signal& signal,
                      const PenaltyMatrix& m, const NodeUniverse& universe,
                      const SolverChoice& choice);

/// <w, x> over the route's edges.
double route_cost(std::span<const double> weights, const RouteBinary& x);

}  // namespace routeio
