#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace routeio {

/// Latitude/longitude pair in degrees.
struct LatLng {
  double lat = 0.0;
  double lng = 0.0;
};

/// Fixed, ordered set of node identifiers. Edge indexing is dense over
/// ordered pairs (i, j), i != j, and depends on the node ordering, so a
/// universe is immutable once built.
class NodeUniverse {
 public:
  NodeUniverse() = default;
  explicit NodeUniverse(std::vector<std::string> nodes,
                        std::vector<LatLng> coords = {});

  int size() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return size() * (size() - 1); }

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& name(int rank) const { return nodes_.at(rank); }
  bool contains(const std::string& node) const {
    return index_.find(node) != index_.end();
  }
  int rank(const std::string& node) const;

  bool has_coords() const { return !coords_.empty(); }
  const LatLng& coord(int rank) const { return coords_.at(rank); }

  /// Dense index of the directed edge (i, j), i != j.
  int edge_index(int i, int j) const {
    return i * (size() - 1) + (j < i ? j : j - 1);
  }
  /// Inverse of edge_index.
  std::pair<int, int> edge_ends(int e) const {
    const int i = e / (size() - 1);
    const int r = e % (size() - 1);
    return {i, r < i ? r : r + 1};
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<LatLng> coords_;
  std::unordered_map<std::string, int> index_;
};

/// Nonnegative edge-weight vector, dense over the directed edges of a
/// NodeUniverse. Immutable after construction.
class CostVector {
 public:
  CostVector() = default;
  explicit CostVector(std::vector<double> weights);

  static CostVector zeros(int edge_count);
  static CostVector constant(int edge_count, double value);

  int dimension() const { return static_cast<int>(weights_.size()); }
  double operator[](int e) const { return weights_[e]; }
  const std::vector<double>& values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Binary edge-incidence vector stored sparsely as a sorted list of edge
/// indices. The dimension records the edge count of the owning universe.
class RouteBinary {
 public:
  RouteBinary() = default;
  RouteBinary(std::vector<int> edges, int dimension);

  const std::vector<int>& edges() const { return edges_; }
  int dimension() const { return dimension_; }
  /// <1, x>: number of edges used.
  int count() const { return static_cast<int>(edges_.size()); }
  bool uses(int e) const;

  bool operator==(const RouteBinary& other) const {
    return edges_ == other.edges_;
  }

 private:
  std::vector<int> edges_;
  int dimension_ = 0;
};

/// Affine penalty term h(s, x) = <M, x>, dense with default zero.
class PenaltyMatrix {
 public:
  PenaltyMatrix() = default;
  explicit PenaltyMatrix(std::vector<double> entries);

  static PenaltyMatrix zeros(int edge_count);

  bool empty() const { return entries_.empty(); }
  int dimension() const { return static_cast<int>(entries_.size()); }
  double operator[](int e) const { return entries_.empty() ? 0.0 : entries_[e]; }
  const std::vector<double>& values() const { return entries_; }

 private:
  std::vector<double> entries_;
};

enum class ProblemKind { rtsp, scvrp, vrptw };

struct TimeWindow {
  double earliest = 0.0;
  double latest = 0.0;
};

/// Exogenous signal describing the expert's constraint set for one example.
/// For rtsp, `required` is the set of tour nodes. For scvrp/vrptw, `required`
/// lists the customers and `start_node` the depot.
struct Signal {
  ProblemKind kind = ProblemKind::rtsp;
  std::vector<int> required;            // node ranks
  std::optional<int> start_node;        // depot / station rank

  // scvrp
  std::vector<double> demands;          // parallel to required
  double capacity = 0.0;
  int vehicles = 1;

  // vrptw (travel_times is dense edge-indexed, seconds)
  std::vector<TimeWindow> windows;      // parallel to required
  std::vector<double> service_times;    // parallel to required
  std::vector<double> travel_times;

  void validate(const NodeUniverse& universe) const;
};

struct SignalResponseExample {
  Signal signal;
  RouteBinary response;
};

// --- Operations ---------------------------------------------------------

/// Encode an ordered node-rank tour (length >= 2) as the cycle
/// tour[0] -> tour[1] -> ... -> tour[last] -> tour[0].
RouteBinary tour_to_binary(std::span<const int> tour, const NodeUniverse& universe);

/// Decode a single directed cycle back into a tour starting at `start`.
/// Errors on subtours, broken degrees, or `start` off the cycle.
std::vector<int> binary_to_tour(const RouteBinary& x, int start,
                                const NodeUniverse& universe);

/// Per-edge augmented weights theta + 2*xhat - 1 + M. May be negative.
std::vector<double> augment_weights(const CostVector& theta,
                                    const RouteBinary& xhat,
                                    const PenaltyMatrix& m);

/// Feasibility oracle: does `response` satisfy `signal`'s constraint set?
/// Used at dataset load; throws with a description on violation.
void check_response_feasible(const Signal& signal, const RouteBinary& response,
                             const NodeUniverse& universe);

}  // namespace routeio
