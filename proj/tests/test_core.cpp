#include <algorithm>
#include <limits>
#include <vector>

#include "doctest.h"
#include "routeio/types.hpp"

using namespace routeio;

TEST_SUITE("core") {

TEST_CASE("edge index roundtrip covers every ordered pair") {
  NodeUniverse u({"a", "b", "c", "d", "e"});
  std::vector<bool> seen(u.edge_count(), false);
  for (int i = 0; i < u.size(); ++i) {
    for (int j = 0; j < u.size(); ++j) {
      if (i == j) continue;
      const int e = u.edge_index(i, j);
      REQUIRE(e >= 0);
      REQUIRE(e < u.edge_count());
      CHECK(!seen[e]);
      seen[e] = true;
      auto [a, b] = u.edge_ends(e);
      CHECK(a == i);
      CHECK(b == j);
    }
  }
}

TEST_CASE("node rank lookup and unknown node error") {
  NodeUniverse u({"x", "y"});
  CHECK(u.rank("y") == 1);
  CHECK(u.contains("x"));
  CHECK(!u.contains("z"));
  CHECK_THROWS(u.rank("z"));
}

TEST_CASE("cost vector rejects negatives and non-finite entries") {
  CHECK_NOTHROW(CostVector({0.0, 1.5, 2.0}));
  CHECK_THROWS(CostVector({0.0, -1e-12}));
  CHECK_THROWS(CostVector({std::numeric_limits<double>::quiet_NaN()}));
  CHECK(CostVector::constant(4, 3.0)[2] == 3.0);
  CHECK(CostVector::zeros(6).dimension() == 6);
}

TEST_CASE("tour/binary roundtrip") {
  NodeUniverse u({"a", "b", "c", "d", "e", "f"});
  std::vector<int> tour = {0, 3, 1, 5};
  RouteBinary x = tour_to_binary(tour, u);
  CHECK(x.count() == 4);
  CHECK(x.uses(u.edge_index(0, 3)));
  CHECK(x.uses(u.edge_index(5, 0)));
  CHECK(!x.uses(u.edge_index(3, 0)));
  CHECK(binary_to_tour(x, 0, u) == tour);
  CHECK(binary_to_tour(x, 1, u) == std::vector<int>{1, 5, 0, 3});
}

TEST_CASE("binary_to_tour rejects subtours and broken degrees") {
  NodeUniverse u({"a", "b", "c", "d"});
  // Two 2-cycles: 0<->1 and 2<->3.
  RouteBinary split({u.edge_index(0, 1), u.edge_index(1, 0),
                     u.edge_index(2, 3), u.edge_index(3, 2)},
                    u.edge_count());
  CHECK_THROWS(binary_to_tour(split, 0, u));
  // Node 0 with out-degree two.
  RouteBinary fork({u.edge_index(0, 1), u.edge_index(0, 2)}, u.edge_count());
  CHECK_THROWS(binary_to_tour(fork, 0, u));
  // Start off the cycle.
  RouteBinary cyc = tour_to_binary(std::vector<int>{0, 1, 2}, u);
  CHECK_THROWS(binary_to_tour(cyc, 3, u));
}

TEST_CASE("augment_weights is theta + 2*xhat - 1 + M per edge") {
  NodeUniverse u({"a", "b", "c"});
  CostVector theta({0.5, 1.0, 0.25, 2.0, 0.0, 3.0});
  RouteBinary xhat = tour_to_binary(std::vector<int>{0, 1, 2}, u);
  PenaltyMatrix m({0.0, 10.0, 0.0, 0.0, 20.0, 0.0});
  std::vector<double> aug = augment_weights(theta, xhat, m);
  for (int e = 0; e < u.edge_count(); ++e) {
    const double expect = theta[e] + (xhat.uses(e) ? 1.0 : -1.0) + m[e];
    CHECK(aug[e] == expect);
  }
}

TEST_CASE("empty penalty matrix reads as zero everywhere") {
  PenaltyMatrix m;
  CHECK(m.empty());
  CHECK(m[0] == 0.0);
  CHECK(m[99] == 0.0);
}

TEST_CASE("rtsp feasibility checker") {
  NodeUniverse u({"a", "b", "c", "d"});
  Signal s;
  s.kind = ProblemKind::rtsp;
  s.required = {0, 1, 2};
  RouteBinary good = tour_to_binary(std::vector<int>{0, 2, 1}, u);
  CHECK_NOTHROW(check_response_feasible(s, good, u));
  RouteBinary wrong_nodes = tour_to_binary(std::vector<int>{0, 1, 3}, u);
  CHECK_THROWS(check_response_feasible(s, wrong_nodes, u));
}

TEST_CASE("scvrp feasibility checker accepts singleton routes") {
  NodeUniverse u({"d", "a", "b", "c"});
  Signal s;
  s.kind = ProblemKind::scvrp;
  s.start_node = 0;
  s.required = {1, 2, 3};
  s.demands = {1.0, 1.0, 1.0};
  s.capacity = 2.0;
  s.vehicles = 2;
  // Route 1: d-a-b-d (mirrored), route 2: d-c-d (single mirrored pair).
  std::vector<int> edges = {
      u.edge_index(0, 1), u.edge_index(1, 0), u.edge_index(1, 2),
      u.edge_index(2, 1), u.edge_index(2, 0), u.edge_index(0, 2),
      u.edge_index(0, 3), u.edge_index(3, 0)};
  std::sort(edges.begin(), edges.end());
  RouteBinary x(edges, u.edge_count());
  CHECK_NOTHROW(check_response_feasible(s, x, u));

  // Overloaded single route violates capacity.
  std::vector<int> one = {u.edge_index(0, 1), u.edge_index(1, 2),
                          u.edge_index(2, 3), u.edge_index(3, 0),
                          u.edge_index(1, 0), u.edge_index(2, 1),
                          u.edge_index(3, 2), u.edge_index(0, 3)};
  std::sort(one.begin(), one.end());
  CHECK_THROWS(check_response_feasible(s, RouteBinary(one, u.edge_count()), u));
}

}  // TEST_SUITE
