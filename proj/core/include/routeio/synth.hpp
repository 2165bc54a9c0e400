#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "routeio/data.hpp"
#include "routeio/solvers.hpp"
#include "routeio/types.hpp"
#include "routeio/zones.hpp"

namespace routeio {

enum class HiddenWeights { euclidean, uniform_random };

struct SynthConfig {
  ProblemKind kind = ProblemKind::rtsp;
  int nodes = 12;                    // depot included for scvrp/vrptw
  int train_count = 50;
  int test_count = 50;
  HiddenWeights hidden = HiddenWeights::uniform_random;
  std::uint64_t rng_seed = 0;

  // rtsp: required-subset size range
  int subset_min = 5;
  int subset_max = 8;

  // scvrp
  double capacity = 3.0;
  int vehicles = 2;
  int demand_max = 1;

  // vrptw: base windows get reshuffled among customers per example
  double window_slack = 0.35;
  int retry_cap = 50;

  void validate() const;
};

/// Synthetic signal-response data drawn from hidden weights. The hidden
/// weights are returned for evaluation only; responses come from the exact
/// solver.
struct SynthDataset {
  NodeUniverse universe;
  CostVector hidden;
  std::vector<SignalResponseExample> train;
  std::vector<SignalResponseExample> test;
};

SynthDataset generate_synthetic(const SynthConfig& config);

/// The 5-customer, K=2, c=3, unit-demand SCVRP walk-through instance:
/// two spatial clusters, Euclidean weights, one training example.
struct ScvrpDemo {
  NodeUniverse universe;
  CostVector true_weights;
  SignalResponseExample example;
};

ScvrpDemo make_scvrp_demo();

/// Small zone-level dataset with planted weights and penalties, for
/// end-to-end pipeline runs: every route's actual stop sequence follows the
/// zone sequence that is optimal under the planted model.
struct ZoneFixture {
  DatasetBundle bundle;
  ZoneGraphModel planted;
  std::map<std::string, std::vector<std::string>> planted_zone_seqs;
};

ZoneFixture make_zone_fixture(int route_count, std::uint64_t seed);

}  // namespace routeio
