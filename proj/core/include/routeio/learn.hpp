#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "routeio/loss.hpp"
#include "routeio/solvers.hpp"
#include "routeio/types.hpp"

namespace routeio {

enum class StepSchedule { constant, inv_t, inv_sqrt_t };
enum class UpdateMode { exponentiated, standard };
enum class SamplingMode { reshuffled, uniform };
enum class AggregateMode { last, mean, weighted };

struct TrainConfig {
  int epochs = 5;
  StepSchedule schedule = StepSchedule::inv_t;
  double step_c = 0.0005;
  UpdateMode update = UpdateMode::standard;
  SamplingMode sampling = SamplingMode::reshuffled;
  AggregateMode aggregate = AggregateMode::last;
  std::uint64_t rng_seed = 0;
  SolverChoice solver;
  CostVector init;
  // Optional early stop: quit once the validation metric moves by less than
  // this between consecutive epochs. Requires a validation hook.
  std::optional<double> early_stop_delta;

  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double mean_subgrad_l1 = 0.0;
  double wall_seconds = 0.0;
  std::optional<double> validation;
};

struct TrainTrace {
  std::vector<CostVector> iterates;  // theta_t^[N+1] per epoch
  std::vector<EpochStats> stats;
  CostVector final_theta;
};

/// Called after each epoch with the current end-of-epoch iterate; the return
/// value is recorded in the trace and drives early stopping.
using ValidationHook = std::function<double(const CostVector&, int epoch)>;

/// One subgradient step. Exponentiated: theta .* exp(-eta*g), with entries
/// below 1e-300 flushed to zero. Standard: max(0, theta - eta*g).
CostVector update_step(const CostVector& theta, std::span<const int> g,
                       double eta, UpdateMode mode);

/// Reshuffled stochastic first-order minimization of the mean tailored loss.
TrainTrace train(const std::vector<SignalResponseExample>& dataset,
                 const NodeUniverse& universe, const PenaltyMatrix& m,
                 const TrainConfig& config, const ValidationHook& hook = {});

CostVector aggregate(const std::vector<CostVector>& iterates, AggregateMode mode);

/// Newline-delimited JSON records, one per epoch.
void export_trace(const TrainTrace& trace, std::ostream& out);

}  // namespace routeio
