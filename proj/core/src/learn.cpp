#include "routeio/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace routeio {

void TrainConfig::validate() const {
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs < 1");
  if (!(step_c > 0.0)) throw std::invalid_argument("TrainConfig: step_c <= 0");
  if (init.dimension() == 0) {
    throw std::invalid_argument("TrainConfig: init cost vector empty");
  }
}

CostVector update_step(const CostVector& theta, std::span<const int> g,
                       double eta, UpdateMode mode) {
  if (!(eta > 0.0)) throw std::invalid_argument("update_step: eta <= 0");
  if (static_cast<int>(g.size()) != theta.dimension()) {
    throw std::invalid_argument("update_step: dimension mismatch");
  }
  std::vector<double> next(theta.values());
  if (mode == UpdateMode::exponentiated) {
    for (size_t e = 0; e < next.size(); ++e) {
      if (g[e] != 0) next[e] *= std::exp(-eta * g[e]);
      if (next[e] < 1e-300) next[e] = 0.0;  // zero is absorbing anyway
    }
  } else {
    for (size_t e = 0; e < next.size(); ++e) {
      next[e] = std::max(0.0, next[e] - eta * g[e]);
    }
  }
  return CostVector(std::move(next));
}

namespace {

double step_size(const TrainConfig& config, int epoch) {
  switch (config.schedule) {
    case StepSchedule::constant:
      return config.step_c;
    case StepSchedule::inv_t:
      return config.step_c / epoch;
    case StepSchedule::inv_sqrt_t:
      return config.step_c / std::sqrt(static_cast<double>(epoch));
  }
  return config.step_c;
}

// Visit order for one epoch, keyed on (seed, epoch) so results are
// reproducible regardless of where the call runs.
std::vector<int> epoch_order(const TrainConfig& config, int epoch, int n) {
  std::mt19937_64 rng(config.rng_seed * 0x9E3779B97F4A7C15ULL +
                      static_cast<std::uint64_t>(epoch));
  std::vector<int> order(n);
  if (config.sampling == SamplingMode::reshuffled) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
  } else {
    // Uniform with replacement, N draws so both samplers do equal work.
    std::uniform_int_distribution<int> dist(0, n - 1);
    for (int& idx : order) idx = dist(rng);
  }
  return order;
}

}  // namespace

TrainTrace train(const std::vector<SignalResponseExample>& dataset,
                 const NodeUniverse& universe, const PenaltyMatrix& m,
                 const TrainConfig& config, const ValidationHook& hook) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  config.validate();
  const int n = static_cast<int>(dataset.size());

  TrainTrace trace;
  CostVector theta = config.init;
  std::optional<double> prev_validation;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double eta = step_size(config, epoch);
    const std::vector<int> order = epoch_order(config, epoch, n);
    double loss_sum = 0.0;
    double g_l1_sum = 0.0;
    for (int idx : order) {
      const SignalResponseExample& example = dataset[idx];
      LossValue lv;
      try {
        lv = eval_loss(theta, example, m, universe, config.solver);
      } catch (const std::exception& err) {
        throw std::runtime_error("train: solver failed at epoch " +
                                 std::to_string(epoch) + ", example " +
                                 std::to_string(idx) + ": " + err.what());
      }
      loss_sum += lv.value;
      const std::vector<int> g = subgradient_from(example.response, lv.minimizer);
      for (int v : g) g_l1_sum += std::abs(v);
      theta = update_step(theta, g, eta, config.update);
    }
    const auto t1 = std::chrono::steady_clock::now();

    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = loss_sum / n;
    stats.mean_subgrad_l1 = g_l1_sum / n;
    stats.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    if (hook) stats.validation = hook(theta, epoch);
    trace.iterates.push_back(theta);
    trace.stats.push_back(stats);

    if (config.early_stop_delta && stats.validation && prev_validation &&
        std::abs(*stats.validation - *prev_validation) < *config.early_stop_delta) {
      break;
    }
    prev_validation = stats.validation;
  }
  trace.final_theta = aggregate(trace.iterates, config.aggregate);
  return trace;
}

CostVector aggregate(const std::vector<CostVector>& iterates, AggregateMode mode) {
  if (iterates.empty()) throw std::invalid_argument("aggregate: empty trace");
  const int t_count = static_cast<int>(iterates.size());
  switch (mode) {
    case AggregateMode::last:
      return iterates.back();
    case AggregateMode::mean: {
      std::vector<double> acc(iterates.front().dimension(), 0.0);
      for (const auto& theta : iterates) {
        for (size_t e = 0; e < acc.size(); ++e) acc[e] += theta[e];
      }
      for (double& v : acc) v /= t_count;
      return CostVector(std::move(acc));
    }
    case AggregateMode::weighted: {
      std::vector<double> acc(iterates.front().dimension(), 0.0);
      for (int t = 1; t <= t_count; ++t) {
        for (size_t e = 0; e < acc.size(); ++e) acc[e] += t * iterates[t - 1][e];
      }
      const double scale = 2.0 / (static_cast<double>(t_count) * (t_count + 1));
      for (double& v : acc) v *= scale;
      return CostVector(std::move(acc));
    }
  }
  throw std::logic_error("aggregate: unknown mode");
}

void export_trace(const TrainTrace& trace, std::ostream& out) {
  for (const auto& s : trace.stats) {
    nlohmann::json rec;
    rec["epoch"] = s.epoch;
    rec["mean_loss"] = s.mean_loss;
    rec["mean_subgrad_l1"] = s.mean_subgrad_l1;
    rec["seconds"] = s.wall_seconds;
    if (s.validation) rec["validation"] = *s.validation;
    out << rec.dump() << "\n";
  }
}

}  // namespace routeio
