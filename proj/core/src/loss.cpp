#include "routeio/loss.hpp"

#include <stdexcept>

namespace routeio {

LossValue eval_loss(const CostVector& theta, const SignalResponseExample& example,
                    const PenaltyMatrix& m, const NodeUniverse& universe,
                    const SolverChoice& choice) {
  const RouteBinary& xhat = example.response;
  if (xhat.dimension() != theta.dimension()) {
    throw std::invalid_argument("eval_loss: dimension mismatch");
  }
  const std::vector<double> aug = augment_weights(theta, xhat, m);
  RouteBinary xstar = solve_afop(theta, example, m, universe, choice);
  double outer = 0.0;
  for (int e : xhat.edges()) outer += theta[e] + m[e];
  const double inner = route_cost(aug, xstar) - xhat.count();
  return {outer - inner, std::move(xstar)};
}

std::vector<int> subgradient_from(const RouteBinary& xhat,
                                  const RouteBinary& xstar) {
  std::vector<int> g(xhat.dimension(), 0);
  for (int e : xhat.edges()) g[e] += 1;
  for (int e : xstar.edges()) g[e] -= 1;
  return g;
}

std::vector<int> subgradient(const CostVector& theta,
                             const SignalResponseExample& example,
                             const PenaltyMatrix& m, const NodeUniverse& universe,
                             const SolverChoice& choice) {
  const RouteBinary xstar = solve_afop(theta, example, m, universe, choice);
  return subgradient_from(example.response, xstar);
}

double total_loss(const CostVector& theta,
                  const std::vector<SignalResponseExample>& dataset,
                  const PenaltyMatrix& m, const NodeUniverse& universe,
                  const SolverChoice& choice) {
  if (dataset.empty()) {
    throw std::invalid_argument("total_loss: empty dataset");
  }
  double sum = 0.0;
  for (const auto& example : dataset) {
    sum += eval_loss(theta, example, m, universe, choice).value;
  }
  return sum / static_cast<double>(dataset.size());
}

}  // namespace routeio
