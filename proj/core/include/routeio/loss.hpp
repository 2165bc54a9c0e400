#pragma once

#include <vector>

#include "routeio/solvers.hpp"
#include "routeio/types.hpp"

namespace routeio {

/// Loss value plus the inner-problem minimizer that produced it, so callers
/// can reuse the single A-FOP solve for the subgradient.
struct LossValue {
  double value = 0.0;
  RouteBinary minimizer;
};

/// Tailored IO loss:
///   <theta, xhat> + <M, xhat>
///     - [ <theta + 2*xhat - 1, x*> + <M, x*> - <1, xhat> ]
/// with x* the A-FOP optimizer. With an exact inner solver this equals the
/// ASL with l1 distance.
LossValue eval_loss(const CostVector& theta, const SignalResponseExample& example,
                    const PenaltyMatrix& m, const NodeUniverse& universe,
                    const SolverChoice& choice);

/// Danskin subgradient g = xhat - x*, dense with entries in {-1, 0, +1}.
std::vector<int> subgradient(const CostVector& theta,
                             const SignalResponseExample& example,
                             const PenaltyMatrix& m, const NodeUniverse& universe,
                             const SolverChoice& choice);

/// g = xhat - xstar for an already-solved inner problem.
std::vector<int> subgradient_from(const RouteBinary& xhat,
                                  const RouteBinary& xstar);

/// Mean of eval_loss over the dataset.
double total_loss(const CostVector& theta,
                  const std::vector<SignalResponseExample>& dataset,
                  const PenaltyMatrix& m, const NodeUniverse& universe,
                  const SolverChoice& choice);

}  // namespace routeio
