#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "routeio/zones.hpp"

namespace routeio {

struct ScoreReport {
  std::string route_id;
  double sd = 0.0;
  double erp_norm = 0.0;
  int erp_edits = 0;
  double score = 0.0;
  int zone_error_count = 0;
  int zone_seq_len = 0;
};

/// SD(A, B) = 2/(n(n-1)) * sum_{i=2..n} (|pos_A(B_i) - pos_A(B_{i-1})| - 1)
/// over the n non-station stops. A and B are stop indices, station first.
double sequence_deviation(std::span<const int> actual,
                          std::span<const int> proposed, int station);

/// Travel times divided by the mean off-diagonal entry; diagonal zero.
std::vector<double> normalize_travel_times(std::span<const double> times, int n);

/// Edit distance with real penalty between the two stop sequences (station
/// excluded), with the station as the gap element. Returns (value, edits);
/// exact matches are free and count no edit.
std::pair<double, int> erp(std::span<const int> actual,
                           std::span<const int> proposed, int station,
                           std::span<const double> norm_times, int n);

/// Composite challenge score SD * ERP_norm / ERP_e, zero when ERP prescribes
/// no edits. `proposed` is a stop-index permutation starting at the station.
ScoreReport challenge_score(const RouteRecord& route,
                            std::span<const int> proposed);

/// Positions where the two zone sequences disagree, plus the length.
/// The sequences must cover the same zone set.
std::pair<int, int> zone_prediction_error(const std::vector<std::string>& predicted,
                                          const std::vector<std::string>& actual);

}  // namespace routeio
