#include "routeio/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace routeio {

namespace {

// Drop the station and check the two sequences are permutations of the same
// stop set.
std::pair<std::vector<int>, std::vector<int>> strip_station(
    std::span<const int> actual, std::span<const int> proposed, int station) {
  std::vector<int> a, b;
  for (int s : actual) {
    if (s != station) a.push_back(s);
  }
  for (int s : proposed) {
    if (s != station) b.push_back(s);
  }
  std::vector<int> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb || std::adjacent_find(sa.begin(), sa.end()) != sa.end()) {
    throw std::invalid_argument("scoring: sequences are not permutations of the same stops");
  }
  return {std::move(a), std::move(b)};
}

}  // namespace

double sequence_deviation(std::span<const int> actual,
                          std::span<const int> proposed, int station) {
  auto [a, b] = strip_station(actual, proposed, station);
  const int n = static_cast<int>(a.size());
  if (n < 2) return 0.0;
  std::vector<int> pos(*std::max_element(a.begin(), a.end()) + 1, -1);
  for (int i = 0; i < n; ++i) pos[a[i]] = i;
  long long dev = 0;
  for (int i = 1; i < n; ++i) {
    dev += std::abs(pos[b[i]] - pos[b[i - 1]]) - 1;
  }
  return 2.0 * static_cast<double>(dev) /
         (static_cast<double>(n) * (n - 1));
}

std::vector<double> normalize_travel_times(std::span<const double> times, int n) {
  if (static_cast<int>(times.size()) != n * n) {
    throw std::invalid_argument("normalize_travel_times: matrix size mismatch");
  }
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      sum += times[i * n + j];
      ++count;
    }
  }
  if (sum <= 0.0) {
    throw std::invalid_argument("normalize_travel_times: all-zero matrix");
  }
  const double mean = sum / count;
  std::vector<double> out(times.begin(), times.end());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out[i * n + j] = (i == j) ? 0.0 : out[i * n + j] / mean;
    }
  }
  return out;
}

std::pair<double, int> erp(std::span<const int> actual,
                           std::span<const int> proposed, int station,
                           std::span<const double> norm_times, int n) {
  // Unlike sequence_deviation, ERP is defined for arbitrary sequences, so
  // only the station is stripped here.
  std::vector<int> a, b;
  for (int s : actual) {
    if (s != station) a.push_back(s);
  }
  for (int s : proposed) {
    if (s != station) b.push_back(s);
  }
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  auto d = [&](int u, int v) { return norm_times[u * n + v]; };
  auto gap = [&](int u) { return norm_times[u * n + station]; };

  // dp[i][j]: cheapest alignment of a[0..i) with b[0..j).
  std::vector<std::vector<double>> dp(la + 1, std::vector<double>(lb + 1, 0.0));
  for (int i = 1; i <= la; ++i) dp[i][0] = dp[i - 1][0] + gap(a[i - 1]);
  for (int j = 1; j <= lb; ++j) dp[0][j] = dp[0][j - 1] + gap(b[j - 1]);
  for (int i = 1; i <= la; ++i) {
    for (int j = 1; j <= lb; ++j) {
      const double match = dp[i - 1][j - 1] + d(a[i - 1], b[j - 1]);
      const double del = dp[i - 1][j] + gap(a[i - 1]);
      const double ins = dp[i][j - 1] + gap(b[j - 1]);
      dp[i][j] = std::min({match, del, ins});
    }
  }

  // Count edits along one optimal path; ties prefer match, then delete,
  // then insert, so the count is deterministic.
  int edits = 0;
  int i = la, j = lb;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        dp[i][j] == dp[i - 1][j - 1] + d(a[i - 1], b[j - 1])) {
      if (a[i - 1] != b[j - 1]) ++edits;  // substitution
      --i;
      --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + gap(a[i - 1])) {
      ++edits;  // delete
      --i;
    } else {
      ++edits;  // insert
      --j;
    }
  }
  return {dp[la][lb], edits};
}

ScoreReport challenge_score(const RouteRecord& route,
                            std::span<const int> proposed) {
  const int station = route.station_index();
  const int n = static_cast<int>(route.stops.size());
  const std::vector<double> norm = normalize_travel_times(route.travel_seconds, n);

  ScoreReport report;
  report.route_id = route.route_id;
  report.sd = sequence_deviation(route.actual_sequence, proposed, station);
  auto [value, edits] = erp(route.actual_sequence, proposed, station, norm, n);
  report.erp_norm = value;
  report.erp_edits = edits;
  report.score = edits > 0 ? report.sd * value / edits : 0.0;
  return report;
}

std::pair<int, int> zone_prediction_error(const std::vector<std::string>& predicted,
                                          const std::vector<std::string>& actual) {
  std::set<std::string> sp(predicted.begin(), predicted.end());
  std::set<std::string> sa(actual.begin(), actual.end());
  if (sp != sa || predicted.size() != actual.size()) {
    throw std::invalid_argument("zone_prediction_error: zone sets differ");
  }
  int count = 0;
  for (size_t i = 0; i < actual.size(); ++i) {
    if (predicted[i] != actual[i]) ++count;
  }
  return {count, static_cast<int>(actual.size())};
}

}  // namespace routeio
