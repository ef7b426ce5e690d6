#include "lmoments/numeric.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace lmoments {

namespace {

// Returns (max, sum_i exp(logs[i] - max)).
std::pair<double, double> scaled_sum(std::span<const double> logs) {
  std::vector<double> sorted(logs.begin(), logs.end());
  std::sort(sorted.begin(), sorted.end());
  const double top = sorted.back();
  if (!std::isfinite(top)) return {top, 1.0};
  CompensatedSum s;
  for (double x : sorted) s.add(std::exp(x - top));
  return {top, s.value()};
}

}  // namespace

double log_sum_exp(std::span<const double> logs) {
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  const auto [top, sum] = scaled_sum(logs);
  return top + std::log(sum);
}

double sum_of_exps(std::span<const double> logs) {
  if (logs.empty()) return 0.0;
  const auto [top, sum] = scaled_sum(logs);
  return std::exp(top) * sum;
}

}  // namespace lmoments
