#include "semdim/bootstrap.hpp"

#include <algorithm>
#include <string>

#include "semdim/error.hpp"
#include "semdim/rng.hpp"
#include "semdim/stats.hpp"

namespace semdim {

namespace {

void check_arguments(std::size_t n, double level, std::size_t resamples) {
  if (n == 0) throw Error("bootstrap: empty input");
  if (n < 2) throw Error("bootstrap: need at least two observations");
  if (!(level > 0.0 && level < 1.0)) throw Error("bootstrap: level must lie in (0, 1)");
  if (resamples < 100) throw Error("bootstrap: need at least 100 resamples");
}

}  // namespace

BootstrapCI percentile_ci(std::vector<double>& draws, double point, double level,
                          std::uint64_t seed) {
  if (draws.empty()) throw Error("bootstrap: no resampled statistics");
  std::sort(draws.begin(), draws.end());
  const double alpha = 1.0 - level;
  BootstrapCI ci;
  ci.point = point;
  ci.lower = sorted_quantile(draws, alpha / 2.0);
  ci.upper = sorted_quantile(draws, 1.0 - alpha / 2.0);
  ci.level = level;
  ci.resamples = draws.size();
  ci.seed = seed;
  return ci;
}

std::vector<double> bootstrap_counts(std::size_t n, std::uint64_t seed, std::size_t index) {
  CounterRng rng(seed, index);
  std::vector<double> counts(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) counts[rng.below(n)] += 1.0;
  return counts;
}

BootstrapCI bootstrap_ci(std::span<const double> values, Statistic statistic, double level,
                         std::size_t resamples, std::uint64_t seed) {
  check_arguments(values.size(), level, resamples);
  (void)statistic;  // Statistic::Mean is the only statistic
  const double point = mean(values);
  std::vector<double> draws(resamples);
  const std::size_t n = values.size();
  for (std::size_t r = 0; r < resamples; ++r) {
    CounterRng rng(seed, r);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += values[rng.below(n)];
    draws[r] = sum / static_cast<double>(n);
  }
  return percentile_ci(draws, point, level, seed);
}

std::vector<BootstrapCI> bootstrap_percentile(
    std::size_t n, std::span<const double> point,
    const std::function<std::vector<double>(std::span<const double> counts)>& estimate,
    double level, std::size_t resamples, std::uint64_t seed) {
  check_arguments(n, level, resamples);
  const std::size_t k = point.size();
  std::vector<std::vector<double>> draws(k, std::vector<double>(resamples));
  for (std::size_t r = 0; r < resamples; ++r) {
    const std::vector<double> counts = bootstrap_counts(n, seed, r);
    const std::vector<double> values = estimate(counts);
    if (values.size() != k) {
      throw Error("bootstrap: estimator returned " + std::to_string(values.size()) +
                  " values, expected " + std::to_string(k));
    }
    for (std::size_t c = 0; c < k; ++c) draws[c][r] = values[c];
  }
  std::vector<BootstrapCI> out;
  out.reserve(k);
  for (std::size_t c = 0; c < k; ++c) out.push_back(percentile_ci(draws[c], point[c], level, seed));
  return out;
}

}  // namespace semdim
