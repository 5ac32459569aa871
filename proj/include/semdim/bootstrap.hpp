#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace semdim {

struct BootstrapCI {
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
};

enum class Statistic { Mean };

/// Percentile bootstrap interval for `statistic` of `values`. Resample r draws
/// from the substream (seed, r), so results do not depend on evaluation order.
BootstrapCI bootstrap_ci(std::span<const double> values, Statistic statistic, double level,
                         std::size_t resamples, std::uint64_t seed);

/// Percentile interval from a set of resampled statistics (sorted in place).
BootstrapCI percentile_ci(std::vector<double>& draws, double point, double level,
                          std::uint64_t seed);

/// Multiplicity of each of `n` observations in resample `index`, i.e. a
/// with-replacement draw of size n expressed as per-observation counts.
std::vector<double> bootstrap_counts(std::size_t n, std::uint64_t seed, std::size_t index);

/// Percentile intervals for a vector-valued estimator. `estimate` receives the
/// resample's per-observation counts and returns one value per component;
/// `point` is the full-sample estimate.
std::vector<BootstrapCI> bootstrap_percentile(
    std::size_t n, std::span<const double> point,
    const std::function<std::vector<double>(std::span<const double> counts)>& estimate,
    double level, std::size_t resamples, std::uint64_t seed);

}  // namespace semdim
