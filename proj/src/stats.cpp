#include "semdim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "semdim/error.hpp"

namespace semdim {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error("pearson: length mismatch (" + std::to_string(x.size()) + " vs " +
                std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw Error("pearson: need at least 3 observations");

  // Single-pass co-moment updates (Welford).
  double mean_x = 0.0, mean_y = 0.0, m2x = 0.0, m2y = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    mean_x += dx / n;
    mean_y += dy / n;
    m2x += dx * (x[i] - mean_x);
    m2y += dy * (y[i] - mean_y);
    cxy += dx * (y[i] - mean_y);
  }
  if (!(m2x > 0.0) || !(m2y > 0.0)) {
    throw DegenerateError("pearson: zero variance in " +
                          std::string(!(m2x > 0.0) ? "first" : "second") + " input");
  }
  const double r = cxy / std::sqrt(m2x * m2y);
  return std::clamp(r, -1.0, 1.0);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sequence");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw Error("sample variance needs at least two values");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

double sample_sd(std::span<const double> values) { return std::sqrt(sample_variance(values)); }

double median(std::span<const double> values) {
  if (values.empty()) throw Error("median of empty sequence");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  return n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("quantile of empty sequence");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace semdim
