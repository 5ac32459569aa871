#pragma once

#include <span>

namespace semdim {

/// Pearson product-moment correlation. Requires equal lengths >= 3; throws
/// DegenerateError when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> values);
/// Sample (n-1) variance; requires at least two values.
double sample_variance(std::span<const double> values);
double sample_sd(std::span<const double> values);
/// Midpoint of the two central values for even lengths.
double median(std::span<const double> values);
/// Linear-interpolation quantile (R type 7) of already sorted values.
double sorted_quantile(std::span<const double> sorted, double q);

}  // namespace semdim
