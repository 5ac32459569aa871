#pragma once

#include <cstddef>
#include <vector>

#include "semdim/matrix.hpp"

namespace semdim {

struct PowerIterationOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10000;
};

/// Unit vector maximizing the variance of the mean-centered rows. Runs power
/// iteration on whichever of the centered covariance (cols x cols) or Gram
/// (rows x rows) matrix is smaller. The sign is arbitrary; callers orient it.
/// Throws DegenerateError if the centered matrix is all zeros.
std::vector<double> first_principal_component(const Matrix& rows,
                                              const PowerIterationOptions& options = {});

}  // namespace semdim
