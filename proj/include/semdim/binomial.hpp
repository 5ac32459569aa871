#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "semdim/matrix.hpp"

namespace semdim {

struct FitOptions {
  /// L2 penalty on every coefficient, intercept included.
  double ridge = 1e-6;
  std::size_t max_iterations = 100;
  /// Converged when the largest absolute coefficient change falls below this.
  double tolerance = 1e-8;
  bool intercept = true;
};

struct FitResult {
  std::vector<double> coefficients;  // one per feature column
  double intercept = 0.0;            // 0 when fitted without intercept
  bool converged = false;
  std::size_t iterations = 0;
  /// Weighted binomial log-likelihood at the solution (no combinatorial constant).
  double log_likelihood = 0.0;
};

/// Binomial observations: `successes[i]` out of `trials[i]`, each scaled by
/// `weights[i]`. Empty `trials`/`weights` mean all ones.
struct BinomialData {
  const Matrix& features;
  std::span<const double> successes;
  std::span<const double> trials = {};
  std::span<const double> weights = {};
};

/// Ridge-penalized maximum likelihood for a logit-link binomial model by IRLS
/// (Newton) with step halving. Non-convergence is reported through
/// `converged`, not thrown. Throws Error when the weighted normal equations are
/// singular, which can only happen with ridge == 0.
FitResult fit_binomial(const BinomialData& data, const FitOptions& options = {});

/// Penalized objective  l(beta) - ridge/2 * |beta|^2  and its gradient, with the
/// intercept (if any) stored first in `beta`. Exposed for verification.
double penalized_log_likelihood(const BinomialData& data, std::span<const double> beta,
                                const FitOptions& options);
std::vector<double> penalized_gradient(const BinomialData& data, std::span<const double> beta,
                                       const FitOptions& options);

}  // namespace semdim
