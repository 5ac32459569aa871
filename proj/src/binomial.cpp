#include "semdim/binomial.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "semdim/error.hpp"

namespace semdim {

namespace {

struct Prepared {
  Eigen::MatrixXd design;  // intercept column first when requested
  Eigen::VectorXd successes;
  Eigen::VectorXd trials;
  Eigen::VectorXd weights;
};

Prepared prepare(const BinomialData& data, const FitOptions& options) {
  const std::size_t n = data.features.rows();
  const std::size_t p = data.features.cols();
  if (data.successes.size() != n) {
    throw Error("fit_binomial: " + std::to_string(data.successes.size()) + " outcomes for " +
                std::to_string(n) + " observations");
  }
  if (!data.trials.empty() && data.trials.size() != n) throw Error("fit_binomial: trials length mismatch");
  if (!data.weights.empty() && data.weights.size() != n) throw Error("fit_binomial: weights length mismatch");
  if (options.ridge < 0.0) throw Error("fit_binomial: ridge must be nonnegative");

  const std::size_t offset = options.intercept ? 1 : 0;
  Prepared out;
  out.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p + offset));
  out.successes.resize(static_cast<Eigen::Index>(n));
  out.trials.resize(static_cast<Eigen::Index>(n));
  out.weights.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    if (options.intercept) out.design(r, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double x = data.features(i, j);
      if (!std::isfinite(x)) {
        throw Error("fit_binomial: non-finite feature at observation " + std::to_string(i));
      }
      out.design(r, static_cast<Eigen::Index>(j + offset)) = x;
    }
    const double t = data.trials.empty() ? 1.0 : data.trials[i];
    const double y = data.successes[i];
    const double w = data.weights.empty() ? 1.0 : data.weights[i];
    if (!(y >= 0.0) || !(t >= y) || !std::isfinite(t)) {
      throw Error("fit_binomial: need trials >= successes >= 0 at observation " + std::to_string(i));
    }
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("fit_binomial: negative or non-finite weight at observation " + std::to_string(i));
    }
    out.successes(r) = y;
    out.trials(r) = t;
    out.weights(r) = w;
  }
  return out;
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta) { return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double logistic(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double log_likelihood(const Prepared& d, const Eigen::VectorXd& eta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (d.weights(i) == 0.0) continue;
    ll += d.weights(i) * (d.successes(i) * eta(i) - d.trials(i) * softplus(eta(i)));
  }
  return ll;
}

double objective(const Prepared& d, const Eigen::VectorXd& beta, double ridge) {
  return log_likelihood(d, d.design * beta) - 0.5 * ridge * beta.squaredNorm();
}

Eigen::VectorXd gradient(const Prepared& d, const Eigen::VectorXd& beta, double ridge) {
  const Eigen::VectorXd eta = d.design * beta;
  Eigen::VectorXd residual(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    residual(i) = d.weights(i) * (d.successes(i) - d.trials(i) * logistic(eta(i)));
  }
  return d.design.transpose() * residual - ridge * beta;
}

Eigen::VectorXd to_eigen(std::span<const double> beta, Eigen::Index expected) {
  if (static_cast<Eigen::Index>(beta.size()) != expected) {
    throw Error("coefficient vector has " + std::to_string(beta.size()) + " entries, expected " +
                std::to_string(expected));
  }
  return Eigen::Map<const Eigen::VectorXd>(beta.data(), expected);
}

}  // namespace

double penalized_log_likelihood(const BinomialData& data, std::span<const double> beta,
                                const FitOptions& options) {
  const Prepared d = prepare(data, options);
  return objective(d, to_eigen(beta, d.design.cols()), options.ridge);
}

std::vector<double> penalized_gradient(const BinomialData& data, std::span<const double> beta,
                                       const FitOptions& options) {
  const Prepared d = prepare(data, options);
  const Eigen::VectorXd g = gradient(d, to_eigen(beta, d.design.cols()), options.ridge);
  return {g.data(), g.data() + g.size()};
}

FitResult fit_binomial(const BinomialData& data, const FitOptions& options) {
  const Prepared d = prepare(data, options);
  const Eigen::Index p = d.design.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double current = objective(d, beta, options.ridge);

  FitResult result;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    result.iterations = it;
    const Eigen::VectorXd eta = d.design * beta;
    Eigen::VectorXd irls_weights(eta.size());
    Eigen::VectorXd residual(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
      const double mu = logistic(eta(i));
      irls_weights(i) = d.weights(i) * d.trials(i) * mu * (1.0 - mu);
      residual(i) = d.weights(i) * (d.successes(i) - d.trials(i) * mu);
    }
    const Eigen::VectorXd grad = d.design.transpose() * residual - options.ridge * beta;
    Eigen::MatrixXd information = d.design.transpose() * irls_weights.asDiagonal() * d.design;
    information.diagonal().array() += options.ridge;

    const Eigen::LDLT<Eigen::MatrixXd> solver(information);
    if (solver.info() != Eigen::Success || !solver.isPositive() || solver.rcond() < 1e-14) {
      if (options.ridge == 0.0) {
        throw Error(
            "fit_binomial: weighted normal equations are singular (collinear or constant "
            "features); refit with a positive ridge penalty");
      }
      // With ridge > 0 the system is positive definite; loss of precision means
      // the weights have collapsed (complete separation).
      break;
    }
    Eigen::VectorXd step = solver.solve(grad);
    if (!step.allFinite()) break;
    if (step.cwiseAbs().maxCoeff() < options.tolerance) {
      beta += step;
      result.converged = true;
      break;
    }

    // Step halving keeps the penalized objective nondecreasing.
    Eigen::VectorXd candidate = beta + step;
    double value = objective(d, candidate, options.ridge);
    for (int halvings = 0; halvings < 30 && !(value >= current); ++halvings) {
      step *= 0.5;
      candidate = beta + step;
      value = objective(d, candidate, options.ridge);
    }
    if (!(value >= current)) break;
    beta = candidate;
    current = value;
    if (step.cwiseAbs().maxCoeff() < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  const Eigen::Index offset = options.intercept ? 1 : 0;
  result.intercept = options.intercept ? beta(0) : 0.0;
  result.coefficients.assign(beta.data() + offset, beta.data() + p);
  result.log_likelihood = log_likelihood(d, d.design * beta);
  if (result.converged) {
    for (double c : result.coefficients) {
      if (!std::isfinite(c)) result.converged = false;
    }
  }
  return result;
}

}  // namespace semdim
