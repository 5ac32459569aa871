#include "semdim/pca.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "semdim/error.hpp"

namespace semdim {

namespace {

// Dominant eigenvector of a symmetric PSD matrix.
Eigen::VectorXd dominant_eigenvector(const Eigen::MatrixXd& m,
                                     const PowerIterationOptions& options) {
  // Start from the column with the largest diagonal entry; for a centered
  // Gram matrix the all-ones vector lies in the null space.
  Eigen::Index start = 0;
  m.diagonal().maxCoeff(&start);
  Eigen::VectorXd v = m.col(start);
  v.normalize();
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd next = m * v;
    const double norm = next.norm();
    if (norm == 0.0) break;
    next /= norm;
    const double change = (next - v).norm();
    v = std::move(next);
    if (change < options.tolerance) break;
  }
  return v;
}

}  // namespace

std::vector<double> first_principal_component(const Matrix& rows,
                                              const PowerIterationOptions& options) {
  if (rows.rows() == 0 || rows.cols() == 0) throw Error("principal component of an empty matrix");
  const auto n = static_cast<Eigen::Index>(rows.rows());
  const auto d = static_cast<Eigen::Index>(rows.cols());

  Eigen::MatrixXd centered(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) centered(i, j) = rows(i, j);
  }
  const Eigen::RowVectorXd column_means = centered.colwise().mean();
  centered.rowwise() -= column_means;
  if (centered.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateError("principal component undefined: centered rows are all zero");
  }

  Eigen::VectorXd component;
  if (n < d) {
    const Eigen::MatrixXd gram = centered * centered.transpose();
    const Eigen::VectorXd u = dominant_eigenvector(gram, options);
    component = centered.transpose() * u;
  } else {
    const Eigen::MatrixXd covariance = centered.transpose() * centered;
    component = dominant_eigenvector(covariance, options);
  }
  const double norm = component.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateError("principal component iteration collapsed to zero");
  }
  component /= norm;
  return {component.data(), component.data() + component.size()};
}

}  // namespace semdim
