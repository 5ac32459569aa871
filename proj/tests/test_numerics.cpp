#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "semdim/binomial.hpp"
#include "semdim/bootstrap.hpp"
#include "semdim/error.hpp"
#include "semdim/pca.hpp"
#include "semdim/rng.hpp"
#include "semdim/stats.hpp"

using namespace semdim;

namespace {

Matrix to_matrix(const oracle::Mat& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

oracle::Mat to_rows(const Matrix& m) {
  oracle::Mat out;
  for (std::size_t i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

double sign_agnostic_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double plus = 0.0, minus = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    plus = std::max(plus, std::abs(a[i] - b[i]));
    minus = std::max(minus, std::abs(a[i] + b[i]));
  }
  return std::min(plus, minus);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("pearson worked examples") {
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) == doctest::Approx(1.0));
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) ==
        doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("pearson errors") {
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), DegenerateError);
  CHECK_THROWS_AS(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}), DegenerateError);
}

TEST_CASE("pearson symmetry and affine behaviour") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(25), y(25);
    for (auto& v : x) v = normal(gen);
    for (auto& v : y) v = normal(gen) + 0.3 * x[&v - y.data()];
    const double r = pearson(x, y);
    CHECK(std::abs(r - pearson(y, x)) <= 1e-12);
    const double a = std::exp(normal(gen)), b = normal(gen) * 10;
    std::vector<double> pos(x), neg(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
      pos[i] = a * x[i] + b;
      neg[i] = -a * x[i] + b;
    }
    CHECK(std::abs(pearson(pos, y) - r) <= 1e-12);
    CHECK(std::abs(pearson(neg, y) + r) <= 1e-12);
    CHECK(std::abs(r - oracle::pearson(x, y)) <= 1e-12);
  }
}

TEST_CASE("descriptive statistics") {
  CHECK(sample_variance(std::vector<double>{0, 0.5, 1}) == doctest::Approx(0.25));
  CHECK(median(std::vector<double>{0.1, 0.2, 0.9, 1.0}) == doctest::Approx(0.55));
  CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
  const std::vector<double> sorted{1, 2, 3, 4};
  CHECK(sorted_quantile(sorted, 0.0) == 1.0);
  CHECK(sorted_quantile(sorted, 1.0) == 4.0);
  CHECK(sorted_quantile(sorted, 0.5) == doctest::Approx(2.5));
  CHECK(sorted_quantile(sorted, 0.25) == doctest::Approx(1.75));  // R type 7
}

TEST_CASE("first principal component examples") {
  const auto pc = first_principal_component(to_matrix({{1, 0}, {-1, 0}}));
  CHECK(std::abs(pc[0]) == doctest::Approx(1.0));
  CHECK(pc[1] == doctest::Approx(0.0));

  // A single pair difference v enters as the centered pair {v/2, -v/2}.
  const std::vector<double> v{3, -1, 2};
  const double nv = std::sqrt(14.0);
  const auto single = first_principal_component(to_matrix({{1.5, -0.5, 1}, {-1.5, 0.5, -1}}));
  CHECK(sign_agnostic_gap(single, {3 / nv, -1 / nv, 2 / nv}) <= 1e-12);

  CHECK_THROWS_AS(first_principal_component(to_matrix({{1, 2, 3}})), DegenerateError);
  CHECK_THROWS_AS(first_principal_component(to_matrix({{1, 2}, {1, 2}, {1, 2}})), DegenerateError);
}

TEST_CASE("first principal component against the oracle, both iteration paths") {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal;
  for (auto [n, d] : {std::pair{5, 4}, std::pair{4, 5}, std::pair{12, 3}, std::pair{6, 40}}) {
    for (int t = 0; t < 10; ++t) {
      oracle::Mat rows(n, oracle::Vec(d));
      for (auto& r : rows)
        for (auto& x : r) x = normal(gen);
      const auto pc = first_principal_component(to_matrix(rows));
      const auto ref = oracle::principal_component(rows);
      CHECK(sign_agnostic_gap(pc, ref) <= 1e-6);
    }
  }
}

TEST_CASE("principal component maximizes projected variance") {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 20; ++t) {
    Matrix m(8, 6);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 6; ++j) m(i, j) = normal(gen) * (j + 1);
    const auto pc = first_principal_component(m);
    CHECK(std::abs(oracle::norm(pc) - 1.0) <= 1e-12);
    const auto rows = to_rows(m);
    auto variance_along = [&](const oracle::Vec& u) {
      oracle::Vec proj;
      for (const auto& r : rows) proj.push_back(oracle::dot(r, u));
      double mean = 0.0;
      for (double p : proj) mean += p / proj.size();
      double var = 0.0;
      for (double p : proj) var += (p - mean) * (p - mean);
      return var;
    };
    const double best = variance_along(pc);
    for (int k = 0; k < 100; ++k) {
      oracle::Vec u(6);
      for (auto& x : u) x = normal(gen);
      const double nu = oracle::norm(u);
      for (auto& x : u) x /= nu;
      CHECK(variance_along(u) <= best * (1 + 1e-12));
    }
  }
}

TEST_CASE("fit_binomial recovers a logistic slope") {
  std::mt19937_64 gen(29);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  const std::size_t n = 10000;
  Matrix x(n, 1);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = normal(gen);
    y[i] = unif(gen) < 1.0 / (1.0 + std::exp(-2.0 * x(i, 0))) ? 1.0 : 0.0;
  }
  const auto fit = fit_binomial({x, y});
  CHECK(fit.converged);
  CHECK(fit.coefficients[0] == doctest::Approx(2.0).epsilon(0.025));
  CHECK(std::abs(fit.intercept) < 0.1);
}

TEST_CASE("fit_binomial with no successes") {
  // Symmetric feature values: the slope is zero by symmetry.
  Matrix x(40, 1);
  for (std::size_t i = 0; i < 40; ++i) x(i, 0) = static_cast<double>(i) - 19.5;
  std::vector<double> zeros(40, 0.0);
  const auto fit = fit_binomial({x, zeros}, {.ridge = 1e-2});
  CHECK(fit.converged);
  CHECK(fit.intercept < -3.0);
  CHECK(std::abs(fit.coefficients[0]) < 1e-3);
}

TEST_CASE("fit_binomial singular at zero ridge") {
  Matrix x(6, 2);
  for (std::size_t i = 0; i < 6; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = 2.0 * static_cast<double>(i);  // collinear
  }
  const std::vector<double> y{0, 1, 0, 1, 1, 0};
  try {
    fit_binomial({x, y}, {.ridge = 0.0});
    FAIL("expected a singular-system error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("ridge") != std::string::npos);
  }
  CHECK(fit_binomial({x, y}, {.ridge = 1e-6}).converged);
}

TEST_CASE("fit_binomial validates its inputs") {
  Matrix x(3, 1, 1.0);
  CHECK_THROWS_AS(fit_binomial({x, std::vector<double>{0, 1}}), Error);
  CHECK_THROWS_AS(fit_binomial({x, std::vector<double>{0, 2, 1}}), Error);
  CHECK_THROWS_AS(fit_binomial({x, std::vector<double>{0, 1, 1}, {}, std::vector<double>{1, -1, 1}}), Error);
  x(1, 0) = std::nan("");
  CHECK_THROWS_AS(fit_binomial({x, std::vector<double>{0, 1, 1}}), Error);
}

TEST_CASE("fit_binomial matches the independent IRLS oracle") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 200, p = 3;
    oracle::Mat xs(n, oracle::Vec(p));
    oracle::Vec succ(n), trials(n), weights(n);
    for (std::size_t i = 0; i < n; ++i) {
      double eta = -0.3;
      for (std::size_t j = 0; j < p; ++j) {
        xs[i][j] = normal(gen);
        eta += (0.5 - 0.4 * j) * xs[i][j];
      }
      trials[i] = 1 + static_cast<int>(unif(gen) * 5);
      succ[i] = 0;
      for (int k = 0; k < trials[i]; ++k) succ[i] += unif(gen) < 1 / (1 + std::exp(-eta)) ? 1 : 0;
      weights[i] = 0.5 + unif(gen);
    }
    const auto fit = fit_binomial({to_matrix(xs), succ, trials, weights}, {.ridge = 1e-3});
    const auto ref = oracle::logistic_irls(xs, succ, trials, weights, 1e-3);
    CHECK(std::abs(fit.intercept - ref[0]) <= 1e-6);
    for (std::size_t j = 0; j < p; ++j) CHECK(std::abs(fit.coefficients[j] - ref[j + 1]) <= 1e-6);
  }
}

TEST_CASE("zero weight equals deletion; ridge shrinks monotonically") {
  std::mt19937_64 gen(37);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  const std::size_t n = 120;
  Matrix x(n, 2);
  Matrix x_kept;
  std::vector<double> y(n), w(n, 1.0), y_kept;
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = normal(gen);
    x(i, 1) = normal(gen);
    y[i] = unif(gen) < 1 / (1 + std::exp(-(x(i, 0) - x(i, 1)))) ? 1 : 0;
    if (i % 7 == 3) {
      w[i] = 0.0;
    } else {
      x_kept.append_row(x.row(i));
      y_kept.push_back(y[i]);
    }
  }
  const auto weighted = fit_binomial({x, y, {}, w});
  const auto deleted = fit_binomial({x_kept, y_kept});
  CHECK(std::abs(weighted.intercept - deleted.intercept) <= 1e-8);
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(weighted.coefficients[j] - deleted.coefficients[j]) <= 1e-8);

  double previous = INFINITY;
  for (double ridge : {0.0, 1e-6, 1e-3, 0.1, 1.0, 10.0, 100.0}) {
    const auto fit = fit_binomial({x, y}, {.ridge = ridge});
    const double size = std::sqrt(fit.intercept * fit.intercept + fit.coefficients[0] * fit.coefficients[0] +
                                  fit.coefficients[1] * fit.coefficients[1]);
    CHECK(size <= previous + 1e-12);
    previous = size;
  }
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 gen(41);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  Matrix x(50, 3);
  std::vector<double> y(50);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = normal(gen);
    y[i] = unif(gen) < 0.4 ? 1 : 0;
  }
  const BinomialData data{x, y};
  const FitOptions opts{.ridge = 0.5};
  std::vector<double> beta{0.3, -0.7, 1.1, 0.2};
  const auto g = penalized_gradient(data, beta, opts);
  for (std::size_t k = 0; k < beta.size(); ++k) {
    auto up = beta, down = beta;
    up[k] += 1e-5;
    down[k] -= 1e-5;
    const double fd = (penalized_log_likelihood(data, up, opts) - penalized_log_likelihood(data, down, opts)) / 2e-5;
    CHECK(std::abs(fd - g[k]) / std::max(1e-8, std::abs(g[k])) < 1e-4);
  }
}

TEST_CASE("bootstrap intervals") {
  const std::vector<double> constant{5, 5, 5, 5};
  const auto c = bootstrap_ci(constant, Statistic::Mean, 0.95, 200, 1);
  CHECK(c.lower == 5.0);
  CHECK(c.upper == 5.0);
  CHECK(c.point == 5.0);

  std::vector<double> values{1, 4, 2, 8, 5, 7};
  const auto a = bootstrap_ci(values, Statistic::Mean, 0.9, 500, 99);
  const auto b = bootstrap_ci(values, Statistic::Mean, 0.9, 500, 99);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  CHECK(a.lower <= a.point);
  CHECK(a.point <= a.upper);

  CHECK_THROWS_AS(bootstrap_ci(std::vector<double>{}, Statistic::Mean, 0.95, 200, 1), Error);
  CHECK_THROWS_AS(bootstrap_ci(values, Statistic::Mean, 0.95, 50, 1), Error);
  CHECK_THROWS_AS(bootstrap_ci(values, Statistic::Mean, 1.5, 200, 1), Error);
}

TEST_CASE("bootstrap coverage of a normal mean") {
  std::mt19937_64 gen(43);
  std::normal_distribution<double> normal;
  int covered = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1000);
    for (auto& x : v) x = normal(gen);
    const auto ci = bootstrap_ci(v, Statistic::Mean, 0.95, 200, 1000 + trial);
    covered += ci.lower <= 0.0 && 0.0 <= ci.upper;
  }
  CHECK(covered >= 90);
}

TEST_CASE("bootstrap counts are resamples of size n") {
  for (std::size_t r = 0; r < 20; ++r) {
    const auto counts = bootstrap_counts(37, 5, r);
    double total = 0.0;
    for (double c : counts) total += c;
    CHECK(total == 37.0);
    CHECK(counts == bootstrap_counts(37, 5, r));
  }
}

TEST_CASE("counter rng is reproducible and uniform-ish") {
  CounterRng a(9, 2), b(9, 2), c(9, 3);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  CounterRng u(1);
  double sum = 0.0;
  std::vector<int> bins(10, 0);
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
    ++bins[u.below(10)];
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  for (int count : bins) CHECK(std::abs(count - 10000) < 500);
}

}  // TEST_SUITE
