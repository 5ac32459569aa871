#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semdim/axes.hpp"
#include "semdim/binomial.hpp"
#include "semdim/bootstrap.hpp"
#include "semdim/diagnostics.hpp"
#include "semdim/embedding.hpp"
#include "semdim/survey.hpp"

namespace semdim {

/// Identifies one embedding-based measurement: embedding x dimension x wordset x measure.
struct RunKey {
  std::string embedding;
  std::string dimension;
  std::string wordset;
  std::string measure;

  auto operator<=>(const RunKey&) const = default;
  std::string str() const;
};

/// Scores are oriented so that larger values sit toward the dimension's high
/// survey end.
struct MeasurementRun {
  RunKey key;
  std::string label;
  std::vector<std::string> identities;  // scored, in request order
  std::vector<double> scores;
  std::vector<std::string> skipped;     // out-of-vocabulary identities
  std::vector<std::string> unresolved_pole_words;

  std::optional<double> score_of(std::string_view identity) const;
};

/// `model` must already be in the normalization state the measure needs
/// (see measure_spec). `spec` must be binary.
MeasurementRun run_measurement(const EmbeddingModel& model, const DimensionSpec& spec,
                               Measure measure, const std::vector<std::string>& identities,
                               WarningLog* warnings = nullptr);

enum class AccuracyStatus { Ok, Degenerate, TooFew };

std::string_view to_string(AccuracyStatus status);

struct DimensionAccuracy {
  RunKey key;
  std::string dataset;
  std::optional<double> pearson_r;
  std::size_t n_identities = 0;
  AccuracyStatus status = AccuracyStatus::Ok;
  std::string detail;
};

/// Pearson correlation between run scores and survey means over the shared
/// identities, in run order. Throws Error when fewer than three identities are
/// shared and DegenerateError when either side is constant.
DimensionAccuracy dimension_accuracy(const MeasurementRun& run,
                                     const std::vector<BeliefStats>& survey,
                                     const std::string& dataset = {});

/// Same, but reports failures through `status` instead of throwing.
DimensionAccuracy try_dimension_accuracy(const MeasurementRun& run,
                                         const std::vector<BeliefStats>& survey,
                                         const std::string& dataset = {});

struct BeliefRankingScore {
  std::string identity;
  std::string dimension;
  std::size_t n = 0;          // confidently ordered comparison identities
  std::size_t n_correct = 0;  // of those, ordered the same way by the embedding
  std::optional<double> accuracy() const;
};

/// Identity i and j are confidently ordered when mean_i - se_i > mean_j + se_j
/// (or the reverse). The embedding agrees when its scores order the pair the
/// same way strictly; ties count as disagreement. With `flip` the run's scores
/// are negated first (sign alignment).
BeliefRankingScore belief_ranking_score(const std::string& identity, const MeasurementRun& run,
                                        const std::vector<BeliefStats>& survey, bool flip = false);

/// belief_ranking_score for every identity shared by the run and the survey,
/// sorted by identity; O(n log n) overall.
std::vector<BeliefRankingScore> belief_ranking_scores(const MeasurementRun& run,
                                                      const std::vector<BeliefStats>& survey,
                                                      bool flip = false);

/// Argmax of pearson_r per (dimension, dataset) among Ok accuracies. Ties go to
/// the lexicographically smallest (embedding, wordset, measure).
std::vector<DimensionAccuracy> select_best_settings(const std::vector<DimensionAccuracy>& accuracies);

struct SalienceDimension {
  std::string dimension;
  double isa = 0.0;
  double seenwith = 0.0;
  double importance = 0.0;  // max(isa, seenwith)
  std::optional<BootstrapCI> isa_ci;
  std::optional<BootstrapCI> seenwith_ci;
  std::optional<BootstrapCI> importance_ci;
};

struct SalienceResult {
  FitResult isa_fit;
  FitResult seenwith_fit;
  std::size_t isa_observations = 0;
  std::size_t seenwith_observations = 0;
  std::vector<SalienceDimension> dimensions;  // in BeliefMatrix column order
};

struct BootstrapOptions {
  std::size_t resamples = 0;  // 0 disables intervals
  double level = 0.95;
  std::uint64_t seed = 0;
};

/// Two logistic regressions (IsA, SeenWith) of selection on |X_q,d - X_a,d|
/// for every dimension d of `x`, with intercept.
SalienceResult fit_salience(const std::vector<LabelingObservation>& observations,
                            const BeliefMatrix& x, const FitOptions& fit = {},
                            const BootstrapOptions& bootstrap = {});

/// Pearson correlation over the dimensions present in both maps (needs >= 3).
double salience_accuracy_correlation(const std::map<std::string, double>& importance,
                                     const std::map<std::string, double>& accuracy);

enum class BeliefFactor { Sd, DistanceToMedian, LogFrequency, Synsets };

std::string_view to_string(BeliefFactor factor);
const std::vector<BeliefFactor>& all_belief_factors();

struct FactorRegression {
  std::vector<BeliefFactor> factors;
  FitResult fit;
  std::size_t beliefs = 0;  // observations with N > 0 and every covariate present
  std::vector<BootstrapCI> coefficient_cis;  // empty when bootstrap disabled
  std::optional<BootstrapCI> intercept_ci;
};

/// Binomial GLM of N_c successes out of N trials per belief on linear factor
/// terms. Beliefs with N == 0 carry no information and are left out, as are
/// beliefs missing a requested covariate. Needs at least 20 usable beliefs.
FactorRegression belief_factor_regression(const std::vector<BeliefRankingScore>& scores,
                                          const std::vector<BeliefStats>& survey,
                                          const std::vector<BeliefFactor>& factors,
                                          const FitOptions& fit = {},
                                          const BootstrapOptions& bootstrap = {});

}  // namespace semdim
