#include "semdim/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "semdim/error.hpp"
#include "semdim/rng.hpp"
#include "semdim/stats.hpp"

namespace semdim {

std::string RunKey::str() const { return embedding + "/" + dimension + "/" + wordset + "/" + measure; }

std::optional<double> MeasurementRun::score_of(std::string_view identity) const {
  for (std::size_t i = 0; i < identities.size(); ++i) {
    if (identities[i] == identity) return scores[i];
  }
  return std::nullopt;
}

MeasurementRun run_measurement(const EmbeddingModel& model, const DimensionSpec& spec,
                               Measure measure, const std::vector<std::string>& identities,
                               WarningLog* warnings) {
  const PositionMeasureSpec& m = measure_spec(measure);
  MeasurementRun run;
  run.key = {model.name(), spec.name, std::string(to_string(spec.source)), std::string(m.name)};
  run.label = spec.label.empty() ? spec.name : spec.label;

  const AxisDirection direction = build_direction(spec, m.direction, model, warnings);
  run.unresolved_pole_words = direction.unresolved;
  const double orientation = spec.high_pole == Pole::Left ? 1.0 : -1.0;
  for (const auto& identity : identities) {
    const std::optional<double> s = score(identity, measure, direction, model);
    if (!s) {
      run.skipped.push_back(identity);
      if (warnings) warnings->add("identity-oov", "identity '" + identity + "' not in model; skipped", run.key.str());
      continue;
    }
    run.identities.push_back(identity);
    run.scores.push_back(orientation * *s);
  }
  return run;
}

std::string_view to_string(AccuracyStatus status) {
  switch (status) {
    case AccuracyStatus::Ok: return "ok";
    case AccuracyStatus::Degenerate: return "degenerate";
    case AccuracyStatus::TooFew: return "too-few";
  }
  return "ok";
}

namespace {

struct Aligned {
  std::vector<std::string> identities;
  std::vector<double> means;
  std::vector<double> ses;
  std::vector<double> scores;
};

// Identities present in both the run and the survey on the run's dimension, in run order.
Aligned align(const MeasurementRun& run, const std::vector<BeliefStats>& survey) {
  std::unordered_map<std::string, const BeliefStats*> by_identity;
  for (const auto& s : survey) {
    if (s.dimension == run.key.dimension) by_identity.emplace(s.identity, &s);
  }
  Aligned out;
  for (std::size_t i = 0; i < run.identities.size(); ++i) {
    const auto it = by_identity.find(run.identities[i]);
    if (it == by_identity.end()) continue;
    out.identities.push_back(run.identities[i]);
    out.means.push_back(it->second->mean);
    out.ses.push_back(it->second->se);
    out.scores.push_back(run.scores[i]);
  }
  return out;
}

// Fenwick tree over score ranks.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t rank) {
    for (std::size_t i = rank + 1; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  // Number of inserted ranks strictly below `rank`.
  std::size_t below(std::size_t rank) const {
    std::size_t total = 0;
    for (std::size_t i = rank; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }

 private:
  std::vector<std::size_t> tree_;
};

}  // namespace

DimensionAccuracy dimension_accuracy(const MeasurementRun& run, const std::vector<BeliefStats>& survey,
                                     const std::string& dataset) {
  const Aligned a = align(run, survey);
  if (a.identities.size() < 3) {
    throw Error(run.key.str() + ": only " + std::to_string(a.identities.size()) +
                " identities shared with the survey; need at least 3");
  }
  DimensionAccuracy out;
  out.key = run.key;
  out.dataset = dataset;
  out.n_identities = a.identities.size();
  out.pearson_r = pearson(a.means, a.scores);
  return out;
}

DimensionAccuracy try_dimension_accuracy(const MeasurementRun& run, const std::vector<BeliefStats>& survey,
                                         const std::string& dataset) {
  const Aligned a = align(run, survey);
  DimensionAccuracy out;
  out.key = run.key;
  out.dataset = dataset;
  out.n_identities = a.identities.size();
  if (a.identities.size() < 3) {
    out.status = AccuracyStatus::TooFew;
    out.detail = "fewer than 3 shared identities";
    return out;
  }
  try {
    out.pearson_r = pearson(a.means, a.scores);
  } catch (const DegenerateError& e) {
    out.status = AccuracyStatus::Degenerate;
    out.detail = e.what();
  }
  return out;
}

std::optional<double> BeliefRankingScore::accuracy() const {
  if (n == 0) return std::nullopt;
  return static_cast<double>(n_correct) / static_cast<double>(n);
}

BeliefRankingScore belief_ranking_score(const std::string& identity, const MeasurementRun& run,
                                        const std::vector<BeliefStats>& survey, bool flip) {
  const Aligned a = align(run, survey);
  const auto it = std::find(a.identities.begin(), a.identities.end(), identity);
  if (it == a.identities.end()) {
    throw Error("identity '" + identity + "' is not in both the run and the survey for " + run.key.str());
  }
  const auto i = static_cast<std::size_t>(it - a.identities.begin());
  const double sign = flip ? -1.0 : 1.0;
  BeliefRankingScore out{identity, run.key.dimension, 0, 0};
  for (std::size_t j = 0; j < a.identities.size(); ++j) {
    if (j == i) continue;
    const bool i_above = a.means[i] - a.ses[i] > a.means[j] + a.ses[j];
    const bool i_below = a.means[j] - a.ses[j] > a.means[i] + a.ses[i];
    if (!i_above && !i_below) continue;
    ++out.n;
    const double si = sign * a.scores[i];
    const double sj = sign * a.scores[j];
    if ((i_above && si > sj) || (i_below && si < sj)) ++out.n_correct;
  }
  return out;
}

std::vector<BeliefRankingScore> belief_ranking_scores(const MeasurementRun& run,
                                                      const std::vector<BeliefStats>& survey, bool flip) {
  const Aligned a = align(run, survey);
  const std::size_t n = a.identities.size();
  std::vector<double> lower(n), upper(n), scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = a.means[i] - a.ses[i];
    upper[i] = a.means[i] + a.ses[i];
    scores[i] = flip ? -a.scores[i] : a.scores[i];
  }

  // Dense ranks of scores; equal scores share a rank so ties never count as correct.
  std::vector<double> distinct = scores;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), scores[i]) -
                                       distinct.begin());
  }

  std::vector<std::size_t> n_total(n, 0), n_correct(n, 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  // Pairs where i sits confidently above j: upper_j < lower_i; correct when score_j < score_i.
  {
    std::vector<std::size_t> by_upper = order, by_lower = order;
    std::sort(by_upper.begin(), by_upper.end(), [&](auto x, auto y) { return upper[x] < upper[y]; });
    std::sort(by_lower.begin(), by_lower.end(), [&](auto x, auto y) { return lower[x] < lower[y]; });
    Fenwick tree(distinct.size());
    std::size_t inserted = 0;
    for (std::size_t i : by_lower) {
      while (inserted < n && upper[by_upper[inserted]] < lower[i]) tree.add(rank[by_upper[inserted++]]);
      n_total[i] += inserted;
      n_correct[i] += tree.below(rank[i]);
    }
  }
  // Pairs where i sits confidently below j: lower_j > upper_i; correct when score_j > score_i.
  {
    std::vector<std::size_t> by_lower = order, by_upper = order;
    std::sort(by_lower.begin(), by_lower.end(), [&](auto x, auto y) { return lower[x] > lower[y]; });
    std::sort(by_upper.begin(), by_upper.end(), [&](auto x, auto y) { return upper[x] > upper[y]; });
    Fenwick tree(distinct.size());
    std::size_t inserted = 0;
    for (std::size_t i : by_upper) {
      while (inserted < n && lower[by_lower[inserted]] > upper[i]) tree.add(rank[by_lower[inserted++]]);
      n_total[i] += inserted;
      n_correct[i] += inserted - tree.below(rank[i] + 1);
    }
  }

  std::vector<BeliefRankingScore> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({a.identities[i], run.key.dimension, n_total[i], n_correct[i]});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.identity < y.identity; });
  return out;
}

std::vector<DimensionAccuracy> select_best_settings(const std::vector<DimensionAccuracy>& accuracies) {
  std::map<std::pair<std::string, std::string>, const DimensionAccuracy*> best;
  std::set<std::pair<std::string, std::string>> groups;
  auto tie_key = [](const RunKey& k) { return std::tie(k.embedding, k.wordset, k.measure); };
  for (const auto& a : accuracies) {
    const auto group = std::make_pair(a.key.dimension, a.dataset);
    groups.insert(group);
    if (a.status != AccuracyStatus::Ok || !a.pearson_r) continue;
    auto& slot = best[group];
    if (!slot || *a.pearson_r > *slot->pearson_r ||
        (*a.pearson_r == *slot->pearson_r && tie_key(a.key) < tie_key(slot->key))) {
      slot = &a;
    }
  }
  for (const auto& g : groups) {
    if (!best.count(g)) {
      throw DegenerateError("no valid accuracy for dimension '" + g.first + "' on dataset '" + g.second + "'");
    }
  }
  std::vector<DimensionAccuracy> out;
  for (const auto& [group, a] : best) out.push_back(*a);
  return out;
}

namespace {

struct SalienceDesign {
  Matrix features;
  std::vector<double> outcomes;
};

SalienceDesign salience_design(const std::vector<LabelingObservation>& observations,
                               const BeliefMatrix& x, QuestionType type) {
  SalienceDesign d;
  d.features = Matrix(0, x.dimensions.size());
  std::vector<double> row(x.dimensions.size());
  for (const auto& obs : observations) {
    if (obs.question_type != type) continue;
    const auto q = x.identity_index(obs.question_identity);
    const auto a = x.identity_index(obs.answer_identity);
    if (!q || !a) {
      throw Error("labeling observation (" + obs.question_identity + ", " + obs.answer_identity +
                  ") refers to an identity missing from the belief matrix");
    }
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = std::abs(x.values(*q, k) - x.values(*a, k));
    d.features.append_row(row);
    d.outcomes.push_back(obs.selected);
  }
  return d;
}

}  // namespace

SalienceResult fit_salience(const std::vector<LabelingObservation>& observations, const BeliefMatrix& x,
                            const FitOptions& fit, const BootstrapOptions& bootstrap) {
  const SalienceDesign isa = salience_design(observations, x, QuestionType::IsA);
  const SalienceDesign seen = salience_design(observations, x, QuestionType::SeenWith);
  if (isa.outcomes.empty() || seen.outcomes.empty()) {
    throw Error("salience needs both IsA and SeenWith observations");
  }
  SalienceResult out;
  out.isa_observations = isa.outcomes.size();
  out.seenwith_observations = seen.outcomes.size();
  out.isa_fit = fit_binomial({isa.features, isa.outcomes}, fit);
  out.seenwith_fit = fit_binomial({seen.features, seen.outcomes}, fit);

  const std::size_t dims = x.dimensions.size();
  for (std::size_t k = 0; k < dims; ++k) {
    SalienceDimension d;
    d.dimension = x.dimensions[k];
    d.isa = out.isa_fit.coefficients[k];
    d.seenwith = out.seenwith_fit.coefficients[k];
    d.importance = std::max(d.isa, d.seenwith);
    out.dimensions.push_back(std::move(d));
  }

  if (bootstrap.resamples > 0) {
    // IsA and SeenWith observations are resampled independently; resample r of
    // each is paired to form the importance draw.
    const std::uint64_t seen_seed = splitmix64(bootstrap.seed ^ 0x5EE5A11CE5EEDULL);
    std::vector<std::vector<double>> isa_draws(dims), seen_draws(dims), importance_draws(dims);
    for (std::size_t r = 0; r < bootstrap.resamples; ++r) {
      const auto wi = bootstrap_counts(isa.outcomes.size(), bootstrap.seed, r);
      const auto ws = bootstrap_counts(seen.outcomes.size(), seen_seed, r);
      const FitResult fi = fit_binomial({isa.features, isa.outcomes, {}, wi}, fit);
      const FitResult fs = fit_binomial({seen.features, seen.outcomes, {}, ws}, fit);
      for (std::size_t k = 0; k < dims; ++k) {
        isa_draws[k].push_back(fi.coefficients[k]);
        seen_draws[k].push_back(fs.coefficients[k]);
        importance_draws[k].push_back(std::max(fi.coefficients[k], fs.coefficients[k]));
      }
    }
    for (std::size_t k = 0; k < dims; ++k) {
      auto& d = out.dimensions[k];
      d.isa_ci = percentile_ci(isa_draws[k], d.isa, bootstrap.level, bootstrap.seed);
      d.seenwith_ci = percentile_ci(seen_draws[k], d.seenwith, bootstrap.level, bootstrap.seed);
      d.importance_ci = percentile_ci(importance_draws[k], d.importance, bootstrap.level, bootstrap.seed);
    }
  }
  return out;
}

double salience_accuracy_correlation(const std::map<std::string, double>& importance,
                                     const std::map<std::string, double>& accuracy) {
  std::vector<double> a, b;
  for (const auto& [dim, value] : importance) {
    const auto it = accuracy.find(dim);
    if (it == accuracy.end()) continue;
    a.push_back(value);
    b.push_back(it->second);
  }
  if (a.size() < 3) {
    throw Error("salience/accuracy correlation needs at least 3 shared dimensions, found " +
                std::to_string(a.size()));
  }
  return pearson(a, b);
}

std::string_view to_string(BeliefFactor factor) {
  switch (factor) {
    case BeliefFactor::Sd: return "sd";
    case BeliefFactor::DistanceToMedian: return "distance_to_median";
    case BeliefFactor::LogFrequency: return "log_frequency";
    case BeliefFactor::Synsets: return "synsets";
  }
  return "sd";
}

const std::vector<BeliefFactor>& all_belief_factors() {
  static const std::vector<BeliefFactor> factors{BeliefFactor::Sd, BeliefFactor::DistanceToMedian,
                                                 BeliefFactor::LogFrequency, BeliefFactor::Synsets};
  return factors;
}

FactorRegression belief_factor_regression(const std::vector<BeliefRankingScore>& scores,
                                          const std::vector<BeliefStats>& survey,
                                          const std::vector<BeliefFactor>& factors,
                                          const FitOptions& fit, const BootstrapOptions& bootstrap) {
  std::map<std::string, std::vector<double>> by_dimension;
  std::map<std::pair<std::string, std::string>, const BeliefStats*> records;
  for (const auto& s : survey) {
    by_dimension[s.dimension].push_back(s.mean);
    records[{s.identity, s.dimension}] = &s;
  }
  std::map<std::string, double> medians;
  for (const auto& [dim, means] : by_dimension) medians[dim] = median(means);

  FactorRegression out;
  out.factors = factors;
  Matrix features(0, factors.size());
  std::vector<double> successes, trials, row(factors.size());
  for (const auto& belief : scores) {
    if (belief.n == 0) continue;
    const auto it = records.find({belief.identity, belief.dimension});
    if (it == records.end()) continue;
    const BeliefStats& s = *it->second;
    bool complete = true;
    for (std::size_t k = 0; k < factors.size() && complete; ++k) {
      switch (factors[k]) {
        case BeliefFactor::Sd: row[k] = s.sd; break;
        case BeliefFactor::DistanceToMedian: row[k] = std::abs(s.mean - medians[s.dimension]); break;
        case BeliefFactor::LogFrequency:
          complete = s.log_frequency.has_value();
          row[k] = s.log_frequency.value_or(0.0);
          break;
        case BeliefFactor::Synsets:
          complete = s.synsets.has_value();
          row[k] = s.synsets.value_or(0.0);
          break;
      }
    }
    if (!complete) continue;
    features.append_row(row);
    successes.push_back(static_cast<double>(belief.n_correct));
    trials.push_back(static_cast<double>(belief.n));
  }
  out.beliefs = successes.size();
  if (out.beliefs < 20) {
    throw Error("belief factor regression needs at least 20 beliefs with covariates, found " +
                std::to_string(out.beliefs));
  }
  out.fit = fit_binomial({features, successes, trials}, fit);

  if (bootstrap.resamples > 0) {
    std::vector<double> point{out.fit.intercept};
    point.insert(point.end(), out.fit.coefficients.begin(), out.fit.coefficients.end());
    auto cis = bootstrap_percentile(
        out.beliefs, point,
        [&](std::span<const double> counts) {
          const FitResult r = fit_binomial({features, successes, trials, counts}, fit);
          std::vector<double> v{r.intercept};
          v.insert(v.end(), r.coefficients.begin(), r.coefficients.end());
          return v;
        },
        bootstrap.level, bootstrap.resamples, bootstrap.seed);
    out.intercept_ci = cis.front();
    out.coefficient_cis.assign(cis.begin() + 1, cis.end());
  }
  return out;
}

}  // namespace semdim
