#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "semdim/error.hpp"
#include "semdim/evaluation.hpp"
#include "semdim/stats.hpp"

using namespace semdim;

namespace {

MeasurementRun make_run(std::vector<std::string> ids, std::vector<double> scores, std::string dim = "d") {
  MeasurementRun run;
  run.key = {"e", std::move(dim), "survey-matched", "kozlowski"};
  run.identities = std::move(ids);
  run.scores = std::move(scores);
  return run;
}

std::vector<BeliefStats> make_survey(const std::vector<std::string>& ids, const std::vector<double>& means,
                                     double se, std::string dim = "d") {
  std::vector<BeliefStats> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    BeliefStats b;
    b.identity = ids[i];
    b.dimension = dim;
    b.mean = means[i];
    b.se = se;
    out.push_back(b);
  }
  return out;
}

const EmbeddingModel& model_for(Measure m, const EmbeddingModel& raw, const EmbeddingModel& unit) {
  return measure_spec(m).requires_normalized ? unit : raw;
}

// Exact-rank check: pairwise strict order agreement.
bool same_order(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if ((a[i] < a[j]) != (b[i] < b[j])) return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("planted axis is recovered by every measure") {
  auto p = gen::planted_axis(101);
  p.spec.high_pole = Pole::Left;
  const auto unit = unit_normalize(p.model);
  for (Measure m : all_measures()) {
    const auto run = run_measurement(model_for(m, p.model, unit), p.spec, m, p.identities);
    REQUIRE(run.scores.size() == p.identities.size());
    CAPTURE(to_string(m));
    CHECK(same_order(run.scores, p.positions));
  }
}

TEST_CASE("scores rise toward the high survey end") {
  auto p = gen::planted_axis(102);
  const auto unit = unit_normalize(p.model);
  // Default high_pole is Right, the planted low end.
  const auto run = run_measurement(unit, p.spec, Measure::Kozlowski, p.identities);
  CHECK(oracle::pearson(run.scores, p.positions) < -0.99);
  p.spec.high_pole = Pole::Left;
  const auto flipped = run_measurement(unit, p.spec, Measure::Kozlowski, p.identities);
  for (std::size_t i = 0; i < run.scores.size(); ++i) CHECK(flipped.scores[i] == -run.scores[i]);
}

TEST_CASE("out-of-vocabulary identities are skipped") {
  auto p = gen::planted_axis(103);
  auto ids = p.identities;
  ids.insert(ids.begin() + 3, "zookeeper");
  WarningLog log;
  const auto run = run_measurement(p.model, p.spec, Measure::Ethayarajh, ids, &log);
  CHECK(run.skipped == std::vector<std::string>{"zookeeper"});
  CHECK(run.identities == p.identities);
  CHECK_FALSE(run.score_of("zookeeper").has_value());
  CHECK(run.score_of("id0").has_value());
  CHECK(log.entries().back().code == "identity-oov");
  const auto again = run_measurement(p.model, p.spec, Measure::Ethayarajh, ids);
  CHECK(again.scores == run.scores);
}

TEST_CASE("dimension accuracy") {
  const std::vector<std::string> ids{"a", "b", "c", "d"};
  const auto survey = make_survey(ids, {0.1, 0.2, 0.3, 0.4}, 0.0);
  const auto perfect = dimension_accuracy(make_run(ids, {1, 2, 3, 4}), survey, "s");
  CHECK(*perfect.pearson_r == doctest::Approx(1.0));
  CHECK(perfect.n_identities == 4);
  CHECK(perfect.dataset == "s");
  const auto negated = dimension_accuracy(make_run(ids, {-1, -2, -3, -4}), survey);
  CHECK(*negated.pearson_r == doctest::Approx(-1.0));

  // Only shared identities count; order follows the run.
  const auto partial = dimension_accuracy(make_run({"d", "x", "b", "a"}, {4, 100, 2, 1}), survey);
  CHECK(partial.n_identities == 3);
  CHECK(*partial.pearson_r == doctest::Approx(oracle::pearson({4, 2, 1}, {0.4, 0.2, 0.1})));

  CHECK_THROWS_AS(dimension_accuracy(make_run({"a", "b"}, {1, 2}), survey), Error);
  CHECK_THROWS_AS(dimension_accuracy(make_run(ids, {1, 1, 1, 1}), survey), DegenerateError);
  CHECK(try_dimension_accuracy(make_run(ids, {1, 1, 1, 1}), survey).status == AccuracyStatus::Degenerate);
  CHECK(try_dimension_accuracy(make_run({"a"}, {1}), survey).status == AccuracyStatus::TooFew);
  // Records on another dimension are ignored.
  CHECK(try_dimension_accuracy(make_run(ids, {1, 2, 3, 4}, "other"), survey).status == AccuracyStatus::TooFew);
}

TEST_CASE("belief ranking example") {
  const std::vector<std::string> ids{"a", "b", "c"};
  const auto survey = make_survey(ids, {0.9, 0.5, 0.1}, 0.02);
  const auto run = make_run(ids, {3, 1, 2});
  const auto all = belief_ranking_scores(run, survey);
  REQUIRE(all.size() == 3);
  CHECK(*all[0].accuracy() == 1.0);
  CHECK(*all[1].accuracy() == 0.5);
  CHECK(*all[2].accuracy() == 0.5);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto one = belief_ranking_score(ids[i], run, survey);
    CHECK(one.n == all[i].n);
    CHECK(one.n_correct == all[i].n_correct);
  }
  const auto flipped = belief_ranking_scores(run, survey, true);
  CHECK(*flipped[0].accuracy() == 0.0);
  CHECK_THROWS_AS(belief_ranking_score("zz", run, survey), Error);
}

TEST_CASE("overlapping intervals and ties are not credited") {
  const std::vector<std::string> ids{"a", "b", "c"};
  // a and b overlap; c is clear of both.
  const auto survey = make_survey(ids, {0.50, 0.52, 0.9}, 0.05);
  const auto all = belief_ranking_scores(make_run(ids, {1, 2, 3}), survey);
  CHECK(all[0].n == 1);
  CHECK(all[1].n == 1);
  CHECK(all[2].n == 2);
  // Tied scores never count as correct.
  const auto tied = belief_ranking_scores(make_run(ids, {1, 1, 1}), survey);
  for (const auto& s : tied) CHECK(s.n_correct == 0);
  // No confident comparisons: accuracy undefined.
  const auto vague = belief_ranking_scores(make_run(ids, {1, 2, 3}), make_survey(ids, {0.5, 0.5, 0.5}, 0.1));
  for (const auto& s : vague) CHECK_FALSE(s.accuracy().has_value());
}

TEST_CASE("ranking agrees with the exhaustive oracle") {
  gen::Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = gen::ranking_instance(rng, 2 + trial % 30);
    const auto fast = belief_ranking_scores(inst.run, inst.survey);
    for (const auto& s : fast) {
      const auto i = static_cast<std::size_t>(
          std::find(inst.run.identities.begin(), inst.run.identities.end(), s.identity) -
          inst.run.identities.begin());
      const auto o = oracle::ranking(i, inst.means, inst.ses, inst.scores);
      CHECK(s.n == o.n);
      CHECK(s.n_correct == o.n_correct);
    }
  }
}

TEST_CASE("best settings") {
  auto acc = [](std::string emb, std::string dim, std::string measure, std::optional<double> r,
                AccuracyStatus status = AccuracyStatus::Ok) {
    DimensionAccuracy a;
    a.key = {std::move(emb), std::move(dim), "survey-matched", std::move(measure)};
    a.dataset = "s";
    a.pearson_r = r;
    a.status = status;
    return a;
  };
  const auto best = select_best_settings({acc("e1", "E", "garg", 0.5), acc("e2", "E", "kozlowski", 0.7),
                                          acc("e1", "P", "garg", 0.3), acc("e2", "P", "garg", 0.3),
                                          acc("e1", "P", "swinger", std::nullopt, AccuracyStatus::Degenerate)});
  REQUIRE(best.size() == 2);
  CHECK(best[0].key.dimension == "E");
  CHECK(best[0].key.embedding == "e2");
  CHECK(best[1].key.embedding == "e1");
  CHECK_THROWS_AS(select_best_settings({acc("e1", "A", "garg", std::nullopt, AccuracyStatus::Degenerate)}),
                  DegenerateError);
  // Negative correlations are still valid candidates.
  CHECK(*select_best_settings({acc("e1", "A", "garg", -0.4), acc("e2", "A", "garg", -0.2)})[0].pearson_r == -0.2);
}

TEST_CASE("salience recovers a single salient dimension") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unif;
  std::vector<BeliefStats> stats;
  const std::vector<std::string> dims{"Activity", "Evaluation", "Potency"};
  const int n_ids = 30;
  for (int i = 0; i < n_ids; ++i) {
    for (const auto& d : dims) stats.push_back({"id" + std::to_string(i), d, unif(rng)});
  }
  const auto x = build_belief_matrix(stats);
  const std::size_t e = 1;
  REQUIRE(x.dimensions[e] == "Evaluation");

  std::vector<LabelingObservation> obs;
  std::uniform_int_distribution<int> pick(0, n_ids - 1);
  for (int q = 0; q < 1500; ++q) {
    for (QuestionType type : {QuestionType::IsA, QuestionType::SeenWith}) {
      const int question = pick(rng);
      std::vector<int> answers;
      while (answers.size() < 4) {
        const int a = pick(rng);
        if (a != question && std::find(answers.begin(), answers.end(), a) == answers.end()) answers.push_back(a);
      }
      // Conditional logit choice on Evaluation distance only.
      std::vector<double> w;
      double total = 0.0;
      for (int a : answers) {
        const double dist = std::abs(x.values(question, e) - x.values(a, e));
        w.push_back(std::exp(-2.0 * dist));
        total += w.back();
      }
      double u = unif(rng) * total;
      std::size_t chosen = 0;
      while (chosen + 1 < w.size() && u > w[chosen]) u -= w[chosen++];
      for (std::size_t k = 0; k < answers.size(); ++k) {
        obs.push_back({type, x.identities[question], x.identities[answers[k]], k == chosen ? 1 : 0});
      }
    }
  }
  const auto result = fit_salience(obs, x, {}, {200, 0.95, 42});
  CHECK(result.isa_observations == 6000);
  for (const auto& d : result.dimensions) {
    REQUIRE(d.isa_ci.has_value());
    if (d.dimension == "Evaluation") {
      CHECK(d.isa < -0.5);
      CHECK(d.isa_ci->upper < 0.0);
      CHECK(d.importance == std::max(d.isa, d.seenwith));
    } else {
      CHECK(d.isa_ci->lower < 0.0);
      CHECK(d.isa_ci->upper > 0.0);
    }
  }

  SUBCASE("duplicating every observation keeps the estimates") {
    auto doubled = obs;
    doubled.insert(doubled.end(), obs.begin(), obs.end());
    const FitOptions unpenalized{0.0};
    const auto a = fit_salience(obs, x, unpenalized);
    const auto b = fit_salience(doubled, x, unpenalized);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      CHECK(b.dimensions[k].isa == doctest::Approx(a.dimensions[k].isa).epsilon(1e-8));
      CHECK(b.dimensions[k].seenwith == doctest::Approx(a.dimensions[k].seenwith).epsilon(1e-8));
    }
  }

  SUBCASE("matches the IRLS oracle") {
    oracle::Mat design;
    oracle::Vec y, ones;
    for (const auto& o : obs) {
      if (o.question_type != QuestionType::SeenWith) continue;
      const auto q = *x.identity_index(o.question_identity);
      const auto a = *x.identity_index(o.answer_identity);
      oracle::Vec row;
      for (std::size_t k = 0; k < dims.size(); ++k) row.push_back(std::abs(x.values(q, k) - x.values(a, k)));
      design.push_back(row);
      y.push_back(o.selected);
      ones.push_back(1.0);
    }
    const auto beta = oracle::logistic_irls(design, y, ones, ones, 1e-6);
    const auto fit = fit_salience(obs, x);
    CHECK(fit.seenwith_fit.intercept == doctest::Approx(beta[0]).epsilon(1e-6));
    for (std::size_t k = 0; k < dims.size(); ++k) {
      CHECK(fit.dimensions[k].seenwith == doctest::Approx(beta[k + 1]).epsilon(1e-6));
    }
  }

  SUBCASE("same seed, same intervals") {
    const auto again = fit_salience(obs, x, {}, {200, 0.95, 42});
    for (std::size_t k = 0; k < dims.size(); ++k) {
      CHECK(again.dimensions[k].importance_ci->lower == result.dimensions[k].importance_ci->lower);
      CHECK(again.dimensions[k].importance_ci->upper == result.dimensions[k].importance_ci->upper);
    }
  }

  SUBCASE("both question types are required") {
    std::vector<LabelingObservation> only_isa;
    for (const auto& o : obs) {
      if (o.question_type == QuestionType::IsA) only_isa.push_back(o);
    }
    CHECK_THROWS_AS(fit_salience(only_isa, x), Error);
    auto stray = obs;
    stray.push_back({QuestionType::IsA, "id0", "stranger", 0});
    CHECK_THROWS_AS(fit_salience(stray, x), Error);
  }
}

TEST_CASE("salience and accuracy correlation") {
  const std::map<std::string, double> imp{{"A", 0.1}, {"E", 2.0}, {"P", 0.7}, {"X", 5.0}};
  CHECK(salience_accuracy_correlation(imp, imp) == doctest::Approx(1.0));
  const std::map<std::string, double> acc{{"A", 0.4}, {"E", 0.9}, {"P", 0.2}, {"Q", 0.0}};
  CHECK(salience_accuracy_correlation(imp, acc) ==
        doctest::Approx(oracle::pearson({0.1, 2.0, 0.7}, {0.4, 0.9, 0.2})).epsilon(1e-12));
  CHECK_THROWS_AS(salience_accuracy_correlation(imp, {{"A", 1.0}, {"E", 2.0}}), Error);

  // A monotone layout where variance tracks importance.
  std::map<std::string, double> importance, variance;
  for (int k = 0; k < 8; ++k) {
    importance["d" + std::to_string(k)] = 0.2 * k;
    variance["d" + std::to_string(k)] = 0.01 + 0.004 * k + 0.0005 * (k % 2);
  }
  CHECK(salience_accuracy_correlation(importance, variance) > 0.9);
}

TEST_CASE("factor regression recovers a planted effect") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unif;
  std::vector<BeliefStats> survey;
  std::vector<BeliefRankingScore> scores;
  for (int i = 0; i < 2000; ++i) {
    BeliefStats b;
    b.identity = "id" + std::to_string(i);
    b.dimension = "E";
    b.mean = unif(rng);
    b.sd = 0.1;
    survey.push_back(b);
  }
  const double med = median([&] {
    std::vector<double> m;
    for (const auto& b : survey) m.push_back(b.mean);
    return m;
  }());
  for (const auto& b : survey) {
    const double p = 1.0 / (1.0 + std::exp(-(-0.5 + 4.0 * std::abs(b.mean - med))));
    std::binomial_distribution<std::size_t> draw(20, p);
    scores.push_back({b.identity, "E", 20, draw(rng)});
  }
  const auto fr = belief_factor_regression(scores, survey, {BeliefFactor::DistanceToMedian});
  CHECK(fr.beliefs == 2000);
  CHECK(fr.fit.coefficients[0] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(fr.fit.intercept == doctest::Approx(-0.5).epsilon(0.3));

  SUBCASE("beliefs without comparisons are left out") {
    auto with_empty = scores;
    for (int i = 0; i < 50; ++i) with_empty[i].n = with_empty[i].n_correct = 0;
    CHECK(belief_factor_regression(with_empty, survey, {BeliefFactor::DistanceToMedian}).beliefs == 1950);
  }
  SUBCASE("missing covariates drop the belief") {
    auto partial = survey;
    for (int i = 0; i < 1000; ++i) partial[i].log_frequency = 1.0 + i % 7;
    const auto r = belief_factor_regression(scores, partial, {BeliefFactor::LogFrequency, BeliefFactor::Sd});
    CHECK(r.beliefs == 1000);
  }
  SUBCASE("too few beliefs") {
    std::vector<BeliefRankingScore> few(scores.begin(), scores.begin() + 19);
    CHECK_THROWS_AS(belief_factor_regression(few, survey, {BeliefFactor::Sd}), Error);
  }
  SUBCASE("bootstrap intervals cover the point estimate") {
    const auto boot = belief_factor_regression(scores, survey, {BeliefFactor::DistanceToMedian}, {},
                                               {100, 0.9, 5});
    REQUIRE(boot.coefficient_cis.size() == 1);
    CHECK(boot.coefficient_cis[0].lower < boot.fit.coefficients[0]);
    CHECK(boot.coefficient_cis[0].upper > boot.fit.coefficients[0]);
    CHECK(boot.intercept_ci.has_value());
  }
}

TEST_CASE("factor regression with every belief correct") {
  std::vector<BeliefStats> survey;
  std::vector<BeliefRankingScore> scores;
  for (int i = 0; i < 40; ++i) {
    BeliefStats b;
    b.identity = "id" + std::to_string(i);
    b.dimension = "E";
    b.mean = i / 40.0;
    b.sd = 0.05 + 0.01 * (i % 5);
    survey.push_back(b);
    scores.push_back({b.identity, "E", 10, 10});
  }
  const auto fr = belief_factor_regression(scores, survey, {BeliefFactor::Sd, BeliefFactor::DistanceToMedian},
                                           FitOptions{1e-2});
  CHECK(fr.fit.converged);
  CHECK(std::isfinite(fr.fit.intercept));
  CHECK(fr.fit.intercept > 0.0);
}

TEST_CASE("grand mean accuracy pools comparisons") {
  // Sum of N_c over sum of N equals the N-weighted mean of per-belief accuracies.
  gen::Rng rng(4);
  const auto inst = gen::ranking_instance(rng, 40);
  const auto scores = belief_ranking_scores(inst.run, inst.survey);
  double nc = 0, n = 0, weighted = 0;
  for (const auto& s : scores) {
    nc += s.n_correct;
    n += s.n;
    if (s.accuracy()) weighted += *s.accuracy() * s.n;
  }
  REQUIRE(n > 0);
  CHECK(nc / n == doctest::Approx(weighted / n).epsilon(1e-12));
}

TEST_CASE("sign alignment flips every ordering") {
  gen::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = gen::ranking_instance(rng, 25);
    const auto flipped = belief_ranking_scores(inst.run, inst.survey, true);
    for (auto& s : inst.run.scores) s = -s;
    const auto negated = belief_ranking_scores(inst.run, inst.survey);
    for (std::size_t i = 0; i < flipped.size(); ++i) {
      CHECK(flipped[i].n == negated[i].n);
      CHECK(flipped[i].n_correct == negated[i].n_correct);
    }
  }
}

}  // TEST_SUITE
