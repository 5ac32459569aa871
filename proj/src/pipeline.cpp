#include "semdim/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>
#include <json.hpp>

#include "semdim/csv.hpp"
#include "semdim/dimension_io.hpp"
#include "semdim/error.hpp"
#include "semdim/evaluation.hpp"
#include "semdim/stats.hpp"

namespace semdim {

std::string_view tool_version() { return SEMDIM_VERSION; }

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) { return format_double(v, 17); }

std::string file_safe(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

// Tidy table whose every row starts with the run metadata.
class TidyCsv {
 public:
  TidyCsv(const RunConfig& config, const std::vector<std::string>& columns)
      : prefix_{std::string(tool_version()), config.hash(), std::to_string(config.seed)} {
    std::vector<std::string> header{"tool_version", "config_hash", "seed"};
    header.insert(header.end(), columns.begin(), columns.end());
    text_ = csv_join(header) + "\n";
  }
  void add(const std::vector<std::string>& fields) {
    std::vector<std::string> row = prefix_;
    row.insert(row.end(), fields.begin(), fields.end());
    text_ += csv_join(row) + "\n";
  }
  const std::string& str() const { return text_; }

 private:
  std::vector<std::string> prefix_;
  std::string text_;
};

struct Cell {
  RunKey key;
  std::string label;
  std::size_t model = 0;
  DimensionSpec spec;
  Measure measure = Measure::Ethayarajh;
  std::optional<MeasurementRun> run;
  std::string status = "ok";  // ok | degenerate | error
  std::string error;
  WarningLog warnings;
};

struct LoadedSurvey {
  SurveySource source;
  std::vector<BeliefStats> stats;
  bool se_missing = false;
};

struct Session {
  explicit Session(const RunConfig& c) : config(c) {}

  const RunConfig& config;
  WarningLog warnings;         // loading and setup
  WarningLog late_warnings;    // analysis stages, after the grid
  std::vector<EmbeddingModel> raw;
  std::vector<std::optional<EmbeddingModel>> unit;
  std::vector<LoadedSurvey> surveys;
  std::vector<std::string> identities;
  std::vector<Cell> cells;
  bool grid_ready = false;
  CommandResult result;

  void write(const std::string& name, std::string_view contents) {
    const fs::path path = config.output_dir / name;
    write_file(path, contents);
    result.written.push_back(path);
  }

  json header() const {
    return {{"tool_version", std::string(tool_version())},
            {"config_hash", config.hash()},
            {"seed", config.seed}};
  }

  const LoadedSurvey* survey(const std::string& name) const {
    for (const auto& s : surveys) {
      if (s.source.name == name) return &s;
    }
    return nullptr;
  }
};

void load_surveys(Session& s) {
  for (const auto& src : s.config.surveys) {
    LoadedSurvey loaded{src, load_survey(src.path, src.schema, src.range)};
    for (const auto& b : loaded.stats) loaded.se_missing = loaded.se_missing || b.se_missing;
    if (loaded.se_missing) {
      s.warnings.add("se-missing", "survey '" + src.name +
                                       "' lacks standard errors for some beliefs; se = 0 used in ranking gates",
                     src.path.string());
    }
    s.surveys.push_back(std::move(loaded));
  }
}

void resolve_identities(Session& s) {
  if (!s.config.identities.empty()) {
    std::set<std::string> seen;
    for (const auto& id : s.config.identities) {
      if (seen.insert(id).second) s.identities.push_back(id);
    }
    return;
  }
  std::set<std::string> all;
  for (const auto& survey : s.surveys) {
    for (const auto& b : survey.stats) all.insert(b.identity);
  }
  s.identities.assign(all.begin(), all.end());
}

void run_cells(std::vector<Cell>& cells, const Session& s, std::size_t jobs) {
  auto work = [&](Cell& cell) {
    const bool unit = measure_spec(cell.measure).requires_normalized;
    const EmbeddingModel& model = unit ? *s.unit[cell.model] : s.raw[cell.model];
    try {
      cell.run = run_measurement(model, cell.spec, cell.measure, s.identities, &cell.warnings);
    } catch (const DegenerateError& e) {
      cell.status = "degenerate";
      cell.error = e.what();
      cell.warnings.add("degenerate-direction", e.what(), cell.key.str());
    } catch (const std::exception& e) {
      cell.status = "error";
      cell.error = e.what();
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, cells.size()));
  if (jobs == 1) {
    for (auto& cell : cells) work(cell);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < cells.size(); i = next++) work(cells[i]);
    });
  }
  for (auto& th : pool) th.join();
}

void build_grid(Session& s) {
  if (s.grid_ready) return;
  const RunConfig& c = s.config;
  const std::vector<DimensionSpec> specs = load_dimension_specs(c.dimensions);

  bool need_unit = false;
  for (Measure m : c.measures) need_unit = need_unit || measure_spec(m).requires_normalized;
  for (const auto& src : c.embeddings) {
    WarningLog log;
    s.raw.push_back(load_embeddings(src.path, src.format, &log, src.name));
    for (const auto& w : log.entries()) s.warnings.add(w.code, w.message, w.context.empty() ? src.name : w.context);
    if (need_unit) {
      try {
        s.unit.emplace_back(unit_normalize(s.raw.back()));
      } catch (const DegenerateError& e) {
        throw Error("embedding '" + src.name + "': " + e.what());
      }
    } else {
      s.unit.emplace_back(std::nullopt);
    }
  }

  std::set<RunKey> keys;
  for (std::size_t e = 0; e < c.embeddings.size(); ++e) {
    for (const auto& spec : specs) {
      for (Measure m : c.measures) {
        const std::vector<DimensionSpec> binary =
            spec.is_multiclass() ? resolve_multiclass(spec, m) : std::vector<DimensionSpec>{spec};
        for (const auto& b : binary) {
          Cell cell;
          cell.key = {c.embeddings[e].name, b.name, std::string(to_string(b.source)), std::string(to_string(m))};
          cell.label = b.label.empty() ? b.name : b.label;
          cell.model = e;
          cell.spec = b;
          cell.measure = m;
          if (!keys.insert(cell.key).second) {
            throw ConfigError("dimensions", "two dimension specs produce the run key " + cell.key.str() +
                                                "; give them distinct names or wordset sources");
          }
          s.cells.push_back(std::move(cell));
        }
      }
    }
  }
  std::sort(s.cells.begin(), s.cells.end(), [](const Cell& a, const Cell& b) { return a.key < b.key; });
  run_cells(s.cells, s, c.jobs);
  for (const auto& cell : s.cells) s.result.had_errors = s.result.had_errors || cell.status == "error";
  s.grid_ready = true;
}

json run_json(const Cell& cell) {
  json j = {{"embedding", cell.key.embedding}, {"dimension", cell.key.dimension}, {"label", cell.label},
            {"wordset", cell.key.wordset},     {"measure", cell.key.measure},     {"status", cell.status}};
  if (!cell.error.empty()) j["error"] = cell.error;
  if (cell.run) {
    j["scored"] = cell.run->identities.size();
    j["skipped"] = cell.run->skipped;
    j["unresolved_pole_words"] = cell.run->unresolved_pole_words;
  }
  return j;
}

void write_manifest(Session& s) {
  json runs = json::array();
  for (const auto& cell : s.cells) runs.push_back(run_json(cell));
  json doc = s.header();
  doc["identities_requested"] = s.identities.size();
  doc["runs"] = runs;
  s.write("skipped_manifest.json", doc.dump(2) + "\n");
}

void write_warnings(Session& s) {
  WarningLog all = s.warnings;
  for (const auto& cell : s.cells) {
    all.merge(cell.warnings);
    if (cell.status == "error") all.add("run-error", cell.error, cell.key.str());
  }
  all.merge(s.late_warnings);
  json list = json::array();
  for (const auto& w : all.entries()) {
    list.push_back({{"code", w.code}, {"message", w.message}, {"context", w.context}});
  }
  json doc = s.header();
  doc["warnings"] = list;
  s.write("warnings.json", doc.dump(2) + "\n");
  s.result.warnings = all.size();
}

void stage_measure(Session& s) {
  build_grid(s);
  for (std::size_t e = 0; e < s.config.embeddings.size(); ++e) {
    const std::string& name = s.config.embeddings[e].name;
    TidyCsv table(s.config, {"embedding", "dimension", "label", "wordset", "measure", "identity", "score"});
    for (const auto& cell : s.cells) {
      if (cell.key.embedding != name || !cell.run) continue;
      const MeasurementRun& run = *cell.run;
      for (std::size_t i = 0; i < run.identities.size(); ++i) {
        table.add({name, cell.key.dimension, cell.label, cell.key.wordset, cell.key.measure, run.identities[i],
                   num(run.scores[i])});
      }
    }
    s.write("scores_" + file_safe(name) + ".csv", table.str());
  }
  write_manifest(s);
}

// Mean Pearson r per dimension over every usable run on one dataset.
using AccuracyByDimension = std::map<std::string, double>;

AccuracyByDimension stage_evaluate(Session& s) {
  build_grid(s);
  const RunConfig& c = s.config;

  std::vector<DimensionAccuracy> accuracies;
  std::map<std::pair<std::string, std::string>, std::vector<BeliefStats>> slices;  // (dataset, dimension)
  for (const auto& survey : s.surveys) {
    for (const auto& dim : dimensions_of(survey.stats)) {
      slices[{survey.source.name, dim}] = on_dimension(survey.stats, dim);
    }
  }
  std::map<RunKey, const Cell*> by_key;
  for (const auto& cell : s.cells) by_key[cell.key] = &cell;

  TidyCsv acc_table(c, {"dataset", "embedding", "dimension", "label", "wordset", "measure", "metric", "value",
                        "status", "detail"});
  std::set<std::pair<std::string, std::string>> measured;
  for (const auto& survey : s.surveys) {
    const std::string& dataset = survey.source.name;
    for (const auto& cell : s.cells) {
      const auto slice = slices.find({dataset, cell.key.dimension});
      if (slice == slices.end()) continue;
      measured.insert(slice->first);
      DimensionAccuracy acc;
      if (cell.run) {
        acc = try_dimension_accuracy(*cell.run, slice->second, dataset);
      } else {
        acc.key = cell.key;
        acc.dataset = dataset;
        acc.status = AccuracyStatus::Degenerate;
        acc.detail = cell.error;
      }
      const std::string status(to_string(acc.status));
      acc_table.add({dataset, cell.key.embedding, cell.key.dimension, cell.label, cell.key.wordset, cell.key.measure,
                     "pearson_r", acc.pearson_r ? num(*acc.pearson_r) : "", status, acc.detail});
      acc_table.add({dataset, cell.key.embedding, cell.key.dimension, cell.label, cell.key.wordset, cell.key.measure,
                     "n_identities", std::to_string(acc.n_identities), status, acc.detail});
      accuracies.push_back(std::move(acc));
    }
  }
  for (const auto& [key, stats] : slices) {
    if (!measured.count(key)) {
      s.late_warnings.add("dimension-unmeasured",
                          "survey dimension '" + key.second + "' has no matching dimension spec", key.first);
    }
  }
  s.write("dimension_accuracy.csv", acc_table.str());

  // Best settings per (dimension, dataset); a group without any usable run is
  // reported and left out of ranking.
  std::map<std::pair<std::string, std::string>, std::vector<DimensionAccuracy>> groups;
  for (const auto& a : accuracies) groups[{a.dataset, a.key.dimension}].push_back(a);
  TidyCsv best_table(c, {"dataset", "dimension", "embedding", "label", "wordset", "measure", "pearson_r",
                         "n_identities", "status", "detail"});
  std::vector<DimensionAccuracy> best;
  std::map<std::string, std::vector<std::string>> degenerate_dims;
  for (const auto& [group, members] : groups) {
    try {
      const DimensionAccuracy chosen = select_best_settings(members).front();
      const Cell& cell = *by_key.at(chosen.key);
      best_table.add({group.first, group.second, chosen.key.embedding, cell.label, chosen.key.wordset,
                      chosen.key.measure, num(*chosen.pearson_r), std::to_string(chosen.n_identities), "ok", ""});
      best.push_back(chosen);
    } catch (const DegenerateError& e) {
      best_table.add({group.first, group.second, "", "", "", "", "", "", "degenerate", e.what()});
      degenerate_dims[group.first].push_back(group.second);
      s.late_warnings.add("dimension-degenerate", e.what(), group.first);
    }
  }
  s.write("best_settings.csv", best_table.str());

  // Belief-level ranking under the best setting of each dimension.
  TidyCsv rank_table(c, {"dataset", "dimension", "identity", "embedding", "wordset", "measure", "sign_flipped",
                         "se_missing", "metric", "value"});
  std::map<std::string, std::vector<BeliefRankingScore>> ranking_by_dataset;
  for (const auto& chosen : best) {
    const Cell& cell = *by_key.at(chosen.key);
    const auto& slice = slices.at({chosen.dataset, chosen.key.dimension});
    const bool flip = c.sign_align && *chosen.pearson_r < 0.0;
    const bool se_missing = s.survey(chosen.dataset)->se_missing;
    for (auto& score : belief_ranking_scores(*cell.run, slice, flip)) {
      const std::vector<std::string> lead{chosen.dataset, chosen.key.dimension, score.identity,
                                          chosen.key.embedding, chosen.key.wordset, chosen.key.measure,
                                          flip ? "true" : "false", se_missing ? "true" : "false"};
      auto row = [&](const char* metric, const std::string& value) {
        std::vector<std::string> r = lead;
        r.push_back(metric);
        r.push_back(value);
        rank_table.add(r);
      };
      row("n", std::to_string(score.n));
      row("n_correct", std::to_string(score.n_correct));
      if (const auto a = score.accuracy()) row("accuracy", num(*a));
      ranking_by_dataset[chosen.dataset].push_back(std::move(score));
    }
  }
  s.write("belief_ranking.csv", rank_table.str());

  // Per-dataset summaries, factor regressions, and the per-dimension table.
  TidyCsv factor_table(c, {"dataset", "term", "estimate", "lower", "upper", "level", "resamples", "beliefs",
                           "converged"});
  TidyCsv summary_table(c, {"dataset", "dimension", "metric", "value"});
  json datasets = json::object();
  AccuracyByDimension salience_accuracy;
  for (const auto& survey : s.surveys) {
    const std::string& dataset = survey.source.name;
    json d;
    d["schema"] = std::string(to_string(survey.source.schema));
    d["se_missing"] = survey.se_missing;

    std::map<std::string, std::vector<double>> rs;
    std::size_t ok_runs = 0;
    for (const auto& a : accuracies) {
      if (a.dataset != dataset) continue;
      if (a.status == AccuracyStatus::Ok) {
        rs[a.key.dimension].push_back(*a.pearson_r);
        ++ok_runs;
      }
    }
    d["runs"] = ok_runs;
    d["degenerate_dimensions"] = degenerate_dims[dataset];

    for (const auto& dim : dimensions_of(survey.stats)) {
      if (const auto rows = on_dimension(survey.stats, dim); rows.size() >= 3) {
        const DimensionSummary summary = dimension_summary(survey.stats, dim);
        summary_table.add({dataset, dim, "variance", num(summary.variance)});
        summary_table.add({dataset, dim, "median", num(summary.median)});
      }
      summary_table.add({dataset, dim, "n_identities", std::to_string(on_dimension(survey.stats, dim).size())});
      if (const auto it = rs.find(dim); it != rs.end()) {
        const double m = mean(it->second);
        summary_table.add({dataset, dim, "mean_pearson_r", num(m)});
        if (dataset == c.salience_dataset) salience_accuracy[dim] = m;
      }
    }
    std::vector<double> all_r;
    for (const auto& [dim, values] : rs) all_r.insert(all_r.end(), values.begin(), values.end());
    d["mean_pearson_r"] = all_r.empty() ? json(nullptr) : json(mean(all_r));

    const auto& ranking = ranking_by_dataset[dataset];
    std::size_t total_n = 0, total_correct = 0, with_pairs = 0;
    double accuracy_sum = 0.0;
    for (const auto& r : ranking) {
      total_n += r.n;
      total_correct += r.n_correct;
      if (const auto a = r.accuracy()) {
        accuracy_sum += *a;
        ++with_pairs;
      }
    }
    d["beliefs"] = ranking.size();
    d["beliefs_with_pairs"] = with_pairs;
    d["gated_pairs"] = total_n;
    d["correct_pairs"] = total_correct;
    d["grand_mean_accuracy"] = total_n ? json(static_cast<double>(total_correct) / total_n) : json(nullptr);
    d["mean_belief_accuracy"] = with_pairs ? json(accuracy_sum / with_pairs) : json(nullptr);

    std::vector<BeliefFactor> factors;
    if (!survey.se_missing) factors.push_back(BeliefFactor::Sd);
    factors.push_back(BeliefFactor::DistanceToMedian);
    bool has_freq = false, has_syn = false;
    for (const auto& b : survey.stats) {
      has_freq = has_freq || b.log_frequency.has_value();
      has_syn = has_syn || b.synsets.has_value();
    }
    if (has_freq) factors.push_back(BeliefFactor::LogFrequency);
    if (has_syn) factors.push_back(BeliefFactor::Synsets);
    try {
      const FactorRegression reg = belief_factor_regression(
          ranking, survey.stats, factors, FitOptions{.ridge = c.ridge},
          BootstrapOptions{c.bootstrap_resamples, c.bootstrap_level, derive_seed(c.seed, "factors:" + dataset)});
      auto add = [&](const std::string& term, double estimate, const std::optional<BootstrapCI>& ci) {
        factor_table.add({dataset, term, num(estimate), ci ? num(ci->lower) : "", ci ? num(ci->upper) : "",
                          format_double(c.bootstrap_level, 6), std::to_string(c.bootstrap_resamples),
                          std::to_string(reg.beliefs), reg.fit.converged ? "true" : "false"});
      };
      add("intercept", reg.fit.intercept, reg.intercept_ci);
      json terms = json::object();
      terms["intercept"] = reg.fit.intercept;
      for (std::size_t k = 0; k < factors.size(); ++k) {
        std::optional<BootstrapCI> ci;
        if (!reg.coefficient_cis.empty()) ci = reg.coefficient_cis[k];
        add(std::string(to_string(factors[k])), reg.fit.coefficients[k], ci);
        terms[std::string(to_string(factors[k]))] = reg.fit.coefficients[k];
      }
      d["factor_regression"] = {{"beliefs", reg.beliefs}, {"converged", reg.fit.converged}, {"terms", terms}};
      if (!reg.fit.converged) {
        s.late_warnings.add("factor-regression-unconverged", "binomial fit did not converge", dataset);
      }
    } catch (const DegenerateError& e) {
      d["factor_regression"] = {{"skipped", e.what()}};
      s.late_warnings.add("factor-regression-skipped", e.what(), dataset);
    } catch (const Error& e) {
      d["factor_regression"] = {{"skipped", e.what()}};
      s.late_warnings.add("factor-regression-skipped", e.what(), dataset);
    }
    datasets[dataset] = d;
  }
  s.write("belief_factors.csv", factor_table.str());
  s.write("dimension_summary.csv", summary_table.str());

  json skipped = json::array();
  for (const auto& cell : s.cells) {
    if (cell.run && cell.run->skipped.empty() && cell.run->unresolved_pole_words.empty()) continue;
    skipped.push_back(run_json(cell));
  }
  json doc = s.header();
  doc["sign_align"] = c.sign_align;
  doc["datasets"] = datasets;
  doc["skipped"] = skipped;
  s.write("evaluation_summary.json", doc.dump(2) + "\n");
  return salience_accuracy;
}

AccuracyByDimension read_accuracy_table(Session& s, const fs::path& path) {
  const CsvTable table = CsvTable::read(path);
  const std::size_t c_dataset = table.require_column("dataset");
  const std::size_t c_dimension = table.require_column("dimension");
  const std::size_t c_metric = table.require_column("metric");
  const std::size_t c_value = table.require_column("value");
  const std::size_t c_status = table.require_column("status");
  std::map<std::string, std::vector<double>> rs;
  for (const auto& row : table.rows()) {
    if (row.fields[c_dataset] != s.config.salience_dataset || row.fields[c_metric] != "pearson_r" ||
        row.fields[c_status] != "ok") {
      continue;
    }
    const auto v = parse_double(row.fields[c_value]);
    if (!v) throw ParseError(path.string(), row.line, "pearson_r value is not a number");
    rs[row.fields[c_dimension]].push_back(*v);
  }
  AccuracyByDimension out;
  for (const auto& [dim, values] : rs) out[dim] = mean(values);
  if (out.empty()) {
    s.late_warnings.add("accuracy-table-empty",
                        "no usable pearson_r rows for dataset '" + s.config.salience_dataset + "'", path.string());
  }
  return out;
}

void stage_salience(Session& s, const std::optional<AccuracyByDimension>& accuracy, const std::string& accuracy_source) {
  const RunConfig& c = s.config;
  const LoadedSurvey* survey = s.survey(c.salience_dataset);
  const BeliefMatrix x = build_belief_matrix(survey->stats, &s.late_warnings);

  std::vector<LabelingObservation> observations;
  std::size_t dropped = 0;
  for (auto& obs : load_labeling(*c.labeling)) {
    if (x.identity_index(obs.question_identity) && x.identity_index(obs.answer_identity)) {
      observations.push_back(std::move(obs));
    } else {
      ++dropped;
    }
  }
  if (dropped) {
    s.late_warnings.add("labeling-identity-missing",
                        std::to_string(dropped) + " labeling observations name identities outside the belief matrix",
                        c.labeling->string());
  }

  const SalienceResult result =
      fit_salience(observations, x, FitOptions{.ridge = c.ridge},
                   BootstrapOptions{c.bootstrap_resamples, c.bootstrap_level, derive_seed(c.seed, "salience")});

  TidyCsv table(c, {"dimension", "term", "estimate", "lower", "upper", "level", "resamples"});
  auto add = [&](const std::string& dim, const char* term, double estimate, const std::optional<BootstrapCI>& ci) {
    table.add({dim, term, num(estimate), ci ? num(ci->lower) : "", ci ? num(ci->upper) : "", format_double(c.bootstrap_level, 6),
               std::to_string(c.bootstrap_resamples)});
  };
  std::map<std::string, double> importance, variance;
  for (const auto& d : result.dimensions) {
    add(d.dimension, "isa", d.isa, d.isa_ci);
    add(d.dimension, "seenwith", d.seenwith, d.seenwith_ci);
    add(d.dimension, "importance", d.importance, d.importance_ci);
    importance[d.dimension] = d.importance;
    variance[d.dimension] = dimension_summary(survey->stats, d.dimension).variance;
  }
  s.write("salience.csv", table.str());

  std::vector<SalienceDimension> ranked = result.dimensions;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.importance > b.importance; });
  json order = json::array();
  for (const auto& d : ranked) order.push_back(d.dimension);

  auto fit_json = [](const FitResult& f, std::size_t n) {
    return json{{"observations", n},
                {"converged", f.converged},
                {"iterations", f.iterations},
                {"intercept", f.intercept},
                {"log_likelihood", f.log_likelihood}};
  };
  json correlations = json::object();
  json notes = json::object();
  auto correlate = [&](const char* name, const std::map<std::string, double>& a,
                       const std::map<std::string, double>& b) {
    try {
      correlations[name] = salience_accuracy_correlation(a, b);
    } catch (const Error& e) {
      correlations[name] = nullptr;
      notes[name] = e.what();
    }
  };
  correlate("importance_vs_variance", importance, variance);
  if (accuracy) {
    correlate("importance_vs_accuracy", importance, *accuracy);
    correlate("variance_vs_accuracy", variance, *accuracy);
  } else {
    correlations["importance_vs_accuracy"] = nullptr;
    correlations["variance_vs_accuracy"] = nullptr;
    notes["importance_vs_accuracy"] = "no evaluation report supplied (set accuracy_table or use 'all')";
  }

  json doc = s.header();
  doc["dataset"] = c.salience_dataset;
  doc["identities"] = x.identities.size();
  doc["isa"] = fit_json(result.isa_fit, result.isa_observations);
  doc["seenwith"] = fit_json(result.seenwith_fit, result.seenwith_observations);
  doc["importance_order"] = order;
  doc["accuracy_source"] = accuracy_source.empty() ? json(nullptr) : json(accuracy_source);
  doc["correlations"] = correlations;
  doc["notes"] = notes;
  s.write("salience_summary.json", doc.dump(2) + "\n");
}

void prepare(Session& s, bool need_grid) {
  load_surveys(s);
  if (need_grid) resolve_identities(s);
}

}  // namespace

CommandResult cmd_measure(const RunConfig& config) {
  validate_paths(config);
  Session s(config);
  prepare(s, true);
  stage_measure(s);
  write_warnings(s);
  return s.result;
}

CommandResult cmd_evaluate(const RunConfig& config) {
  validate_paths(config, false, true);
  Session s(config);
  prepare(s, true);
  build_grid(s);
  write_manifest(s);
  stage_evaluate(s);
  write_warnings(s);
  return s.result;
}

CommandResult cmd_salience(const RunConfig& config) {
  validate_paths(config, true, true);
  Session s(config);
  prepare(s, false);
  std::optional<AccuracyByDimension> accuracy;
  std::string source;
  if (config.accuracy_table) {
    accuracy = read_accuracy_table(s, *config.accuracy_table);
    source = config.accuracy_table->filename().string();
  }
  stage_salience(s, accuracy, source);
  write_warnings(s);
  return s.result;
}

CommandResult cmd_all(const RunConfig& config) {
  validate_paths(config, config.labeling.has_value(), true);
  Session s(config);
  prepare(s, true);
  stage_measure(s);
  const AccuracyByDimension accuracy = stage_evaluate(s);
  if (config.labeling) stage_salience(s, accuracy, "in-process evaluation");
  write_warnings(s);
  return s.result;
}

}  // namespace semdim
