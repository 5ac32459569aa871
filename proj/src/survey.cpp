#include "semdim/survey.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "semdim/csv.hpp"
#include "semdim/error.hpp"
#include "semdim/stats.hpp"

namespace semdim {

namespace {

constexpr double kRangeSlack = 1e-9;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double required_number(const CsvTable& table, const CsvRow& row, std::size_t col, const char* name) {
  const auto v = parse_double(row.fields[col]);
  if (!v || !std::isfinite(*v)) {
    throw ParseError(table.source(), row.line,
                     std::string("column '") + name + "': expected a number, got '" + row.fields[col] + "'");
  }
  return *v;
}

std::optional<double> optional_number(const CsvTable& table, const CsvRow& row,
                                      std::optional<std::size_t> col, const char* name) {
  if (!col || row.fields[*col].empty() || lower(row.fields[*col]) == "na") return std::nullopt;
  return required_number(table, row, *col, name);
}

}  // namespace

SurveySchema parse_survey_schema(std::string_view name) {
  if (name == "this-paper") return SurveySchema::ThisPaper;
  if (name == "bolukbasi") return SurveySchema::Bolukbasi;
  if (name == "personality-traits") return SurveySchema::PersonalityTraits;
  if (name == "epa-dictionary") return SurveySchema::EpaDictionary;
  throw Error("unknown survey schema '" + std::string(name) +
              "' (expected this-paper, bolukbasi, personality-traits, epa-dictionary)");
}

std::string_view to_string(SurveySchema schema) {
  switch (schema) {
    case SurveySchema::ThisPaper: return "this-paper";
    case SurveySchema::Bolukbasi: return "bolukbasi";
    case SurveySchema::PersonalityTraits: return "personality-traits";
    case SurveySchema::EpaDictionary: return "epa-dictionary";
  }
  return "this-paper";
}

NativeRange default_range(SurveySchema schema) {
  switch (schema) {
    case SurveySchema::ThisPaper: return {0.0, 1.0};
    case SurveySchema::Bolukbasi: return {-1.0, 1.0};
    case SurveySchema::PersonalityTraits: return {1.0, 5.0};
    case SurveySchema::EpaDictionary: return {-4.3, 4.3};
  }
  return {0.0, 1.0};
}

std::vector<BeliefStats> parse_survey(std::string_view csv_text, SurveySchema schema,
                                      std::optional<NativeRange> range, const std::string& source) {
  const NativeRange r = range.value_or(default_range(schema));
  if (!(r.high > r.low)) throw Error(source + ": native range must have high > low");
  const double width = r.high - r.low;

  const CsvTable table = CsvTable::parse(csv_text, source);
  const bool fixed_dimension = schema == SurveySchema::Bolukbasi;
  const std::size_t c_identity = table.require_column("identity");
  const std::size_t c_mean = table.require_column("mean");
  const auto c_dimension = fixed_dimension ? table.column("dimension")
                                           : std::optional(table.require_column("dimension"));
  const auto c_sd = fixed_dimension ? table.column("sd") : std::optional(table.require_column("sd"));
  const auto c_n = fixed_dimension ? table.column("n") : std::optional(table.require_column("n"));
  const auto c_freq = table.column("log_frequency");
  const auto c_syn = table.column("synsets");

  std::vector<BeliefStats> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const CsvRow& row : table.rows()) {
    BeliefStats s;
    s.identity = row.fields[c_identity];
    if (s.identity.empty()) throw ParseError(source, row.line, "empty identity");
    s.dimension = c_dimension ? row.fields[*c_dimension] : std::string("gender");
    if (s.dimension.empty()) throw ParseError(source, row.line, "empty dimension");

    const double native_mean = required_number(table, row, c_mean, "mean");
    if (native_mean < r.low - kRangeSlack || native_mean > r.high + kRangeSlack) {
      throw ParseError(source, row.line,
                       "mean " + format_double(native_mean, 6) + " outside native range [" +
                           format_double(r.low, 6) + ", " + format_double(r.high, 6) + "]");
    }
    s.mean = std::clamp((native_mean - r.low) / width, 0.0, 1.0);

    const auto native_sd = optional_number(table, row, c_sd, "sd");
    const auto n = optional_number(table, row, c_n, "n");
    if (native_sd && *native_sd < 0.0) throw ParseError(source, row.line, "negative sd");
    if (n && (*n < 0.0 || std::floor(*n) != *n)) {
      throw ParseError(source, row.line, "n must be a nonnegative integer");
    }
    if (!native_sd || !n) {
      if (!fixed_dimension) throw ParseError(source, row.line, "missing sd or n");
      s.se_missing = true;
      s.sd = native_sd ? *native_sd / width : 0.0;
      s.n = n ? static_cast<std::size_t>(*n) : 0;
      s.se = 0.0;
    } else {
      s.sd = *native_sd / width;
      s.n = static_cast<std::size_t>(*n);
      if (s.n >= 1) {
        s.se = s.sd / std::sqrt(static_cast<double>(s.n));
      } else {
        s.se = 0.0;
        s.se_missing = true;
      }
    }
    s.log_frequency = optional_number(table, row, c_freq, "log_frequency");
    s.synsets = optional_number(table, row, c_syn, "synsets");

    if (!seen.emplace(s.identity, s.dimension).second) {
      throw ParseError(source, row.line,
                       "duplicate record for identity '" + s.identity + "' on '" + s.dimension + "'");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<BeliefStats> load_survey(const std::filesystem::path& path, SurveySchema schema,
                                     std::optional<NativeRange> range) {
  return parse_survey(read_file(path), schema, range, path.string());
}

std::string format_survey(const std::vector<BeliefStats>& stats, SurveySchema schema,
                          std::optional<NativeRange> range) {
  const NativeRange r = range.value_or(default_range(schema));
  const double width = r.high - r.low;
  const bool fixed_dimension = schema == SurveySchema::Bolukbasi;
  std::vector<std::string> header{"identity"};
  if (!fixed_dimension) header.push_back("dimension");
  header.insert(header.end(), {"mean", "sd", "n", "log_frequency", "synsets"});
  std::string out = csv_join(header) + "\n";
  for (const auto& s : stats) {
    std::vector<std::string> row{s.identity};
    if (!fixed_dimension) row.push_back(s.dimension);
    row.push_back(format_double(r.low + s.mean * width));
    const bool missing = s.se_missing && fixed_dimension;
    row.push_back(missing && s.sd == 0.0 ? "" : format_double(s.sd * width));
    row.push_back(missing && s.n == 0 ? "" : std::to_string(s.n));
    row.push_back(s.log_frequency ? format_double(*s.log_frequency) : "");
    row.push_back(s.synsets ? format_double(*s.synsets) : "");
    out += csv_join(row) + "\n";
  }
  return out;
}

std::vector<BeliefStats> on_dimension(const std::vector<BeliefStats>& stats, std::string_view dimension) {
  std::vector<BeliefStats> out;
  for (const auto& s : stats) {
    if (s.dimension == dimension) out.push_back(s);
  }
  return out;
}

std::vector<std::string> dimensions_of(const std::vector<BeliefStats>& stats) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& s : stats) {
    if (seen.insert(s.dimension).second) out.push_back(s.dimension);
  }
  return out;
}

DimensionSummary dimension_summary(const std::vector<BeliefStats>& stats, std::string_view dimension) {
  std::vector<double> means;
  for (const auto& s : stats) {
    if (s.dimension == dimension) means.push_back(s.mean);
  }
  if (means.size() < 3) {
    throw Error("dimension '" + std::string(dimension) + "' has " + std::to_string(means.size()) +
                " identities; need at least 3");
  }
  return {sample_variance(means), median(means), means.size()};
}

std::optional<std::size_t> BeliefMatrix::identity_index(std::string_view identity) const {
  const auto it = std::lower_bound(identities.begin(), identities.end(), identity);
  if (it == identities.end() || *it != identity) return std::nullopt;
  return static_cast<std::size_t>(it - identities.begin());
}

BeliefMatrix build_belief_matrix(const std::vector<BeliefStats>& stats, WarningLog* warnings) {
  std::set<std::string> dimension_set;
  std::map<std::string, std::map<std::string, double>> cells;
  for (const auto& s : stats) {
    dimension_set.insert(s.dimension);
    cells[s.identity][s.dimension] = s.mean;
  }
  BeliefMatrix out;
  out.dimensions.assign(dimension_set.begin(), dimension_set.end());
  for (const auto& [identity, row] : cells) {
    if (row.size() == dimension_set.size()) {
      out.identities.push_back(identity);
    } else if (warnings) {
      std::string missing;
      for (const auto& d : out.dimensions) {
        if (!row.count(d)) missing += (missing.empty() ? "" : ", ") + d;
      }
      warnings->add("identity-dropped", "identity '" + identity + "' dropped from belief matrix; missing " + missing);
    }
  }
  if (out.identities.size() < 2) throw DegenerateError("belief matrix needs at least two complete identities");

  out.values = Matrix(out.identities.size(), out.dimensions.size());
  for (std::size_t j = 0; j < out.dimensions.size(); ++j) {
    std::vector<double> column;
    for (const auto& identity : out.identities) column.push_back(cells[identity][out.dimensions[j]]);
    const double m = mean(column);
    const double sd = sample_sd(column);
    double scale = 1.0;
    for (double v : column) scale = std::max(scale, std::abs(v));
    // Rounding in the mean leaves a tiny nonzero sd for constant columns.
    if (!(sd > 1e-12 * scale)) {
      throw DegenerateError("dimension '" + out.dimensions[j] + "' has zero variance; cannot standardize");
    }
    for (std::size_t i = 0; i < column.size(); ++i) out.values(i, j) = (column[i] - m) / sd;
  }
  return out;
}

std::string_view to_string(QuestionType type) {
  return type == QuestionType::IsA ? "IsA" : "SeenWith";
}

std::vector<LabelingObservation> parse_labeling(std::string_view csv_text, const std::string& source) {
  const CsvTable table = CsvTable::parse(csv_text, source);
  table.require_column("question_id");
  const std::size_t c_type = table.require_column("type");
  const std::size_t c_question = table.require_column("question_identity");
  const std::size_t c_selected = table.require_column("selected");
  std::vector<std::size_t> c_answers;
  for (int k = 1; k <= 4; ++k) c_answers.push_back(table.require_column("answer_" + std::to_string(k)));

  std::vector<LabelingObservation> out;
  for (const CsvRow& row : table.rows()) {
    const std::string type = lower(row.fields[c_type]);
    QuestionType qt;
    if (type == "isa") {
      qt = QuestionType::IsA;
    } else if (type == "seenwith") {
      qt = QuestionType::SeenWith;
    } else {
      throw ParseError(source, row.line, "unknown question type '" + row.fields[c_type] + "'");
    }
    const std::string& question = row.fields[c_question];
    const std::string selected = row.fields[c_selected];
    const std::string sel = lower(selected);
    if (sel.empty() || sel == "none" || sel == "all are equally unlikely" ||
        sel == "all are equally likely") {
      continue;
    }
    bool matched = false;
    for (std::size_t c : c_answers) {
      if (row.fields[c] == question) {
        throw ParseError(source, row.line, "answer '" + question + "' repeats the question identity");
      }
      matched = matched || row.fields[c] == selected;
    }
    if (!matched) {
      throw ParseError(source, row.line, "selected answer '" + selected + "' is not among the candidates");
    }
    for (std::size_t c : c_answers) {
      out.push_back({qt, question, row.fields[c], row.fields[c] == selected ? 1 : 0});
    }
  }
  return out;
}

std::vector<LabelingObservation> load_labeling(const std::filesystem::path& path) {
  return parse_labeling(read_file(path), path.string());
}

}  // namespace semdim
