#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semdim/diagnostics.hpp"
#include "semdim/matrix.hpp"

namespace semdim {

/// Survey summary for one identity on one dimension, on the [0, 1] scale.
struct BeliefStats {
  std::string identity;
  std::string dimension;
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;  // 0 when unknown
  double se = 0.0;    // sd / sqrt(n); 0 when se_missing
  bool se_missing = false;
  std::optional<double> log_frequency;
  std::optional<double> synsets;
};

enum class SurveySchema { ThisPaper, Bolukbasi, PersonalityTraits, EpaDictionary };

SurveySchema parse_survey_schema(std::string_view name);
std::string_view to_string(SurveySchema schema);

/// Native response range of a schema; means map affinely from [low, high] to [0, 1].
struct NativeRange {
  double low = 0.0;
  double high = 1.0;
};

NativeRange default_range(SurveySchema schema);

/// Reads a long-format survey CSV:
///   this-paper, personality-traits, epa-dictionary:
///       identity,dimension,mean,sd,n[,log_frequency][,synsets]
///   bolukbasi:
///       identity,mean[,sd,n][,log_frequency][,synsets]   (dimension is "gender")
/// Only the bolukbasi schema may omit sd/n; such records get se = 0 and se_missing.
std::vector<BeliefStats> load_survey(const std::filesystem::path& path, SurveySchema schema,
                                     std::optional<NativeRange> range = std::nullopt);
std::vector<BeliefStats> parse_survey(std::string_view csv_text, SurveySchema schema,
                                      std::optional<NativeRange> range = std::nullopt,
                                      const std::string& source = "<memory>");

/// Inverse of load_survey: writes records back in the schema's native units.
std::string format_survey(const std::vector<BeliefStats>& stats, SurveySchema schema,
                          std::optional<NativeRange> range = std::nullopt);

/// Records on `dimension`, in input order.
std::vector<BeliefStats> on_dimension(const std::vector<BeliefStats>& stats,
                                      std::string_view dimension);
/// Distinct dimensions in first-appearance order.
std::vector<std::string> dimensions_of(const std::vector<BeliefStats>& stats);

struct DimensionSummary {
  double variance = 0.0;  // sample variance of per-identity means
  double median = 0.0;
  std::size_t identities = 0;
};

/// Needs at least three identities on the dimension.
DimensionSummary dimension_summary(const std::vector<BeliefStats>& stats, std::string_view dimension);

/// Identities x dimensions grid of column-standardized means (sample sd).
struct BeliefMatrix {
  std::vector<std::string> identities;  // sorted
  std::vector<std::string> dimensions;  // sorted
  Matrix values;

  std::optional<std::size_t> identity_index(std::string_view identity) const;
};

/// Identities missing any dimension are dropped (reported to `warnings`).
/// Throws DegenerateError when a dimension has zero variance.
BeliefMatrix build_belief_matrix(const std::vector<BeliefStats>& stats,
                                 WarningLog* warnings = nullptr);

enum class QuestionType { IsA, SeenWith };

std::string_view to_string(QuestionType type);

struct LabelingObservation {
  QuestionType question_type = QuestionType::IsA;
  std::string question_identity;
  std::string answer_identity;
  int selected = 0;
};

/// Reads labeling responses:
///   question_id,type,question_identity,answer_1,answer_2,answer_3,answer_4,selected
/// Each answered question yields one observation per candidate answer. A
/// `selected` of "none", "all are equally unlikely", "all are equally likely",
/// or empty marks a skipped question, which yields nothing.
std::vector<LabelingObservation> load_labeling(const std::filesystem::path& path);
std::vector<LabelingObservation> parse_labeling(std::string_view csv_text,
                                                const std::string& source = "<memory>");

}  // namespace semdim
