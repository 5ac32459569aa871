#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semdim/axes.hpp"
#include "semdim/embedding.hpp"
#include "semdim/survey.hpp"

namespace semdim {

struct EmbeddingSource {
  std::string name;
  std::filesystem::path path;
  EmbeddingFormat format = EmbeddingFormat::Auto;
};

struct SurveySource {
  std::string name;
  std::filesystem::path path;
  SurveySchema schema = SurveySchema::ThisPaper;
  std::optional<NativeRange> range;
};

/// Everything a pipeline run needs. Relative paths in the file are resolved
/// against the config file's directory.
struct RunConfig {
  std::vector<EmbeddingSource> embeddings;
  std::filesystem::path dimensions;
  std::vector<std::string> identities;  // empty: union of survey identities
  std::vector<SurveySource> surveys;
  std::optional<std::filesystem::path> labeling;
  std::string salience_dataset;         // survey that builds the belief matrix
  std::optional<std::filesystem::path> accuracy_table;  // dimension_accuracy.csv from an earlier run
  std::vector<Measure> measures;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "semdim-out";
  bool sign_align = true;
  double ridge = 1e-6;
  std::size_t bootstrap_resamples = 1000;
  double bootstrap_level = 0.95;
  std::size_t jobs = 1;

  /// Canonical JSON of every setting that affects results (output_dir and
  /// jobs excluded). Refreshed by finalize().
  std::string canonical;

  /// Recomputes `canonical` after fields were changed programmatically.
  void finalize();
  /// 16 hex digits of FNV-1a over `canonical`.
  std::string hash() const;
};

/// Parses a JSON config (`//` and `/* */` comments allowed). Throws ConfigError
/// naming the offending field.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                       const std::string& source = "<memory>");
RunConfig load_config(const std::filesystem::path& path);

/// Checks that referenced files exist; throws ConfigError with the field path.
void validate_paths(const RunConfig& config, bool need_labeling = false, bool need_surveys = false);

/// Stable 64-bit seed for a named sub-task.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

}  // namespace semdim
