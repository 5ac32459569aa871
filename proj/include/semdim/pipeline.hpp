#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include "semdim/config.hpp"

namespace semdim {

std::string_view tool_version();

struct CommandResult {
  std::vector<std::filesystem::path> written;
  std::size_t warnings = 0;
  /// A grid cell or analysis failed with something other than a degenerate
  /// input. Outputs are still written; the CLI exits with status 1.
  bool had_errors = false;
};

/// Score tables (scores_<embedding>.csv), skipped_manifest.json, warnings.json.
CommandResult cmd_measure(const RunConfig& config);

/// Adds dimension_accuracy.csv, best_settings.csv, belief_ranking.csv,
/// belief_factors.csv, dimension_summary.csv and evaluation_summary.json.
CommandResult cmd_evaluate(const RunConfig& config);

/// salience.csv and salience_summary.json. The importance/accuracy
/// correlation needs `accuracy_table` in the config.
CommandResult cmd_salience(const RunConfig& config);

/// measure + evaluate, then salience (fed by the in-process evaluation) when
/// labeling data is configured.
CommandResult cmd_all(const RunConfig& config);

}  // namespace semdim
