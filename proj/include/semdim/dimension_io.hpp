#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "semdim/axes.hpp"

namespace semdim {

/// Reads a dimension-spec file (JSON, `//` comments allowed):
///
///   { "dimensions": [
///       { "name": "Evaluation", "source": "survey-matched",
///         "left": ["bad", "awful"], "right": ["good", "nice"] },
///       { "name": "gender", "source": "prior-work",
///         "pairs": [["he", "she"], ["him", "her"]] },
///       { "name": "race", "source": "survey-matched",
///         "multiclass": { "default": "White", "contrast": "Black",
///                         "categories": [ { "name": "White", "words": ["white"] }, ... ] } } ] }
std::vector<DimensionSpec> load_dimension_specs(const std::filesystem::path& path);
std::vector<DimensionSpec> parse_dimension_specs(std::string_view json_text,
                                                 const std::string& source = "<memory>");

}  // namespace semdim
