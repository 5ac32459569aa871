#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semdim/diagnostics.hpp"
#include "semdim/embedding.hpp"
#include "semdim/matrix.hpp"

namespace semdim {

enum class Pole { Left, Right };

enum class WordsetSource { SurveyMatched, SurveyAugmented, PriorWork };

WordsetSource parse_wordset_source(std::string_view name);
std::string_view to_string(WordsetSource source);

struct MulticlassCategory {
  std::string name;
  std::vector<std::string> words;
};

struct Multiclass {
  std::vector<MulticlassCategory> categories;
  std::string default_category;
  /// The category the default is measured against under pair-based measures.
  std::string contrast_category;
};

/// A dimension of social meaning and the words that induce it. By convention
/// the right pole is the high end of the survey scale (good, powerful,
/// female, old). Binary specs derived from a multiclass spec put the measured
/// category on the left and record that with `high_pole`.
struct DimensionSpec {
  std::string name;
  std::string label;  // display name; defaults to `name`
  std::vector<std::string> left_words;
  std::vector<std::string> right_words;
  std::vector<std::pair<std::string, std::string>> pairs;  // explicit (left, right)
  WordsetSource source = WordsetSource::SurveyMatched;
  std::optional<Multiclass> multiclass;
  Pole high_pole = Pole::Right;

  /// Throws Error on an empty pole, a missing multiclass category, or default == contrast.
  void validate() const;
  bool is_multiclass() const { return multiclass.has_value(); }
};

/// Same dimension with left and right poles exchanged.
DimensionSpec swap_poles(const DimensionSpec& spec);

enum class DirectionMethod { MeanPairDifference, PrincipalComponent, Centroids, WordSets };

std::string_view to_string(DirectionMethod method);

enum class Measure {
  Ethayarajh,
  Kozlowski,
  Bolukbasi,
  Swinger,
  Garg,
  EthayarajhGarg,
  EthayarajhKozlowski,
};

struct PositionMeasureSpec {
  Measure id;
  std::string_view name;
  DirectionMethod direction;
  bool requires_normalized;
  /// Handles several categories natively (one-vs-rest) instead of default pairing.
  bool multiclass_native;
};

const PositionMeasureSpec& measure_spec(Measure measure);
Measure parse_measure(std::string_view name);
std::string_view to_string(Measure measure);
const std::vector<Measure>& all_measures();

/// An axis induced from a DimensionSpec in one embedding model.
///   MeanPairDifference: vector = mean of (left_i - right_i) over pairs.
///   PrincipalComponent: vector = first principal component of the pair-centered
///                       words, oriented so left words project higher on average.
///   Centroids:          left/right centroids; vector = left - right.
///   WordSets:           no vector; the resolved pole vectors are kept.
struct AxisDirection {
  std::string dimension;
  DirectionMethod method = DirectionMethod::MeanPairDifference;
  std::optional<std::vector<double>> vector;
  std::optional<std::vector<double>> left_centroid;
  std::optional<std::vector<double>> right_centroid;
  Matrix left_vectors;   // WordSets only
  Matrix right_vectors;  // WordSets only
  std::vector<std::string> left_used;
  std::vector<std::string> right_used;
  std::vector<std::string> unresolved;  // pole words missing from the model
  bool normalized = false;              // state of the model it was built from
};

/// Throws DegenerateError when a pole has no resolvable word or the direction
/// has norm below 1e-12. Unresolved words and pole truncation go to `warnings`.
AxisDirection build_direction(const DimensionSpec& spec, DirectionMethod method,
                              const EmbeddingModel& model, WarningLog* warnings = nullptr);

/// Position of a raw vector under `measure`. Higher means closer to the left pole.
///   ethayarajh variants:  <w,b>/|b|
///   kozlowski, bolukbasi: <w,b>/(|b||w|)
///   garg:                 |w - b_r| - |w - b_l|
///   swinger:              mean cos(w, left) - mean cos(w, right)
double position(std::span<const double> w, Measure measure, const AxisDirection& direction);

/// Looks `word` up and scores it. Returns nullopt when the word is out of
/// vocabulary. Throws Error if the model's normalization state does not match
/// the measure, or if `direction` was built for a different method.
std::optional<double> score(std::string_view word, Measure measure,
                            const AxisDirection& direction, const EmbeddingModel& model);

/// Mean cosine to the resolvable left-pole words minus mean cosine to the
/// right-pole words, on a normalized model.
std::optional<double> swinger_score(std::string_view word, const DimensionSpec& spec,
                                    const EmbeddingModel& model);

/// Reduces a multiclass spec to binary specs for `measure`.
///   pair-based measures: each category vs the default; the default vs its contrast.
///   swinger, garg:       each category vs the union of all others.
std::vector<DimensionSpec> resolve_multiclass(const DimensionSpec& spec, Measure measure);

}  // namespace semdim
