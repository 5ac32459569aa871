#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semdim/diagnostics.hpp"

namespace semdim {

enum class EmbeddingFormat { Auto, Word2VecText, GloveText };

EmbeddingFormat parse_embedding_format(std::string_view name);
std::string_view to_string(EmbeddingFormat format);

/// A row of an EmbeddingModel. `values` views the model's storage and is valid
/// for as long as the model is.
struct WordVector {
  std::string word;
  std::span<const double> values;
};

/// How a lookup found (or failed to find) its row.
enum class Resolution { Exact, Casefold, Underscore, Missing };

std::string_view to_string(Resolution resolution);

struct LookupResult {
  std::optional<WordVector> vector;
  Resolution resolution = Resolution::Missing;
  std::string query;
};

/// Immutable vocabulary -> vector table for one corpus/algorithm combination.
class EmbeddingModel {
 public:
  EmbeddingModel(std::string name, std::size_t dim, std::vector<std::string> words,
                 std::vector<double> values, bool normalized = false);

  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool normalized() const { return normalized_; }

  const std::vector<std::string>& words() const { return words_; }
  std::span<const double> row(std::size_t index) const {
    return {values_.data() + index * dim_, dim_};
  }

  std::optional<std::size_t> index_of(std::string_view word) const;

  /// Exact match, then ASCII-casefolded, then spaces replaced by underscores.
  LookupResult lookup(std::string_view word) const;

 private:
  std::string name_;
  std::size_t dim_;
  std::vector<std::string> words_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
  bool normalized_;
};

/// Parses a whitespace-separated text embedding file. In Auto mode a first line
/// of exactly two integer tokens is read as a word2vec "count dim" header.
/// Duplicate words keep their first row and are reported to `warnings`.
EmbeddingModel load_embeddings(const std::filesystem::path& path,
                               EmbeddingFormat format = EmbeddingFormat::Auto,
                               WarningLog* warnings = nullptr, std::string name = {});

/// Same as load_embeddings, from an in-memory buffer. `source` names it in errors.
EmbeddingModel parse_embeddings(std::string_view text, EmbeddingFormat format,
                                WarningLog* warnings, std::string name,
                                const std::string& source = "<memory>");

/// Writes the model in word2vec-text (with header) or glove-text form using
/// round-trip precision.
void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& path,
                     EmbeddingFormat format = EmbeddingFormat::Word2VecText);
std::string format_embeddings(const EmbeddingModel& model,
                              EmbeddingFormat format = EmbeddingFormat::Word2VecText);

/// Returns a copy whose rows have unit Euclidean norm. Throws DegenerateError
/// naming the first zero-norm word.
EmbeddingModel unit_normalize(const EmbeddingModel& model);

}  // namespace semdim
