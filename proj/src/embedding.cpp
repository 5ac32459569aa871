#include "semdim/embedding.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "semdim/csv.hpp"
#include "semdim/error.hpp"

namespace semdim {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits on runs of spaces/tabs without allocating.
void tokenize(std::string_view line, std::vector<std::string_view>& tokens) {
  tokens.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
}

bool is_integer_token(std::string_view token) {
  return !token.empty() && std::all_of(token.begin(), token.end(),
                                       [](unsigned char c) { return std::isdigit(c); });
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

EmbeddingFormat parse_embedding_format(std::string_view name) {
  if (name == "auto" || name.empty()) return EmbeddingFormat::Auto;
  if (name == "word2vec-text" || name == "word2vec") return EmbeddingFormat::Word2VecText;
  if (name == "glove-text" || name == "glove") return EmbeddingFormat::GloveText;
  throw Error("unknown embedding format '" + std::string(name) +
              "' (expected auto, word2vec-text, glove-text)");
}

std::string_view to_string(EmbeddingFormat format) {
  switch (format) {
    case EmbeddingFormat::Auto: return "auto";
    case EmbeddingFormat::Word2VecText: return "word2vec-text";
    case EmbeddingFormat::GloveText: return "glove-text";
  }
  return "auto";
}

std::string_view to_string(Resolution resolution) {
  switch (resolution) {
    case Resolution::Exact: return "exact";
    case Resolution::Casefold: return "casefold";
    case Resolution::Underscore: return "underscore";
    case Resolution::Missing: return "missing";
  }
  return "missing";
}

EmbeddingModel::EmbeddingModel(std::string name, std::size_t dim, std::vector<std::string> words,
                               std::vector<double> values, bool normalized)
    : name_(std::move(name)),
      dim_(dim),
      words_(std::move(words)),
      values_(std::move(values)),
      normalized_(normalized) {
  if (dim_ == 0) throw Error("embedding dimension must be positive");
  if (values_.size() != words_.size() * dim_) {
    throw Error("embedding matrix has " + std::to_string(values_.size()) + " values, expected " +
                std::to_string(words_.size() * dim_));
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw Error("duplicate vocabulary entry '" + words_[i] + "'");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("non-finite value in embedding matrix");
  }
}

std::optional<std::size_t> EmbeddingModel::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

LookupResult EmbeddingModel::lookup(std::string_view word) const {
  LookupResult result;
  result.query = std::string(word);
  auto found = [&](std::size_t index, Resolution how) {
    result.vector = WordVector{words_[index], row(index)};
    result.resolution = how;
    return result;
  };
  if (auto i = index_of(word)) return found(*i, Resolution::Exact);
  const std::string folded = ascii_lower(word);
  if (folded != word) {
    if (auto i = index_of(folded)) return found(*i, Resolution::Casefold);
  }
  std::string underscored(word);
  std::replace(underscored.begin(), underscored.end(), ' ', '_');
  if (underscored != word) {
    if (auto i = index_of(underscored)) return found(*i, Resolution::Underscore);
  }
  return result;
}

EmbeddingModel parse_embeddings(std::string_view text, EmbeddingFormat format,
                                WarningLog* warnings, std::string name,
                                const std::string& source) {
  std::vector<std::string> words;
  std::vector<double> values;
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<std::string_view> tokens;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::optional<std::size_t> header_count;
  bool first_line = true;

  while (!text.empty()) {
    const auto end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    text.remove_prefix(end == std::string_view::npos ? text.size() : end + 1);
    ++line_no;
    tokenize(line, tokens);
    if (tokens.empty()) continue;

    if (first_line) {
      first_line = false;
      const bool looks_like_header =
          tokens.size() == 2 && is_integer_token(tokens[0]) && is_integer_token(tokens[1]);
      if (format == EmbeddingFormat::Word2VecText && !looks_like_header) {
        throw ParseError(source, line_no, "word2vec-text file must start with a 'count dim' header");
      }
      if (looks_like_header && format != EmbeddingFormat::GloveText) {
        header_count = static_cast<std::size_t>(*parse_integer(tokens[0]));
        dim = static_cast<std::size_t>(*parse_integer(tokens[1]));
        if (dim == 0) throw ParseError(source, line_no, "header declares zero dimensions");
        words.reserve(*header_count);
        values.reserve(*header_count * dim);
        continue;
      }
    }

    if (tokens.size() < 2) {
      throw ParseError(source, line_no, "expected a word followed by numeric values");
    }
    if (dim == 0) dim = tokens.size() - 1;
    if (tokens.size() - 1 != dim) {
      throw ParseError(source, line_no,
                       "inconsistent column count: expected " + std::to_string(dim) +
                           " values, found " + std::to_string(tokens.size() - 1));
    }
    const std::string word(tokens[0]);
    if (seen.count(word)) {
      if (warnings) {
        warnings->add("duplicate-word",
                      "duplicate word '" + word + "' at line " + std::to_string(line_no) +
                          " ignored; first occurrence at line " + std::to_string(seen[word]) + " kept",
                      source);
      }
      continue;
    }
    const std::size_t offset = values.size();
    values.resize(offset + dim);
    for (std::size_t k = 0; k < dim; ++k) {
      const std::string_view token = tokens[k + 1];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(source, line_no, "non-numeric value '" + std::string(token) + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(source, line_no, "non-finite value '" + std::string(token) + "'");
      }
      values[offset + k] = v;
    }
    seen.emplace(word, line_no);
    words.push_back(word);
  }

  if (words.empty()) {
    throw ParseError(source, 0, line_no == 0 ? "empty file" : "no word vectors found");
  }
  if (header_count && *header_count != words.size() && warnings) {
    warnings->add("header-count-mismatch",
                  "header declares " + std::to_string(*header_count) + " words, parsed " +
                      std::to_string(words.size()),
                  source);
  }
  return EmbeddingModel(std::move(name), dim, std::move(words), std::move(values));
}

EmbeddingModel load_embeddings(const std::filesystem::path& path, EmbeddingFormat format,
                               WarningLog* warnings, std::string name) {
  if (name.empty()) name = path.stem().string();
  return parse_embeddings(read_file(path), format, warnings, std::move(name), path.string());
}

std::string format_embeddings(const EmbeddingModel& model, EmbeddingFormat format) {
  std::string out;
  if (format != EmbeddingFormat::GloveText) {
    out += std::to_string(model.size()) + " " + std::to_string(model.dim()) + "\n";
  }
  for (std::size_t i = 0; i < model.size(); ++i) {
    out += model.words()[i];
    for (double v : model.row(i)) {
      out.push_back(' ');
      out += format_double(v);
    }
    out.push_back('\n');
  }
  return out;
}

void save_embeddings(const EmbeddingModel& model, const std::filesystem::path& path,
                     EmbeddingFormat format) {
  write_file(path, format_embeddings(model, format));
}

EmbeddingModel unit_normalize(const EmbeddingModel& model) {
  std::vector<double> values;
  values.reserve(model.size() * model.dim());
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto row = model.row(i);
    double sq = 0.0;
    for (double v : row) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm == 0.0) {
      throw DegenerateError("cannot normalize zero-norm vector for word '" + model.words()[i] +
                            "' in model '" + model.name() + "'");
    }
    for (double v : row) values.push_back(v / norm);
  }
  return EmbeddingModel(model.name(), model.dim(), model.words(), std::move(values), true);
}

}  // namespace semdim
