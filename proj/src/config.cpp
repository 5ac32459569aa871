#include "semdim/config.hpp"

#include <cstdio>
#include <json.hpp>

#include "semdim/csv.hpp"
#include "semdim/error.hpp"
#include "semdim/rng.hpp"

namespace semdim {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.contains(field)) throw ConfigError(field, "required field missing");
  return doc[field];
}

std::string require_string(const json& node, const std::string& field) {
  if (!node.is_string()) throw ConfigError(field, "expected a string");
  return node.get<std::string>();
}

template <typename T, typename F>
T wrap(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field, e.what());
  }
}

// Settings that do not change results stay out of the hash.
json canonical_view(const RunConfig& c, const json& raw) {
  json view = raw;
  view.erase("output_dir");
  view.erase("jobs");
  view["seed"] = c.seed;
  view["sign_align"] = c.sign_align;
  view["ridge"] = c.ridge;
  view["bootstrap_resamples"] = c.bootstrap_resamples;
  view["bootstrap_level"] = c.bootstrap_level;
  json measures = json::array();
  for (Measure m : c.measures) measures.push_back(std::string(to_string(m)));
  view["measures"] = measures;
  return view;
}

}  // namespace

void RunConfig::finalize() {
  json raw = canonical.empty() ? json::object() : json::parse(canonical);
  canonical = canonical_view(*this, raw).dump();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
  return buf;
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose) {
  return splitmix64(seed ^ fnv1a(purpose));
}

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                       const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(source, e.what());
  }
  if (!doc.is_object()) throw ConfigError(source, "config must be a JSON object");

  RunConfig c;
  const json& embeddings = require(doc, "embeddings");
  if (!embeddings.is_array() || embeddings.empty()) {
    throw ConfigError("embeddings", "expected a nonempty array");
  }
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const std::string at = "embeddings[" + std::to_string(i) + "]";
    const json& e = embeddings[i];
    if (!e.is_object()) throw ConfigError(at, "expected an object");
    EmbeddingSource src;
    src.path = resolve(base_dir, require_string(require(e, "path"), at + ".path"));
    src.name = e.contains("name") ? require_string(e["name"], at + ".name") : src.path.stem().string();
    src.format = wrap<EmbeddingFormat>(at + ".format", [&] {
      return parse_embedding_format(e.value("format", std::string("auto")));
    });
    for (const auto& prior : c.embeddings) {
      if (prior.name == src.name) throw ConfigError(at + ".name", "duplicate embedding name '" + src.name + "'");
    }
    c.embeddings.push_back(std::move(src));
  }

  c.dimensions = resolve(base_dir, require_string(require(doc, "dimensions"), "dimensions"));

  if (doc.contains("identities")) {
    const json& ids = doc["identities"];
    if (ids.is_array()) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        c.identities.push_back(require_string(ids[i], "identities[" + std::to_string(i) + "]"));
      }
    } else if (ids.is_string()) {
      const auto path = resolve(base_dir, ids.get<std::string>());
      if (!std::filesystem::exists(path)) throw ConfigError("identities", "file not found: " + path.string());
      const std::string text = read_file(path);
      std::size_t start = 0;
      while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty() && line.front() != '#') c.identities.push_back(line);
        start = end + 1;
      }
    } else {
      throw ConfigError("identities", "expected an array of words or a file path");
    }
  }

  if (doc.contains("surveys")) {
    const json& surveys = doc["surveys"];
    if (!surveys.is_array()) throw ConfigError("surveys", "expected an array");
    for (std::size_t i = 0; i < surveys.size(); ++i) {
      const std::string at = "surveys[" + std::to_string(i) + "]";
      const json& s = surveys[i];
      if (!s.is_object()) throw ConfigError(at, "expected an object");
      SurveySource src;
      src.path = resolve(base_dir, require_string(require(s, "path"), at + ".path"));
      src.schema = wrap<SurveySchema>(at + ".schema", [&] {
        return parse_survey_schema(require_string(require(s, "schema"), at + ".schema"));
      });
      src.name = s.contains("name") ? require_string(s["name"], at + ".name") : std::string(to_string(src.schema));
      if (s.contains("range")) {
        const json& r = s["range"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number() ||
            !(r[1].get<double>() > r[0].get<double>())) {
          throw ConfigError(at + ".range", "expected [low, high] with high > low");
        }
        src.range = NativeRange{r[0].get<double>(), r[1].get<double>()};
      }
      for (const auto& prior : c.surveys) {
        if (prior.name == src.name) throw ConfigError(at + ".name", "duplicate survey name '" + src.name + "'");
      }
      c.surveys.push_back(std::move(src));
    }
  }

  if (doc.contains("labeling")) c.labeling = resolve(base_dir, require_string(doc["labeling"], "labeling"));
  if (doc.contains("accuracy_table")) {
    c.accuracy_table = resolve(base_dir, require_string(doc["accuracy_table"], "accuracy_table"));
  }
  if (doc.contains("salience_dataset")) {
    c.salience_dataset = require_string(doc["salience_dataset"], "salience_dataset");
  } else {
    for (const auto& s : c.surveys) {
      if (s.schema == SurveySchema::ThisPaper) {
        c.salience_dataset = s.name;
        break;
      }
    }
  }

  if (doc.contains("measures")) {
    const json& ms = doc["measures"];
    if (!ms.is_array() || ms.empty()) throw ConfigError("measures", "expected a nonempty array");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string at = "measures[" + std::to_string(i) + "]";
      c.measures.push_back(wrap<Measure>(at, [&] { return parse_measure(require_string(ms[i], at)); }));
    }
  } else {
    c.measures = all_measures();
  }

  auto number = [&](const char* field, auto& target) {
    if (!doc.contains(field)) return;
    const json& v = doc[field];
    using T = std::decay_t<decltype(target)>;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
      target = v.get<bool>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(field, "expected a number");
      target = v.get<T>();
    } else {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError(field, "expected a nonnegative integer");
      }
      target = v.get<T>();
    }
  };
  number("seed", c.seed);
  number("sign_align", c.sign_align);
  number("ridge", c.ridge);
  number("bootstrap_resamples", c.bootstrap_resamples);
  number("bootstrap_level", c.bootstrap_level);
  number("jobs", c.jobs);
  if (doc.contains("output_dir")) c.output_dir = resolve(base_dir, require_string(doc["output_dir"], "output_dir"));

  if (c.ridge < 0.0) throw ConfigError("ridge", "must be nonnegative");
  if (!(c.bootstrap_level > 0.0 && c.bootstrap_level < 1.0)) throw ConfigError("bootstrap_level", "must lie in (0, 1)");
  if (c.bootstrap_resamples != 0 && c.bootstrap_resamples < 100) {
    throw ConfigError("bootstrap_resamples", "must be 0 (disabled) or at least 100");
  }
  if (c.jobs == 0) c.jobs = 1;

  c.canonical = canonical_view(c, doc).dump();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("--config", "file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path(), path.string());
}

void validate_paths(const RunConfig& config, bool need_labeling, bool need_surveys) {
  namespace fs = std::filesystem;
  for (std::size_t i = 0; i < config.embeddings.size(); ++i) {
    if (!fs::is_regular_file(config.embeddings[i].path)) {
      throw ConfigError("embeddings[" + std::to_string(i) + "].path",
                        "file not found: " + config.embeddings[i].path.string());
    }
  }
  if (!fs::is_regular_file(config.dimensions)) {
    throw ConfigError("dimensions", "file not found: " + config.dimensions.string());
  }
  for (std::size_t i = 0; i < config.surveys.size(); ++i) {
    if (!fs::is_regular_file(config.surveys[i].path)) {
      throw ConfigError("surveys[" + std::to_string(i) + "].path",
                        "file not found: " + config.surveys[i].path.string());
    }
  }
  if (need_surveys && config.surveys.empty()) throw ConfigError("surveys", "at least one survey dataset is required");
  if (need_labeling) {
    if (!config.labeling) throw ConfigError("labeling", "a labeling data file is required for salience");
    if (!fs::is_regular_file(*config.labeling)) {
      throw ConfigError("labeling", "file not found: " + config.labeling->string());
    }
    bool found = false;
    for (const auto& s : config.surveys) found = found || s.name == config.salience_dataset;
    if (!found) {
      throw ConfigError("salience_dataset", "no survey named '" + config.salience_dataset +
                                                "' (salience needs the survey that defines the belief matrix)");
    }
  }
  if (config.accuracy_table && !fs::is_regular_file(*config.accuracy_table)) {
    throw ConfigError("accuracy_table", "file not found: " + config.accuracy_table->string());
  }
  if (config.identities.empty() && config.surveys.empty()) {
    throw ConfigError("identities", "give identities explicitly or at least one survey to draw them from");
  }
}

}  // namespace semdim
