#include "semdim/dimension_io.hpp"

#include <json.hpp>

#include "semdim/csv.hpp"
#include "semdim/error.hpp"

namespace semdim {

namespace {

using nlohmann::json;

std::vector<std::string> word_list(const json& node, const std::string& where) {
  if (!node.is_array()) throw ConfigError(where, "expected an array of words");
  std::vector<std::string> out;
  for (const auto& w : node) {
    if (!w.is_string()) throw ConfigError(where, "expected string entries");
    out.push_back(w.get<std::string>());
  }
  return out;
}

DimensionSpec parse_one(const json& node, const std::string& where) {
  if (!node.is_object()) throw ConfigError(where, "expected an object");
  DimensionSpec spec;
  if (!node.contains("name") || !node["name"].is_string()) throw ConfigError(where + ".name", "required string");
  spec.name = node["name"].get<std::string>();
  spec.label = node.value("label", spec.name);
  try {
    spec.source = parse_wordset_source(node.value("source", std::string("survey-matched")));
  } catch (const Error& e) {
    throw ConfigError(where + ".source", e.what());
  }
  if (node.contains("left")) spec.left_words = word_list(node["left"], where + ".left");
  if (node.contains("right")) spec.right_words = word_list(node["right"], where + ".right");
  if (node.contains("pairs")) {
    const json& pairs = node["pairs"];
    if (!pairs.is_array()) throw ConfigError(where + ".pairs", "expected an array of [left, right] pairs");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto p = word_list(pairs[i], where + ".pairs[" + std::to_string(i) + "]");
      if (p.size() != 2) throw ConfigError(where + ".pairs[" + std::to_string(i) + "]", "expected two words");
      spec.pairs.emplace_back(p[0], p[1]);
    }
  }
  if (node.contains("multiclass")) {
    const json& mc = node["multiclass"];
    const std::string at = where + ".multiclass";
    if (!mc.is_object()) throw ConfigError(at, "expected an object");
    Multiclass out;
    out.default_category = mc.value("default", std::string());
    out.contrast_category = mc.value("contrast", std::string());
    if (!mc.contains("categories") || !mc["categories"].is_array()) {
      throw ConfigError(at + ".categories", "required array");
    }
    for (std::size_t i = 0; i < mc["categories"].size(); ++i) {
      const json& c = mc["categories"][i];
      const std::string cat_at = at + ".categories[" + std::to_string(i) + "]";
      if (!c.is_object() || !c.contains("name")) throw ConfigError(cat_at, "expected {name, words}");
      out.categories.push_back({c["name"].get<std::string>(), word_list(c.value("words", json::array()), cat_at + ".words")});
    }
    spec.multiclass = std::move(out);
  }
  try {
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where, e.what());
  }
  return spec;
}

}  // namespace

std::vector<DimensionSpec> parse_dimension_specs(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(source, e.what());
  }
  const json& list = doc.is_array() ? doc : doc.value("dimensions", json());
  if (!list.is_array()) throw ConfigError(source + ":dimensions", "expected an array");
  std::vector<DimensionSpec> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(parse_one(list[i], "dimensions[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<DimensionSpec> load_dimension_specs(const std::filesystem::path& path) {
  return parse_dimension_specs(read_file(path), path.string());
}

}  // namespace semdim
