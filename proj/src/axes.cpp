#include "semdim/axes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

#include "semdim/error.hpp"
#include "semdim/pca.hpp"

namespace semdim {

namespace {

constexpr double kMinDirectionNorm = 1e-12;

constexpr std::array<PositionMeasureSpec, 7> kMeasures{{
    {Measure::Ethayarajh, "ethayarajh", DirectionMethod::PrincipalComponent, false, false},
    {Measure::Kozlowski, "kozlowski", DirectionMethod::MeanPairDifference, true, false},
    {Measure::Bolukbasi, "bolukbasi", DirectionMethod::PrincipalComponent, true, false},
    {Measure::Swinger, "swinger", DirectionMethod::WordSets, true, true},
    {Measure::Garg, "garg", DirectionMethod::Centroids, true, true},
    {Measure::EthayarajhGarg, "ethayarajh+garg", DirectionMethod::Centroids, false, false},
    {Measure::EthayarajhKozlowski, "ethayarajh+kozlowski", DirectionMethod::MeanPairDifference,
     false, false},
}};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct ResolvedPole {
  std::vector<std::string> words;
  Matrix vectors;
};

ResolvedPole resolve_pole(const std::vector<std::string>& words, const EmbeddingModel& model,
                          std::vector<std::string>& unresolved) {
  ResolvedPole pole;
  for (const auto& w : words) {
    const LookupResult hit = model.lookup(w);
    if (!hit.vector) {
      unresolved.push_back(w);
      continue;
    }
    pole.words.push_back(w);
    pole.vectors.append_row(hit.vector->values);
  }
  return pole;
}

std::vector<double> centroid(const Matrix& rows) {
  std::vector<double> c(rows.cols(), 0.0);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const auto r = rows.row(i);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += r[j];
  }
  for (double& v : c) v /= static_cast<double>(rows.rows());
  return c;
}

std::vector<std::string> pole_words(const DimensionSpec& spec, Pole pole) {
  if (!spec.pairs.empty()) {
    std::vector<std::string> out;
    for (const auto& [l, r] : spec.pairs) out.push_back(pole == Pole::Left ? l : r);
    return out;
  }
  return pole == Pole::Left ? spec.left_words : spec.right_words;
}

void require_nondegenerate(const std::vector<double>& v, const std::string& dimension) {
  const double n = norm(v);
  if (!(n >= kMinDirectionNorm) || !std::isfinite(n)) {
    throw DegenerateError("degenerate direction for dimension '" + dimension + "' (norm " +
                          std::to_string(n) + ")");
  }
}

// Difference vectors (left_i - right_i) over resolvable pairs.
Matrix pair_differences(const DimensionSpec& spec, const EmbeddingModel& model,
                        AxisDirection& out, WarningLog* warnings) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (!spec.pairs.empty()) {
    for (const auto& [l, r] : spec.pairs) {
      const bool has_l = model.lookup(l).vector.has_value();
      const bool has_r = model.lookup(r).vector.has_value();
      if (!has_l) out.unresolved.push_back(l);
      if (!has_r) out.unresolved.push_back(r);
      if (has_l && has_r) pairs.emplace_back(l, r);
    }
  } else {
    std::vector<std::string> left, right;
    for (const auto& w : spec.left_words) {
      if (model.lookup(w).vector) left.push_back(w); else out.unresolved.push_back(w);
    }
    for (const auto& w : spec.right_words) {
      if (model.lookup(w).vector) right.push_back(w); else out.unresolved.push_back(w);
    }
    if (left.size() != right.size() && warnings && !left.empty() && !right.empty()) {
      warnings->add("pole-truncated",
                    "unpaired poles of size " + std::to_string(left.size()) + " and " +
                        std::to_string(right.size()) + " paired by index after truncation to " +
                        std::to_string(std::min(left.size(), right.size())),
                    spec.label.empty() ? spec.name : spec.label);
    }
    for (std::size_t i = 0; i < std::min(left.size(), right.size()); ++i) {
      pairs.emplace_back(left[i], right[i]);
    }
  }
  if (pairs.empty()) {
    throw DegenerateError("dimension '" + spec.name + "': no resolvable word pairs in model '" +
                          model.name() + "'");
  }
  Matrix diffs;
  std::vector<double> d(model.dim());
  for (const auto& [l, r] : pairs) {
    const auto lv = model.lookup(l).vector->values;
    const auto rv = model.lookup(r).vector->values;
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = lv[j] - rv[j];
    diffs.append_row(d);
    out.left_used.push_back(l);
    out.right_used.push_back(r);
  }
  return diffs;
}

}  // namespace

WordsetSource parse_wordset_source(std::string_view name) {
  if (name == "survey-matched") return WordsetSource::SurveyMatched;
  if (name == "survey-augmented") return WordsetSource::SurveyAugmented;
  if (name == "prior-work") return WordsetSource::PriorWork;
  throw Error("unknown wordset source '" + std::string(name) +
              "' (expected survey-matched, survey-augmented, prior-work)");
}

std::string_view to_string(WordsetSource source) {
  switch (source) {
    case WordsetSource::SurveyMatched: return "survey-matched";
    case WordsetSource::SurveyAugmented: return "survey-augmented";
    case WordsetSource::PriorWork: return "prior-work";
  }
  return "survey-matched";
}

std::string_view to_string(DirectionMethod method) {
  switch (method) {
    case DirectionMethod::MeanPairDifference: return "mean-pair-difference";
    case DirectionMethod::PrincipalComponent: return "principal-component";
    case DirectionMethod::Centroids: return "centroids";
    case DirectionMethod::WordSets: return "word-sets";
  }
  return "mean-pair-difference";
}

const PositionMeasureSpec& measure_spec(Measure measure) {
  for (const auto& m : kMeasures) {
    if (m.id == measure) return m;
  }
  throw Error("unknown measure");
}

Measure parse_measure(std::string_view name) {
  for (const auto& m : kMeasures) {
    if (m.name == name) return m.id;
  }
  throw Error("unknown measure '" + std::string(name) + "'");
}

std::string_view to_string(Measure measure) { return measure_spec(measure).name; }

const std::vector<Measure>& all_measures() {
  static const std::vector<Measure> measures = [] {
    std::vector<Measure> out;
    for (const auto& m : kMeasures) out.push_back(m.id);
    return out;
  }();
  return measures;
}

void DimensionSpec::validate() const {
  if (name.empty()) throw Error("dimension spec without a name");
  if (multiclass) {
    const auto& mc = *multiclass;
    if (mc.categories.size() < 2) throw Error("dimension '" + name + "': multiclass needs two or more categories");
    auto has = [&](const std::string& c) {
      return std::any_of(mc.categories.begin(), mc.categories.end(),
                         [&](const MulticlassCategory& k) { return k.name == c; });
    };
    if (!has(mc.default_category)) {
      throw Error("dimension '" + name + "': default category '" + mc.default_category + "' not defined");
    }
    if (!has(mc.contrast_category)) {
      throw Error("dimension '" + name + "': contrast category '" + mc.contrast_category + "' not defined");
    }
    if (mc.default_category == mc.contrast_category) {
      throw Error("dimension '" + name + "': default and contrast categories must differ");
    }
    for (const auto& c : mc.categories) {
      if (c.words.empty()) throw Error("dimension '" + name + "': category '" + c.name + "' has no words");
    }
    return;
  }
  if (!pairs.empty()) return;
  if (left_words.empty() || right_words.empty()) {
    throw Error("dimension '" + name + "': both poles need at least one word");
  }
}

DimensionSpec swap_poles(const DimensionSpec& spec) {
  DimensionSpec out = spec;
  std::swap(out.left_words, out.right_words);
  for (auto& [l, r] : out.pairs) std::swap(l, r);
  out.high_pole = spec.high_pole == Pole::Left ? Pole::Right : Pole::Left;
  return out;
}

AxisDirection build_direction(const DimensionSpec& spec, DirectionMethod method,
                              const EmbeddingModel& model, WarningLog* warnings) {
  if (spec.is_multiclass()) {
    throw Error("dimension '" + spec.name + "' is multiclass; resolve it to binary specs first");
  }
  AxisDirection out;
  out.dimension = spec.name;
  out.method = method;
  out.normalized = model.normalized();
  const std::string context = model.name() + "/" + (spec.label.empty() ? spec.name : spec.label);

  switch (method) {
    case DirectionMethod::MeanPairDifference: {
      const Matrix diffs = pair_differences(spec, model, out, warnings);
      std::vector<double> v(model.dim(), 0.0);
      for (std::size_t i = 0; i < diffs.rows(); ++i) {
        const auto r = diffs.row(i);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += r[j];
      }
      for (double& x : v) x /= static_cast<double>(diffs.rows());
      require_nondegenerate(v, spec.name);
      out.vector = std::move(v);
      break;
    }
    case DirectionMethod::PrincipalComponent: {
      const Matrix diffs = pair_differences(spec, model, out, warnings);
      // Centering each pair on its midpoint leaves +/-(left - right)/2.
      Matrix centered;
      std::vector<double> half(model.dim()), neg(model.dim());
      for (std::size_t i = 0; i < diffs.rows(); ++i) {
        const auto r = diffs.row(i);
        for (std::size_t j = 0; j < half.size(); ++j) {
          half[j] = 0.5 * r[j];
          neg[j] = -half[j];
        }
        centered.append_row(half);
        centered.append_row(neg);
      }
      std::vector<double> v = first_principal_component(centered);
      // Orient toward the left pole.
      std::vector<std::string> ignored;
      const ResolvedPole left = resolve_pole(pole_words(spec, Pole::Left), model, ignored);
      const ResolvedPole right = resolve_pole(pole_words(spec, Pole::Right), model, ignored);
      const double left_proj = dot(centroid(left.vectors), v);
      const double right_proj = dot(centroid(right.vectors), v);
      if (left_proj < right_proj) {
        for (double& x : v) x = -x;
      }
      require_nondegenerate(v, spec.name);
      out.vector = std::move(v);
      break;
    }
    case DirectionMethod::Centroids:
    case DirectionMethod::WordSets: {
      ResolvedPole left = resolve_pole(pole_words(spec, Pole::Left), model, out.unresolved);
      ResolvedPole right = resolve_pole(pole_words(spec, Pole::Right), model, out.unresolved);
      if (left.words.empty() || right.words.empty()) {
        throw DegenerateError("dimension '" + spec.name + "': no resolvable words in " +
                              std::string(left.words.empty() ? "left" : "right") + " pole of model '" +
                              model.name() + "'");
      }
      out.left_used = left.words;
      out.right_used = right.words;
      if (method == DirectionMethod::Centroids) {
        std::vector<double> bl = centroid(left.vectors);
        std::vector<double> br = centroid(right.vectors);
        std::vector<double> v(bl.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = bl[j] - br[j];
        require_nondegenerate(v, spec.name);
        out.vector = std::move(v);
        out.left_centroid = std::move(bl);
        out.right_centroid = std::move(br);
      } else {
        out.left_vectors = std::move(left.vectors);
        out.right_vectors = std::move(right.vectors);
      }
      break;
    }
  }

  if (warnings) {
    for (const auto& w : out.unresolved) {
      warnings->add("pole-word-oov", "pole word '" + w + "' not in model; dropped", context);
    }
  }
  return out;
}

double position(std::span<const double> w, Measure measure, const AxisDirection& direction) {
  const PositionMeasureSpec& m = measure_spec(measure);
  if (direction.method != m.direction) {
    throw Error(std::string("measure ") + std::string(m.name) + " needs a " +
                std::string(to_string(m.direction)) + " direction, got " +
                std::string(to_string(direction.method)));
  }
  switch (measure) {
    case Measure::Ethayarajh:
    case Measure::EthayarajhGarg:
    case Measure::EthayarajhKozlowski: {
      const auto& b = *direction.vector;
      return dot(w, b) / norm(b);
    }
    case Measure::Kozlowski:
    case Measure::Bolukbasi: {
      const auto& b = *direction.vector;
      const double wn = norm(w);
      if (wn == 0.0) throw DegenerateError("cosine with a zero vector");
      return dot(w, b) / (norm(b) * wn);
    }
    case Measure::Garg:
      return distance(w, *direction.right_centroid) - distance(w, *direction.left_centroid);
    case Measure::Swinger: {
      const double wn = norm(w);
      if (wn == 0.0) throw DegenerateError("cosine with a zero vector");
      auto mean_cosine = [&](const Matrix& pole) {
        double total = 0.0;
        for (std::size_t i = 0; i < pole.rows(); ++i) {
          const auto p = pole.row(i);
          total += dot(w, p) / (wn * norm(p));
        }
        return total / static_cast<double>(pole.rows());
      };
      return mean_cosine(direction.left_vectors) - mean_cosine(direction.right_vectors);
    }
  }
  throw Error("unknown measure");
}

std::optional<double> score(std::string_view word, Measure measure,
                            const AxisDirection& direction, const EmbeddingModel& model) {
  const PositionMeasureSpec& m = measure_spec(measure);
  if (model.normalized() != m.requires_normalized) {
    throw Error(std::string("measure ") + std::string(m.name) + " requires " +
                (m.requires_normalized ? "a unit-normalized" : "an unnormalized") +
                " model; '" + model.name() + "' is " +
                (model.normalized() ? "normalized" : "unnormalized"));
  }
  if (direction.normalized != model.normalized()) {
    throw Error("direction for '" + direction.dimension +
                "' was built from a model in a different normalization state");
  }
  const LookupResult hit = model.lookup(word);
  if (!hit.vector) return std::nullopt;
  return position(hit.vector->values, measure, direction);
}

std::optional<double> swinger_score(std::string_view word, const DimensionSpec& spec,
                                    const EmbeddingModel& model) {
  const AxisDirection sets = build_direction(spec, DirectionMethod::WordSets, model);
  return score(word, Measure::Swinger, sets, model);
}

std::vector<DimensionSpec> resolve_multiclass(const DimensionSpec& spec, Measure measure) {
  if (!spec.multiclass) throw Error("dimension '" + spec.name + "' is not multiclass");
  spec.validate();
  const Multiclass& mc = *spec.multiclass;
  auto find = [&](const std::string& name) -> const MulticlassCategory& {
    for (const auto& c : mc.categories) {
      if (c.name == name) return c;
    }
    throw Error("dimension '" + spec.name + "': category '" + name + "' not defined");
  };
  const MulticlassCategory& fallback = find(mc.default_category);
  const MulticlassCategory& contrast = find(mc.contrast_category);

  std::vector<DimensionSpec> out;
  for (const auto& category : mc.categories) {
    DimensionSpec binary;
    binary.name = category.name;
    binary.source = spec.source;
    binary.high_pole = Pole::Left;
    binary.left_words = category.words;
    if (measure_spec(measure).multiclass_native) {
      std::unordered_set<std::string> seen(category.words.begin(), category.words.end());
      for (const auto& other : mc.categories) {
        if (other.name == category.name) continue;
        for (const auto& w : other.words) {
          if (seen.insert(w).second) binary.right_words.push_back(w);
        }
      }
      binary.label = category.name + "-vs-rest";
    } else {
      const MulticlassCategory& against = category.name == fallback.name ? contrast : fallback;
      binary.right_words = against.words;
      binary.label = category.name + "-vs-" + against.name;
    }
    out.push_back(std::move(binary));
  }
  return out;
}

}  // namespace semdim
