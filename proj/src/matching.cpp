#include "pmvos/matching.hpp"

#include <algorithm>

#include "pmvos/simd/kernels.hpp"

namespace pmvos {

std::string_view to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::medial: return "medial";
    case MatchKind::global: return "global";
    case MatchKind::local: return "local";
  }
  return "?";
}

std::vector<MatchKind> KindSet::ordered() const {
  std::vector<MatchKind> out;
  for (MatchKind k : {MatchKind::medial, MatchKind::global, MatchKind::local})
    if (contains(k)) out.push_back(k);
  return out;
}

ClassMaps match_grid(const FeatureGrid& input, const WeightedTemplate& tmpl) {
  require(input.normalized(), Errc::precondition, "match_grid expects pixel-normalized input");
  require(input.channels() == tmpl.channels(), Errc::invalid_argument,
          "input and template channel counts differ");
  const auto& k = simd::active();
  ClassMaps out;
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const FeatureGrid& y = tmpl.per_class[cls];
    FeatureGrid map(1, input.height(), input.width());
    k.max_dot(input.data().data(), input.pixels(), input.pixels(), y.data().data(), y.pixels(),
              y.pixels(), input.channels(), map.data().data());
    out[cls] = std::move(map);
  }
  return out;
}

ClassMaps match_vector(const FeatureGrid& input, const MedialTemplate& medial) {
  require(medial.initialized, Errc::precondition, "medial template is not initialized");
  require(input.normalized(), Errc::precondition, "match_vector expects pixel-normalized input");
  const auto& k = simd::active();
  ClassMaps out;
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const auto& v = medial.vectors[cls];
    require(v.size() == input.channels(), Errc::invalid_argument,
            "input and medial template channel counts differ");
    FeatureGrid map(1, input.height(), input.width());
    // A one-point template: the max over a single element is the dot product.
    k.max_dot(input.data().data(), input.pixels(), input.pixels(), v.data(), 1, 1,
              input.channels(), map.data().data());
    out[cls] = std::move(map);
  }
  return out;
}

SimilarityStack match_all(const FeatureGrid& input, const TemplateBank& bank, KindSet enabled) {
  require(!enabled.empty(), Errc::invalid_argument, "at least one matching kind must be enabled");
  const FeatureGrid normalized = input.normalized() ? input : l2_normalize_pixels(input);

  SimilarityStack stack;
  stack.kinds = enabled.ordered();
  const std::size_t n = stack.kinds.size();
  const std::size_t hw = normalized.pixels();
  for (auto& g : stack.per_class) g = FeatureGrid(n, normalized.height(), normalized.width());

  for (std::size_t i = 0; i < n; ++i) {
    ClassMaps maps;
    switch (stack.kinds[i]) {
      case MatchKind::medial: maps = match_vector(normalized, bank.medial); break;
      case MatchKind::global: maps = match_grid(normalized, bank.global); break;
      case MatchKind::local: maps = match_grid(normalized, bank.local); break;
    }
    for (std::size_t cls = 0; cls < 2; ++cls) {
      const auto src = maps[cls].plane(0);
      auto dst = stack.per_class[cls].plane(i);
      std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(hw), dst.begin());
    }
  }
  return stack;
}

}  // namespace pmvos
