#include "pmvos/templates.hpp"

#include <string>

namespace pmvos {

WeightedTemplate weighted_template(const FeatureGrid& features, const ProbabilityField& probs,
                                   std::size_t source_frame) {
  require(probs.classes() == 2, Errc::invalid_argument,
          "weighted template needs a two-class probability field");
  require(probs.height() == features.height() && probs.width() == features.width(),
          Errc::invalid_argument,
          "probability field " + std::to_string(probs.height()) + "x" +
              std::to_string(probs.width()) + " does not match features " +
              std::to_string(features.height()) + "x" + std::to_string(features.width()));

  WeightedTemplate out;
  out.source_frame = source_frame;
  const std::size_t n = features.pixels();
  for (std::size_t k = 0; k < 2; ++k) {
    FeatureGrid y = features;
    const auto m = probs.plane(k);
    for (std::size_t c = 0; c < y.channels(); ++c) {
      auto row = y.plane(c);
      for (std::size_t p = 0; p < n; ++p) row[p] *= m[p];
    }
    // Weighted vectors are no longer unit length.
    y.set_normalized(false);
    out.per_class[k] = std::move(y);
  }
  return out;
}

ClassVectors medial_summary(const WeightedTemplate& tmpl, const ProbabilityField& probs) {
  require(probs.classes() == 2 && probs.height() == tmpl.height() && probs.width() == tmpl.width(),
          Errc::invalid_argument, "medial summary: probability field does not match template");
  ClassVectors out;
  for (std::size_t k = 0; k < 2; ++k) {
    const FeatureGrid& y = tmpl.per_class[k];
    double mass = 0.0;
    for (double m : probs.plane(k)) mass += m;
    out[k].assign(y.channels(), 0.0);
    if (mass < 1e-12) continue;
    for (std::size_t c = 0; c < y.channels(); ++c) {
      double s = 0.0;
      for (double v : y.plane(c)) s += v;
      out[k][c] = s / mass;
    }
  }
  return out;
}

MedialTemplate medial_update(const MedialTemplate& state, const ClassVectors& summary,
                             std::size_t frame_index) {
  for (const auto& v : summary) require_finite(v, "medial summary");
  require(state.alpha > 0.0 && state.alpha <= 1.0, Errc::invalid_argument,
          "medial alpha must lie in (0, 1]");

  MedialTemplate next = state;
  if (!state.initialized || frame_index == 0) {
    next.vectors = summary;
    next.initialized = true;
    return next;
  }
  const double a = state.alpha;
  for (std::size_t k = 0; k < 2; ++k) {
    require(summary[k].size() == state.vectors[k].size(), Errc::invalid_argument,
            "medial summary channel count changed between frames");
    for (std::size_t c = 0; c < summary[k].size(); ++c)
      next.vectors[k][c] = (1.0 - a) * state.vectors[k][c] + a * summary[k][c];
  }
  return next;
}

}  // namespace pmvos
