#pragma once

// Per-class template features: probability-weighted feature grids for the
// global (first frame) and local (previous frame) templates, and a single
// exponentially averaged vector per class for the medial template.

#include <array>
#include <cstddef>
#include <vector>

#include "pmvos/grid.hpp"

namespace pmvos {

inline constexpr std::size_t kBackground = 0;
inline constexpr std::size_t kForeground = 1;

/// Default EMA rate for the medial template after the first frame.
inline constexpr double kDefaultMedialAlpha = 0.1;

using ClassVectors = std::array<std::vector<double>, 2>;

/// Y_k = X * m_k for k in {background, foreground}.
struct WeightedTemplate {
  std::array<FeatureGrid, 2> per_class;
  std::size_t source_frame = 0;

  std::size_t channels() const { return per_class[0].channels(); }
  std::size_t height() const { return per_class[0].height(); }
  std::size_t width() const { return per_class[0].width(); }

  friend bool operator==(const WeightedTemplate&, const WeightedTemplate&) = default;
};

struct MedialTemplate {
  ClassVectors vectors;
  double alpha = kDefaultMedialAlpha;
  bool initialized = false;

  friend bool operator==(const MedialTemplate&, const MedialTemplate&) = default;
};

struct TemplateBank {
  WeightedTemplate global;
  WeightedTemplate local;
  MedialTemplate medial;

  friend bool operator==(const TemplateBank&, const TemplateBank&) = default;
};

/// Builds Y_k(p) = m_k(p) * X(p). `probs` must be two-class and match the
/// feature grid's spatial size.
WeightedTemplate weighted_template(const FeatureGrid& features, const ProbabilityField& probs,
                                   std::size_t source_frame = 0);

/// Probability-weighted spatial mean of each class: sum_p Y_k(p) / sum_p m_k(p).
/// A class whose total probability is below 1e-12 yields the zero vector.
ClassVectors medial_summary(const WeightedTemplate& tmpl, const ProbabilityField& probs);

/// One EMA step. An uninitialized state (or frame 0) is replaced outright
/// (rate 1); afterwards v <- (1 - alpha) v + alpha * summary.
MedialTemplate medial_update(const MedialTemplate& state, const ClassVectors& summary,
                             std::size_t frame_index);

}  // namespace pmvos
