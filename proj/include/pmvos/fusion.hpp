#pragma once

// Per-pixel linear fusion head. For class k with channel features f_k(p) and
// previous-frame probability prev_k(p):
//
//   logit_k(p) = w_k . [f_k(p) ; prev_k(p)] + b_k
//
// followed by a two-class softmax. Small enough that its loss gradient can be
// written by hand and checked against finite differences.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmvos/grid.hpp"

namespace pmvos {

/// Weight on the previous-mask channel in default_fusion_params().
inline constexpr double kDefaultPrevMaskWeight = 0.5;

struct FusionParams {
  /// weights[k] has D entries: one per feature channel, then the previous mask.
  std::array<std::vector<double>, 2> weights;
  std::array<double, 2> bias{0.0, 0.0};

  std::size_t input_width() const { return weights[0].size(); }

  friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

/// Per-class feature channels fed to the head (n similarity maps, or 2n
/// attention channels).
using ClassFeatures = std::array<FeatureGrid, 2>;

/// +1 on every feature channel of the class, kDefaultPrevMaskWeight on the
/// previous mask of the class, zero bias.
FusionParams default_fusion_params(std::size_t feature_channels,
                                   double prev_weight = kDefaultPrevMaskWeight);

/// Returns 2 x H x W logits.
FeatureGrid fuse(const ClassFeatures& features, const ProbabilityField& prev_mask,
                 const FusionParams& params);

/// Mean over pixels of -sum_k t_k log softmax(logits)_k.
double cross_entropy(const FeatureGrid& logits, const ProbabilityField& target);

/// d cross_entropy(fuse(...)) / d params, via dL/dlogit = (softmax - target) / N.
FusionParams gradient(const ClassFeatures& features, const ProbabilityField& prev_mask,
                      const ProbabilityField& target, const FusionParams& params);

/// Central-difference gradient of the same loss. Each parameter is perturbed
/// by +-h.
FusionParams numeric_gradient(const ClassFeatures& features, const ProbabilityField& prev_mask,
                              const ProbabilityField& target, const FusionParams& params,
                              double h);

/// Builds a seeded random instance and returns
///   max |g_a - g_fd| / max(1e-8, |g_a| + |g_fd|)
/// over all parameters.
double grad_check(std::uint64_t seed, double h = 1e-5);

struct FitOptions {
  std::size_t steps = 200;
  double learning_rate = 0.5;
};

/// Plain gradient descent on the cross-entropy, starting from `initial`.
FusionParams fit_fusion(const ClassFeatures& features, const ProbabilityField& prev_mask,
                        const ProbabilityField& target, FusionParams initial,
                        FitOptions options = {});

}  // namespace pmvos
