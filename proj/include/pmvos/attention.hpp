#pragma once

// Dual self-attention over a stack of similarity maps.
//
// No learned projections: queries, keys and values are the raw maps. The
// spatial branch treats the stack as HW points with n features each and mixes
// positions through the HW x HW Gram matrix; the channel branch treats it as n
// points with HW features each and mixes maps through the n x n Gram matrix.
// Both use a row softmax and a scalar residual weight.

#include <array>
#include <vector>

#include "pmvos/grid.hpp"
#include "pmvos/matching.hpp"

namespace pmvos {

struct AttentionGammas {
  double spatial = 1.0;
  double channel = 1.0;
};

/// Per class, the 2n x H x W concatenation [spatial result ; channel result].
struct AttentionOutput {
  std::array<FeatureGrid, 2> per_class;
  AttentionGammas gammas;
};

/// gamma * reshape(A F) + stack, A = rowsoftmax(F F^T), F = stack as HW x n.
FeatureGrid spatial_attention(const FeatureGrid& stack, double gamma);

/// gamma * reshape(B G) + stack, B = rowsoftmax(G G^T), G = stack as n x HW.
FeatureGrid channel_attention(const FeatureGrid& stack, double gamma);

/// Dense HW x HW spatial affinity (row-major). Quadratic memory; meant for
/// inspection and tests, the attention itself streams one row at a time.
std::vector<double> spatial_affinity(const FeatureGrid& stack);

/// Dense n x n channel affinity (row-major).
std::vector<double> channel_affinity(const FeatureGrid& stack);

/// Applies both branches to each class separately and concatenates them.
AttentionOutput attend(const SimilarityStack& stack, AttentionGammas gammas = {});

}  // namespace pmvos
