#pragma once

// Brute-force reference implementations used to check the production paths.
//
// These deliberately share nothing with the production code beyond the plain
// data types: no kernels, no helpers. Accumulation is done in long double
// where the production code uses double.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmvos/grid.hpp"
#include "pmvos/metrics.hpp"
#include "pmvos/templates.hpp"

namespace pmvos::oracle {

/// out[k][p] = max over template pixels q of sum_c input(c,p) * Y_k(c,q),
/// evaluated as an explicit triple loop in natural order.
std::array<std::vector<double>, 2> match(const FeatureGrid& input, const WeightedTemplate& tmpl);

enum class AttentionKind { spatial, channel };

struct AttentionResult {
  std::vector<double> output;    // n x H x W, same layout as the stack
  std::vector<double> affinity;  // HW x HW or n x n, row-major
};

/// Dense Gram matrix, row softmax, product and residual.
AttentionResult attention(const FeatureGrid& stack, double gamma, AttentionKind kind);

/// Boundary F from a maximum-cardinality one-to-one matching between the two
/// boundary pixel sets (edges join pixels within Euclidean distance
/// `tolerance`), found with augmenting paths. Intended for small masks.
double boundary_f(const LabelMask& pred, const LabelMask& gt, std::uint8_t object_id,
                  std::size_t tolerance);

/// Closed form of the medial EMA after consuming summaries[0..n-1], the first
/// one with rate 1: weight (1-a)^(n-1) on summaries[0] and
/// a (1-a)^(n-1-j) on summaries[j], j >= 1.
std::vector<double> ema(const std::vector<std::vector<double>>& summaries, double alpha);

}  // namespace pmvos::oracle
