#pragma once

// Randomized equivalence suites: each pits a production path against its
// brute-force oracle over seeded instances and reports the worst deviation.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pmvos::selfcheck {

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Largest observed deviation (or the failing count, for counting checks).
  double worst = 0.0;
  double seconds = 0.0;
  std::string detail;
};

/// match_grid vs the triple-loop oracle; C <= 8, grids <= 8x8.
CheckResult matching(std::size_t instances, std::uint64_t seed, double tolerance);

/// Spatial and channel attention vs the dense oracle; n in {1,2,3}, grids
/// <= 6x6. Also checks that both affinity matrices are row-stochastic.
CheckResult attention(std::size_t instances, std::uint64_t seed, double tolerance);

/// Y_0 + Y_1 == X for random features and probabilities.
CheckResult completeness(std::size_t instances, std::uint64_t seed, double tolerance);

/// Medial EMA after 1..max_updates steps vs the closed form for each alpha,
/// plus the exact frame-0 and alpha = 1 replacement cases.
CheckResult ema(const std::vector<double>& alphas, std::size_t max_updates, std::uint64_t seed,
                double tolerance);

/// Analytic fusion-head gradient vs central differences for seeds
/// [first_seed, first_seed + seeds).
CheckResult gradients(std::size_t seeds, std::uint64_t first_seed, double h, double tolerance);

/// Dilation boundary F vs the one-to-one bipartite oracle on random masks up
/// to 8x8 at one tolerance. `worst` is the largest |difference|; detail
/// reports how many masks disagree.
CheckResult boundary(std::size_t instances, std::uint64_t seed, std::size_t tolerance_px,
                     double tolerance);

/// Region J hand cases: identity, disjoint, and the 2/6 partial overlap.
CheckResult region_cases();

}  // namespace pmvos::selfcheck
