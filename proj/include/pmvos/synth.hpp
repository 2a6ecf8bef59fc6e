#pragma once

// Deterministic synthetic sequences: disks with fixed feature signatures
// moving linearly over a background signature, with uniform per-component
// noise before per-pixel normalization. Objects later in the list are drawn
// on top of earlier ones, which is how occlusions are staged.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmvos/grid.hpp"
#include "pmvos/metrics.hpp"

namespace pmvos {

struct SynthObject {
  double x = 0.0;  // centre at frame 0 (column)
  double y = 0.0;  // centre at frame 0 (row)
  double vx = 0.0;  // px / frame
  double vy = 0.0;
  double radius = 1.0;
  /// Empty: drawn from the seed.
  std::vector<double> signature;
};

struct SynthSpec {
  std::size_t height = 24;
  std::size_t width = 24;
  std::size_t channels = 8;
  std::size_t frames = 10;
  std::vector<SynthObject> objects;
  /// Empty: drawn from the seed.
  std::vector<double> background;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

/// Minimum angle between any two signatures (objects and background).
inline constexpr double kMinSignatureAngleDeg = 15.0;

struct SynthSequence {
  std::vector<FeatureGrid> frames;
  std::vector<LabelMask> masks;
  /// Unit signatures actually used: background first, then objects in order.
  std::vector<std::vector<double>> signatures;
};

/// Throws invalid_argument if the spec violates the signature angle or
/// in-bounds trajectory constraints.
SynthSequence gen_sequence(const SynthSpec& spec);

/// Seeded suite of two-object sequences. Object 1 is the target and drifts
/// horizontally; object 2 is a smaller disk drawn on top of it that crosses
/// the target once, mid-sequence. Signatures come from each spec's seed.
std::vector<SynthSpec> occlusion_suite(std::uint64_t seed, std::size_t sequences, double noise,
                                       std::size_t frames = 10);

}  // namespace pmvos
