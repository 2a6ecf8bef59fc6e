#pragma once

// Frame-sequential mask propagation.
//
// Frame 0 seeds the global template from the given mask. Every later frame is
// matched against the enabled templates, optionally passed through attention,
// fused with the previous prediction and turned into a two-class probability
// field. That prediction then rebuilds the local template and feeds one EMA
// step of the medial template. The global template never changes.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pmvos/attention.hpp"
#include "pmvos/fusion.hpp"
#include "pmvos/grid.hpp"
#include "pmvos/matching.hpp"
#include "pmvos/metrics.hpp"
#include "pmvos/templates.hpp"

namespace pmvos {

/// Ablation configurations: global; + local; + medial; + attention.
enum class TrackerMode { G, GL, GLM, GLMA };

std::string_view to_string(TrackerMode mode);
TrackerMode parse_mode(std::string_view text);

KindSet enabled_kinds(TrackerMode mode);
bool uses_attention(TrackerMode mode);

/// Feature channels per class entering the fusion head (excluding the
/// previous-mask channel).
std::size_t fusion_feature_channels(TrackerMode mode);

enum class FusionSource { defaults, first_frame_fit, provided };

struct TrackerConfig {
  TrackerMode mode = TrackerMode::GLM;
  double alpha = kDefaultMedialAlpha;
  AttentionGammas gammas;
  FusionSource fusion_source = FusionSource::defaults;
  /// Used when fusion_source == provided.
  std::optional<FusionParams> fusion;
  FitOptions fit;
};

struct TrackerState {
  TemplateBank bank;
  ProbabilityField prev_probs;
  std::size_t frame_index = 0;
  FusionParams fusion;

  friend bool operator==(const TrackerState&, const TrackerState&) = default;
};

/// `gt_mask_0` may be at any resolution; it is area-resampled to the feature
/// grid. Throws empty_target when the resampled mask has no foreground mass.
TrackerState tracker_init(const FeatureGrid& features_0, const ProbabilityField& gt_mask_0,
                          const TrackerConfig& config);

struct StepResult {
  ProbabilityField mask;
  TrackerState state;
};

/// Everything the head saw for one frame; exposed for inspection.
struct StepTrace {
  SimilarityStack stack;
  ClassFeatures head_input;
  FeatureGrid logits;
};

StepResult tracker_step(const TrackerState& state, const FeatureGrid& features,
                        const TrackerConfig& config, StepTrace* trace = nullptr);

/// masks[0] is gt_mask_0 as given; masks[i] comes from the i-th step.
std::vector<ProbabilityField> run_sequence(const std::vector<FeatureGrid>& frames,
                                           const ProbabilityField& gt_mask_0,
                                           const TrackerConfig& config);

/// Foreground label (1) where the foreground probability is >= 0.5.
LabelMask to_labels(const ProbabilityField& probs);

/// Per-pixel label from per-object probability fields (same resolution):
/// highest foreground probability wins, lowest index on ties, background when
/// every object is below 0.5.
LabelMask combine_objects(const std::vector<const ProbabilityField*>& objects);

/// One independent tracker per object. Per pixel the label is the object with
/// the highest foreground probability (lowest index wins ties), or background
/// when every object's foreground probability is below 0.5. Frame 0 echoes the
/// initial masks. Throws invalid_argument if two initial masks claim the same
/// pixel (foreground >= 0.5 in both).
std::vector<LabelMask> run_multiobject(const std::vector<FeatureGrid>& frames,
                                       const std::vector<ProbabilityField>& gt_masks_0,
                                       const TrackerConfig& config);

/// Splits a label mask into one hard two-class field per object 1..count.
std::vector<ProbabilityField> per_object_fields(const LabelMask& labels, std::size_t count);

/// Nearest-neighbour resampling of a label field.
LabelMask upsample_labels(const LabelMask& labels, std::size_t height, std::size_t width);

}  // namespace pmvos
