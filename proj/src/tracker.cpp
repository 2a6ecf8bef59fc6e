#include "pmvos/tracker.hpp"

#include <string>

namespace pmvos {

std::string_view to_string(TrackerMode mode) {
  switch (mode) {
    case TrackerMode::G: return "G";
    case TrackerMode::GL: return "GL";
    case TrackerMode::GLM: return "GLM";
    case TrackerMode::GLMA: return "GLMA";
  }
  return "?";
}

TrackerMode parse_mode(std::string_view text) {
  if (text == "G") return TrackerMode::G;
  if (text == "GL") return TrackerMode::GL;
  if (text == "GLM") return TrackerMode::GLM;
  if (text == "GLMA") return TrackerMode::GLMA;
  fail(Errc::invalid_argument, "unknown tracker mode '" + std::string(text) + "'");
}

KindSet enabled_kinds(TrackerMode mode) {
  switch (mode) {
    case TrackerMode::G: return {MatchKind::global};
    case TrackerMode::GL: return {MatchKind::global, MatchKind::local};
    case TrackerMode::GLM:
    case TrackerMode::GLMA: return {MatchKind::medial, MatchKind::global, MatchKind::local};
  }
  return {};
}

bool uses_attention(TrackerMode mode) { return mode == TrackerMode::GLMA; }

std::size_t fusion_feature_channels(TrackerMode mode) {
  const std::size_t n = enabled_kinds(mode).size();
  return uses_attention(mode) ? 2 * n : n;
}

namespace {

void check_config(const TrackerConfig& config) {
  require(config.alpha > 0.0 && config.alpha <= 1.0, Errc::invalid_argument,
          "alpha must lie in (0, 1]");
}

ClassFeatures head_input(const SimilarityStack& stack, const TrackerConfig& config) {
  if (uses_attention(config.mode)) return attend(stack, config.gammas).per_class;
  return stack.per_class;
}

}  // namespace

TrackerState tracker_init(const FeatureGrid& features_0, const ProbabilityField& gt_mask_0,
                          const TrackerConfig& config) {
  check_config(config);
  validate(gt_mask_0);
  require(gt_mask_0.classes() == 2, Errc::invalid_argument, "initial mask must be two-class");

  const FeatureGrid x = l2_normalize_pixels(features_0);
  const ProbabilityField m = resize_probability(gt_mask_0, x.height(), x.width());
  double fg_mass = 0.0;
  for (double v : m.plane(kForeground)) fg_mass += v;
  require(fg_mass >= 1e-12, Errc::empty_target, "initial mask has no foreground");

  TrackerState state;
  state.bank.global = weighted_template(x, m, 0);
  state.bank.local = state.bank.global;
  MedialTemplate medial;
  medial.alpha = config.alpha;
  state.bank.medial = medial_update(medial, medial_summary(state.bank.global, m), 0);
  state.prev_probs = m;
  state.frame_index = 0;

  const std::size_t width = fusion_feature_channels(config.mode);
  switch (config.fusion_source) {
    case FusionSource::defaults:
      state.fusion = default_fusion_params(width);
      break;
    case FusionSource::provided:
      require(config.fusion.has_value(), Errc::invalid_argument,
              "fusion source 'provided' needs parameters");
      require(config.fusion->weights[0].size() == width + 1 &&
                  config.fusion->weights[1].size() == width + 1,
              Errc::invalid_argument,
              "fusion parameters have " + std::to_string(config.fusion->weights[0].size()) +
                  " weights per class; mode " + std::string(to_string(config.mode)) + " needs " +
                  std::to_string(width + 1));
      state.fusion = *config.fusion;
      break;
    case FusionSource::first_frame_fit: {
      // Frame 0 against its own templates, with an uninformative previous mask
      // so the fit has to explain the mask from similarity evidence.
      const SimilarityStack stack = match_all(x, state.bank, enabled_kinds(config.mode));
      const ProbabilityField neutral = ProbabilityField::uniform(2, x.height(), x.width());
      state.fusion = fit_fusion(head_input(stack, config), neutral, m,
                                default_fusion_params(width), config.fit);
      break;
    }
  }
  return state;
}

StepResult tracker_step(const TrackerState& state, const FeatureGrid& features,
                        const TrackerConfig& config, StepTrace* trace) {
  check_config(config);
  const FeatureGrid x = l2_normalize_pixels(features);
  require(x.height() == state.prev_probs.height() && x.width() == state.prev_probs.width(),
          Errc::invalid_argument, "frame resolution changed mid-sequence");

  SimilarityStack stack = match_all(x, state.bank, enabled_kinds(config.mode));
  ClassFeatures input = head_input(stack, config);
  FeatureGrid logits = fuse(input, state.prev_probs, state.fusion);
  ProbabilityField mask = softmax_channels(logits);

  TrackerState next = state;
  next.frame_index = state.frame_index + 1;
  next.bank.local = weighted_template(x, mask, next.frame_index);
  MedialTemplate medial = state.bank.medial;
  medial.alpha = config.alpha;
  next.bank.medial = medial_update(medial, medial_summary(next.bank.local, mask), next.frame_index);
  next.prev_probs = mask;

  if (trace) {
    trace->stack = std::move(stack);
    trace->head_input = std::move(input);
    trace->logits = std::move(logits);
  }
  return {std::move(mask), std::move(next)};
}

std::vector<ProbabilityField> run_sequence(const std::vector<FeatureGrid>& frames,
                                           const ProbabilityField& gt_mask_0,
                                           const TrackerConfig& config) {
  require(!frames.empty(), Errc::invalid_argument, "sequence has no frames");
  std::vector<ProbabilityField> masks;
  masks.reserve(frames.size());
  masks.push_back(gt_mask_0);
  TrackerState state = tracker_init(frames[0], gt_mask_0, config);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    StepResult r = tracker_step(state, frames[i], config);
    masks.push_back(std::move(r.mask));
    state = std::move(r.state);
  }
  return masks;
}

LabelMask to_labels(const ProbabilityField& probs) {
  LabelMask out(probs.height(), probs.width());
  const auto fg = probs.plane(kForeground);
  for (std::size_t p = 0; p < fg.size(); ++p) out.labels[p] = fg[p] >= 0.5 ? 1 : 0;
  return out;
}

LabelMask combine_objects(const std::vector<const ProbabilityField*>& objects) {
  require(!objects.empty(), Errc::invalid_argument, "no object fields to combine");
  const std::size_t h = objects[0]->height();
  const std::size_t w = objects[0]->width();
  for (const auto* f : objects)
    require(f->height() == h && f->width() == w, Errc::invalid_argument,
            "object fields differ in resolution");
  LabelMask labels(h, w);
  for (std::size_t p = 0; p < h * w; ++p) {
    double best = -1.0;
    std::size_t best_obj = 0;
    for (std::size_t o = 0; o < objects.size(); ++o) {
      const double v = objects[o]->plane(kForeground)[p];
      if (v > best) {
        best = v;
        best_obj = o;
      }
    }
    labels.labels[p] = best >= 0.5 ? static_cast<std::uint8_t>(best_obj + 1) : 0;
  }
  return labels;
}

std::vector<LabelMask> run_multiobject(const std::vector<FeatureGrid>& frames,
                                       const std::vector<ProbabilityField>& gt_masks_0,
                                       const TrackerConfig& config) {
  require(!frames.empty(), Errc::invalid_argument, "sequence has no frames");
  require(!gt_masks_0.empty() && gt_masks_0.size() < 256, Errc::invalid_argument,
          "need between 1 and 255 objects");
  const std::size_t h = gt_masks_0[0].height();
  const std::size_t w = gt_masks_0[0].width();
  for (const auto& m : gt_masks_0)
    require(m.classes() == 2 && m.height() == h && m.width() == w, Errc::invalid_argument,
            "initial object masks must be two-class and share one resolution");
  for (std::size_t p = 0; p < h * w; ++p) {
    std::size_t claims = 0;
    for (const auto& m : gt_masks_0) claims += m.plane(kForeground)[p] >= 0.5;
    require(claims <= 1, Errc::invalid_argument,
            "initial object masks overlap at pixel " + std::to_string(p));
  }

  std::vector<std::vector<ProbabilityField>> per_object;
  per_object.reserve(gt_masks_0.size());
  for (const auto& m : gt_masks_0) per_object.push_back(run_sequence(frames, m, config));

  std::vector<LabelMask> out;
  out.reserve(frames.size());
  std::vector<const ProbabilityField*> fields(per_object.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    for (std::size_t o = 0; o < per_object.size(); ++o) fields[o] = &per_object[o][i];
    out.push_back(combine_objects(fields));
  }
  return out;
}

std::vector<ProbabilityField> per_object_fields(const LabelMask& labels, std::size_t count) {
  std::vector<ProbabilityField> out;
  out.reserve(count);
  std::vector<double> fg(labels.labels.size());
  for (std::size_t obj = 1; obj <= count; ++obj) {
    for (std::size_t p = 0; p < fg.size(); ++p) fg[p] = labels.labels[p] == obj ? 1.0 : 0.0;
    out.push_back(ProbabilityField::from_foreground(labels.height, labels.width, fg));
  }
  return out;
}

LabelMask upsample_labels(const LabelMask& labels, std::size_t height, std::size_t width) {
  require(height > 0 && width > 0, Errc::invalid_argument, "target size must be positive");
  LabelMask out(height, width);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t sy = (2 * y + 1) * labels.height / (2 * height);
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t sx = (2 * x + 1) * labels.width / (2 * width);
      out.at(y, x) = labels.at(sy, sx);
    }
  }
  return out;
}

}  // namespace pmvos
