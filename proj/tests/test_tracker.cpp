#include <gtest/gtest.h>

#include "pmvos/io.hpp"
#include "pmvos/synth.hpp"
#include "pmvos/tracker.hpp"
#include "support.hpp"

namespace pmvos {
namespace {

using test::random_grid;

SynthSpec blob_spec(double noise, std::uint64_t seed, std::size_t frames = 10) {
  SynthSpec s;
  s.height = 16;
  s.width = 16;
  s.channels = 6;
  s.frames = frames;
  s.noise = noise;
  s.seed = seed;
  SynthObject o;
  o.x = 5;
  o.y = 8;
  o.vx = 0.6;
  o.radius = 3;
  s.objects = {o};
  return s;
}

ProbabilityField object_field(const LabelMask& m, std::uint8_t id = 1) {
  return per_object_fields(m, id)[id - 1];
}

TEST(Mode, ParseAndWidths) {
  EXPECT_EQ(parse_mode("GLMA"), TrackerMode::GLMA);
  EXPECT_THROW(parse_mode("LM"), Error);
  const std::size_t sizes[] = {1, 2, 3, 3};
  const TrackerMode modes[] = {TrackerMode::G, TrackerMode::GL, TrackerMode::GLM, TrackerMode::GLMA};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(enabled_kinds(modes[i]).size(), sizes[i]);
    EXPECT_TRUE(enabled_kinds(modes[i]).contains(MatchKind::global));
  }
  EXPECT_EQ(fusion_feature_channels(TrackerMode::GLMA) + 1, 7u);
  EXPECT_EQ(fusion_feature_channels(TrackerMode::GLM) + 1, 4u);
}

TEST(Init, Contract) {
  const SynthSequence seq = gen_sequence(blob_spec(0.1, 3));
  const TrackerState st = tracker_init(seq.frames[0], object_field(seq.masks[0]), TrackerConfig{});
  EXPECT_EQ(st.frame_index, 0u);
  EXPECT_EQ(st.bank.local, st.bank.global);
  EXPECT_EQ(st.bank.global.source_frame, 0u);
  EXPECT_TRUE(st.bank.medial.initialized);
  EXPECT_EQ(st.prev_probs, object_field(seq.masks[0]));
}

TEST(Init, MedialForegroundIsMeanOfForegroundPixels) {
  Rng rng(101);
  const FeatureGrid raw = random_grid(rng, 4, 3, 3);
  LabelMask m(3, 3);
  m.at(0, 1) = m.at(1, 1) = m.at(2, 2) = 1;
  const TrackerState st = tracker_init(raw, object_field(m), TrackerConfig{});
  const FeatureGrid x = l2_normalize_pixels(raw);
  for (std::size_t c = 0; c < 4; ++c) {
    const double want = (x.at(c, 0, 1) + x.at(c, 1, 1) + x.at(c, 2, 2)) / 3.0;
    EXPECT_NEAR(st.bank.medial.vectors[kForeground][c], want, 1e-12);
  }
}

TEST(Init, EmptyTarget) {
  Rng rng(102);
  try {
    tracker_init(random_grid(rng, 3, 4, 4), test::constant_field(4, 4, 0.0), TrackerConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_target);
  }
}

TEST(Init, DownsamplesMask) {
  Rng rng(103);
  LabelMask big(8, 8);
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 0; x < 4; ++x) big.at(y, x) = 1;
  const TrackerState st = tracker_init(random_grid(rng, 3, 4, 4), object_field(big), TrackerConfig{});
  EXPECT_EQ(st.prev_probs.height(), 4u);
  EXPECT_EQ(st.prev_probs.at(1, 0, 0), 1.0);
  EXPECT_EQ(st.prev_probs.at(1, 3, 3), 0.0);
}

TEST(Init, ProvidedFusionWidthChecked) {
  const SynthSequence seq = gen_sequence(blob_spec(0.0, 4, 2));
  TrackerConfig cfg;
  cfg.mode = TrackerMode::GLMA;
  cfg.fusion_source = FusionSource::provided;
  cfg.fusion = default_fusion_params(3);
  EXPECT_THROW(tracker_init(seq.frames[0], object_field(seq.masks[0]), cfg), Error);
  cfg.fusion = default_fusion_params(6);
  EXPECT_NO_THROW(tracker_init(seq.frames[0], object_field(seq.masks[0]), cfg));
}

TEST(Step, StaticSequenceKeepsObject) {
  const SynthSequence seq = gen_sequence(blob_spec(0.2, 5, 1));
  const ProbabilityField gt = object_field(seq.masks[0]);
  for (TrackerMode mode : {TrackerMode::G, TrackerMode::GL, TrackerMode::GLM, TrackerMode::GLMA}) {
    TrackerConfig cfg;
    cfg.mode = mode;
    const TrackerState st = tracker_init(seq.frames[0], gt, cfg);
    const StepResult r = tracker_step(st, seq.frames[0], cfg);
    const LabelMask pred = to_labels(r.mask);
    std::size_t covered = 0, total = 0;
    for (std::size_t p = 0; p < pred.labels.size(); ++p)
      if (seq.masks[0].labels[p] == 1) {
        ++total;
        covered += pred.labels[p] == 1;
      }
    EXPECT_GE(static_cast<double>(covered), 0.95 * static_cast<double>(total)) << to_string(mode);
    EXPECT_EQ(r.state.frame_index, 1u);
    EXPECT_EQ(r.state.bank.local.source_frame, 1u);
  }
}

TEST(Step, GlobalMapsAgreeAcrossModes) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 6, 2));
  const ProbabilityField gt = object_field(seq.masks[0]);
  TrackerConfig g, gl;
  g.mode = TrackerMode::G;
  gl.mode = TrackerMode::GL;
  StepTrace tg, tgl;
  tracker_step(tracker_init(seq.frames[0], gt, g), seq.frames[1], g, &tg);
  tracker_step(tracker_init(seq.frames[0], gt, gl), seq.frames[1], gl, &tgl);
  EXPECT_EQ(tg.stack.maps_per_class(), 1u);
  EXPECT_EQ(tgl.stack.maps_per_class(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto a = tg.stack.per_class[k].plane(0);
    const auto b = tgl.stack.per_class[k].plane(0);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(Step, AttentionWidensHeadInput) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 7, 2));
  TrackerConfig cfg;
  cfg.mode = TrackerMode::GLMA;
  StepTrace trace;
  tracker_step(tracker_init(seq.frames[0], object_field(seq.masks[0]), cfg), seq.frames[1], cfg, &trace);
  EXPECT_EQ(trace.stack.maps_per_class(), 3u);
  EXPECT_EQ(trace.head_input[1].channels(), 6u);
  EXPECT_EQ(trace.logits.channels(), 2u);
}

TEST(Step, GlobalTemplateNeverChanges) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 8));
  TrackerConfig cfg;
  cfg.mode = TrackerMode::GLMA;
  TrackerState st = tracker_init(seq.frames[0], object_field(seq.masks[0]), cfg);
  const WeightedTemplate global = st.bank.global;
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    st = tracker_step(st, seq.frames[i], cfg).state;
    EXPECT_EQ(st.bank.global, global);
    EXPECT_EQ(st.frame_index, i);
    EXPECT_EQ(st.bank.local.source_frame, i);
  }
}

TEST(Step, MedialConvergesUnderConstantSummary) {
  MedialTemplate m;
  m.alpha = 0.1;
  m = medial_update(m, {std::vector{5.0, -2.0}, std::vector{-1.0, 3.0}}, 0);
  const ClassVectors s = {std::vector{0.25, 0.5}, std::vector{0.75, -0.5}};
  for (std::size_t i = 1; i <= 200; ++i) m = medial_update(m, s, i);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(m.vectors[k][c], s[k][c], 1e-6);
}

TEST(Step, ResolutionChangeRejected) {
  Rng rng(104);
  const TrackerState st =
      tracker_init(random_grid(rng, 3, 4, 4), test::constant_field(4, 4, 0.5), TrackerConfig{});
  EXPECT_THROW(tracker_step(st, random_grid(rng, 3, 5, 4), TrackerConfig{}), Error);
}

TEST(Step, MarkovReplayFromSerializedState) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 9));
  for (TrackerMode mode : {TrackerMode::GLM, TrackerMode::GLMA}) {
    TrackerConfig cfg;
    cfg.mode = mode;
    TrackerState st = tracker_init(seq.frames[0], object_field(seq.masks[0]), cfg);
    for (std::size_t i = 1; i < 5; ++i) st = tracker_step(st, seq.frames[i], cfg).state;
    TrackerState restored = io::decode_state(io::encode_state(st));
    ASSERT_EQ(restored, st);
    for (std::size_t i = 5; i < seq.frames.size(); ++i) {
      StepResult a = tracker_step(st, seq.frames[i], cfg);
      StepResult b = tracker_step(restored, seq.frames[i], cfg);
      EXPECT_EQ(a.mask, b.mask);
      st = std::move(a.state);
      restored = std::move(b.state);
    }
  }
}

TEST(RunSequence, SingleFrameEchoesGroundTruth) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 10, 1));
  const ProbabilityField gt = object_field(seq.masks[0]);
  const auto out = run_sequence(seq.frames, gt, TrackerConfig{});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], gt);
}

TEST(RunSequence, EmptyRejected) {
  EXPECT_THROW(run_sequence({}, test::constant_field(2, 2, 1.0), TrackerConfig{}), Error);
}

TEST(RunSequence, Deterministic) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 11));
  TrackerConfig cfg;
  cfg.mode = TrackerMode::GLMA;
  cfg.fusion_source = FusionSource::first_frame_fit;
  const auto a = run_sequence(seq.frames, object_field(seq.masks[0]), cfg);
  const auto b = run_sequence(seq.frames, object_field(seq.masks[0]), cfg);
  EXPECT_EQ(a, b);
}

double mean_j(const SynthSequence& seq, TrackerMode mode) {
  TrackerConfig cfg;
  cfg.mode = mode;
  const auto out = run_sequence(seq.frames, object_field(seq.masks[0]), cfg);
  double sum = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) sum += region_j(to_labels(out[i]), seq.masks[i], 1);
  return sum / static_cast<double>(out.size() - 1);
}

// Frozen from the first run: translating blob, no distractors.
TEST(RunSequence, TranslatingBlobMedialNotWorseThanGlobal) {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const SynthSequence seq = gen_sequence(blob_spec(0.3, seed));
    EXPECT_GE(mean_j(seq, TrackerMode::GLM), mean_j(seq, TrackerMode::G)) << "seed " << seed;
  }
}

TEST(Labels, ThresholdAndCombination) {
  const ProbabilityField a = ProbabilityField::from_foreground(1, 4, std::vector{0.4, 0.5, 0.9, 0.6});
  const ProbabilityField b = ProbabilityField::from_foreground(1, 4, std::vector{0.4, 0.2, 0.9, 0.7});
  EXPECT_EQ(to_labels(a).labels, (std::vector<std::uint8_t>{0, 1, 1, 1}));
  EXPECT_EQ(combine_objects({&a, &b}).labels, (std::vector<std::uint8_t>{0, 1, 1, 2}));
}

TEST(MultiObject, SingleObjectMatchesRunSequence) {
  const SynthSequence seq = gen_sequence(blob_spec(0.3, 12));
  const ProbabilityField gt = object_field(seq.masks[0]);
  const auto single = run_sequence(seq.frames, gt, TrackerConfig{});
  const auto multi = run_multiobject(seq.frames, {gt}, TrackerConfig{});
  ASSERT_EQ(multi.size(), single.size());
  for (std::size_t i = 0; i < single.size(); ++i) EXPECT_EQ(multi[i], to_labels(single[i]));
}

TEST(MultiObject, TwoStaticObjects) {
  SynthSpec s = blob_spec(0.1, 13, 2);
  SynthObject a, b;
  a.x = 4;
  a.y = 4;
  a.radius = 3;
  b.x = 11;
  b.y = 11;
  b.radius = 3;
  s.objects = {a, b};
  const SynthSequence seq = gen_sequence(s);
  const auto fields = per_object_fields(seq.masks[0], 2);
  const auto out = run_multiobject(seq.frames, fields, TrackerConfig{});
  EXPECT_GE(region_j(out[1], seq.masks[1], 1), 0.95);
  EXPECT_GE(region_j(out[1], seq.masks[1], 2), 0.95);
}

TEST(MultiObject, OverlapRejected) {
  const SynthSequence seq = gen_sequence(blob_spec(0.0, 14, 2));
  const ProbabilityField gt = object_field(seq.masks[0]);
  try {
    run_multiobject(seq.frames, {gt, gt}, TrackerConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
  }
}

TEST(Upsample, NearestLabels) {
  LabelMask m(2, 2, {1, 0, 0, 2});
  const LabelMask u = upsample_labels(m, 4, 4);
  EXPECT_EQ(u.at(0, 0), 1);
  EXPECT_EQ(u.at(1, 1), 1);
  EXPECT_EQ(u.at(0, 2), 0);
  EXPECT_EQ(u.at(3, 3), 2);
  EXPECT_EQ(upsample_labels(m, 2, 2), m);
}

}  // namespace
}  // namespace pmvos
