#include "pmvos/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pmvos/random.hpp"

namespace pmvos {

namespace {

constexpr double kGeneratedAngleDeg = 75.0;
constexpr int kMaxSignatureDraws = 100000;

std::vector<double> unit(std::vector<double> v, const char* what) {
  double s = 0.0;
  for (double x : v) s += x * x;
  require(std::isfinite(s) && s > 0.0, Errc::invalid_argument,
          std::string(what) + " signature must be finite and non-zero");
  const double inv = 1.0 / std::sqrt(s);
  for (double& x : v) x *= inv;
  return v;
}

double angle_deg(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return std::acos(std::clamp(d, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

bool far_from_all(const std::vector<double>& v, const std::vector<std::vector<double>>& others,
                  double min_deg) {
  for (const auto& o : others)
    if (angle_deg(v, o) < min_deg) return false;
  return true;
}

std::vector<double> draw_signature(Rng& rng, std::size_t channels,
                                   const std::vector<std::vector<double>>& taken) {
  for (int attempt = 0; attempt < kMaxSignatureDraws; ++attempt) {
    std::vector<double> v(channels);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    double s = 0.0;
    for (double x : v) s += x * x;
    if (s < 1e-6) continue;
    v = unit(std::move(v), "generated");
    if (far_from_all(v, taken, kGeneratedAngleDeg)) return v;
  }
  fail(Errc::invalid_argument, "could not draw well-separated signatures; use more channels");
}

void check_spec(const SynthSpec& spec) {
  require(spec.height > 0 && spec.width > 0 && spec.channels > 0 && spec.frames > 0,
          Errc::invalid_argument, "synthetic grid dimensions and frame count must be positive");
  require(!spec.objects.empty() && spec.objects.size() < 256, Errc::invalid_argument,
          "need between 1 and 255 objects");
  require(std::isfinite(spec.noise) && spec.noise >= 0.0, Errc::invalid_argument,
          "noise amplitude must be finite and non-negative");
  const double last = static_cast<double>(spec.frames - 1);
  const double max_x = static_cast<double>(spec.width - 1);
  const double max_y = static_cast<double>(spec.height - 1);
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SynthObject& o = spec.objects[i];
    const std::string name = "object " + std::to_string(i + 1);
    require(o.radius > 0.0, Errc::invalid_argument, name + " needs a positive radius");
    for (double t : {0.0, last}) {
      const double x = o.x + o.vx * t;
      const double y = o.y + o.vy * t;
      require(x - o.radius >= 0.0 && x + o.radius <= max_x && y - o.radius >= 0.0 &&
                  y + o.radius <= max_y,
              Errc::invalid_argument, name + " leaves the grid");
    }
    require(o.signature.empty() || o.signature.size() == spec.channels, Errc::invalid_argument,
            name + " signature length differs from channel count");
  }
  require(spec.background.empty() || spec.background.size() == spec.channels,
          Errc::invalid_argument, "background signature length differs from channel count");
}

}  // namespace

SynthSequence gen_sequence(const SynthSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);

  std::vector<std::vector<double>> sigs(spec.objects.size() + 1);
  std::vector<std::vector<double>> taken;
  if (!spec.background.empty()) taken.push_back(sigs[0] = unit(spec.background, "background"));
  for (std::size_t i = 0; i < spec.objects.size(); ++i)
    if (!spec.objects[i].signature.empty())
      taken.push_back(sigs[i + 1] = unit(spec.objects[i].signature, "object"));
  for (auto& s : sigs) {
    if (!s.empty()) continue;
    s = draw_signature(rng, spec.channels, taken);
    taken.push_back(s);
  }
  for (std::size_t i = 0; i < sigs.size(); ++i)
    for (std::size_t j = i + 1; j < sigs.size(); ++j)
      require(angle_deg(sigs[i], sigs[j]) >= kMinSignatureAngleDeg, Errc::invalid_argument,
              "signatures " + std::to_string(i) + " and " + std::to_string(j) +
                  " are closer than 15 degrees");

  SynthSequence seq;
  seq.signatures = sigs;
  const std::size_t h = spec.height;
  const std::size_t w = spec.width;
  const std::size_t c = spec.channels;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    LabelMask labels(h, w);
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
      const SynthObject& o = spec.objects[i];
      const double cx = o.x + o.vx * static_cast<double>(t);
      const double cy = o.y + o.vy * static_cast<double>(t);
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
          const double dx = static_cast<double>(x) - cx;
          const double dy = static_cast<double>(y) - cy;
          if (dx * dx + dy * dy <= o.radius * o.radius)
            labels.at(y, x) = static_cast<std::uint8_t>(i + 1);
        }
    }

    std::vector<double> raw(c * h * w);
    for (std::size_t p = 0; p < h * w; ++p) {
      const auto& sig = sigs[labels.labels[p]];
      for (std::size_t ch = 0; ch < c; ++ch)
        raw[ch * h * w + p] = sig[ch] + rng.uniform(-spec.noise, spec.noise);
    }
    for (std::size_t p = 0; p < h * w; ++p) {
      double s = 0.0;
      for (std::size_t ch = 0; ch < c; ++ch) s += raw[ch * h * w + p] * raw[ch * h * w + p];
      const double inv = s > 1e-24 ? 1.0 / std::sqrt(s) : 0.0;
      for (std::size_t ch = 0; ch < c; ++ch) raw[ch * h * w + p] *= inv;
    }
    seq.frames.emplace_back(c, h, w, std::move(raw), true);
    seq.masks.push_back(std::move(labels));
  }
  return seq;
}

std::vector<SynthSpec> occlusion_suite(std::uint64_t seed, std::size_t sequences, double noise,
                                       std::size_t frames) {
  require(frames >= 3, Errc::invalid_argument, "occlusion suite needs at least 3 frames");
  Rng rng(seed);
  const double steps = static_cast<double>(frames - 1);
  std::vector<SynthSpec> out;
  out.reserve(sequences);
  for (std::size_t s = 0; s < sequences; ++s) {
    SynthSpec spec;
    spec.height = 24;
    spec.width = 24;
    spec.channels = 8;
    spec.frames = frames;
    spec.noise = noise;
    spec.seed = rng.next();

    SynthObject target;
    target.radius = 4.0;
    target.y = rng.uniform(8.0, 15.0);
    target.vx = rng.uniform(0.4, 0.9);
    target.x = rng.uniform(4.0, 19.0 - target.vx * steps);
    target.vy = 0.0;

    // The occluder sits on the target at frame `meet` and moves vertically.
    SynthObject occluder;
    occluder.radius = 3.0;
    const double meet = std::floor(steps / 2.0);
    occluder.x = target.x + target.vx * meet;
    for (;;) {
      occluder.vy = rng.uniform(1.2, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      occluder.y = target.y - occluder.vy * meet;
      const double end = occluder.y + occluder.vy * steps;
      if (std::min(occluder.y, end) >= occluder.radius &&
          std::max(occluder.y, end) <= 23.0 - occluder.radius)
        break;
    }
    spec.objects = {target, occluder};
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace pmvos
