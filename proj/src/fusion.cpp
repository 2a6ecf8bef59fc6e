#include "pmvos/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "pmvos/random.hpp"

namespace pmvos {

namespace {

void check_shapes(const ClassFeatures& features, const ProbabilityField& prev_mask,
                  const FusionParams& params) {
  const FeatureGrid& f0 = features[0];
  require(features[1].same_shape(f0), Errc::invalid_argument,
          "background and foreground feature grids differ in shape");
  require(prev_mask.classes() == 2, Errc::invalid_argument, "previous mask must be two-class");
  require(prev_mask.height() == f0.height() && prev_mask.width() == f0.width(),
          Errc::invalid_argument, "previous mask does not match feature resolution");
  for (const auto& w : params.weights)
    require(w.size() == f0.channels() + 1, Errc::invalid_argument,
            "fusion weight length must be feature channels + 1");
}

// Stable log-sum-exp of two values.
double lse2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

FusionParams default_fusion_params(std::size_t feature_channels, double prev_weight) {
  FusionParams p;
  for (auto& w : p.weights) {
    w.assign(feature_channels + 1, 1.0);
    w.back() = prev_weight;
  }
  return p;
}

FeatureGrid fuse(const ClassFeatures& features, const ProbabilityField& prev_mask,
                 const FusionParams& params) {
  check_shapes(features, prev_mask, params);
  const std::size_t h = features[0].height();
  const std::size_t w = features[0].width();
  const std::size_t d = features[0].channels();
  FeatureGrid logits(2, h, w);
  for (std::size_t k = 0; k < 2; ++k) {
    auto out = logits.plane(k);
    const auto& wk = params.weights[k];
    std::fill(out.begin(), out.end(), params.bias[k]);
    for (std::size_t c = 0; c < d; ++c) {
      const auto in = features[k].plane(c);
      for (std::size_t p = 0; p < out.size(); ++p) out[p] += wk[c] * in[p];
    }
    const auto prev = prev_mask.plane(k);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += wk[d] * prev[p];
  }
  return logits;
}

double cross_entropy(const FeatureGrid& logits, const ProbabilityField& target) {
  require(logits.channels() == 2 && target.classes() == 2 && logits.height() == target.height() &&
              logits.width() == target.width(),
          Errc::invalid_argument, "cross_entropy: logits and target shapes differ");
  const std::size_t n = logits.pixels();
  double total = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double z0 = logits.plane(0)[p];
    const double z1 = logits.plane(1)[p];
    const double lse = lse2(z0, z1);
    total -= target.plane(0)[p] * (z0 - lse) + target.plane(1)[p] * (z1 - lse);
  }
  return total / static_cast<double>(n);
}

FusionParams gradient(const ClassFeatures& features, const ProbabilityField& prev_mask,
                      const ProbabilityField& target, const FusionParams& params) {
  const FeatureGrid logits = fuse(features, prev_mask, params);
  const ProbabilityField probs = softmax_channels(logits);
  const std::size_t n = logits.pixels();
  const std::size_t d = features[0].channels();
  const double inv_n = 1.0 / static_cast<double>(n);

  FusionParams g;
  for (std::size_t k = 0; k < 2; ++k) {
    g.weights[k].assign(d + 1, 0.0);
    const auto sk = probs.plane(k);
    const auto tk = target.plane(k);
    std::vector<double> dz(n);
    for (std::size_t p = 0; p < n; ++p) dz[p] = (sk[p] - tk[p]) * inv_n;
    for (std::size_t c = 0; c < d; ++c) {
      const auto in = features[k].plane(c);
      double s = 0.0;
      for (std::size_t p = 0; p < n; ++p) s += dz[p] * in[p];
      g.weights[k][c] = s;
    }
    const auto prev = prev_mask.plane(k);
    double sp = 0.0;
    double sb = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      sp += dz[p] * prev[p];
      sb += dz[p];
    }
    g.weights[k][d] = sp;
    g.bias[k] = sb;
  }
  return g;
}

FusionParams numeric_gradient(const ClassFeatures& features, const ProbabilityField& prev_mask,
                              const ProbabilityField& target, const FusionParams& params,
                              double h) {
  auto loss = [&](const FusionParams& p) {
    return cross_entropy(fuse(features, prev_mask, p), target);
  };
  FusionParams g = params;
  FusionParams probe = params;
  auto central = [&](double& slot, double& out) {
    const double saved = slot;
    slot = saved + h;
    const double up = loss(probe);
    slot = saved - h;
    const double down = loss(probe);
    slot = saved;
    out = (up - down) / (2.0 * h);
  };
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < probe.weights[k].size(); ++j)
      central(probe.weights[k][j], g.weights[k][j]);
    central(probe.bias[k], g.bias[k]);
  }
  return g;
}

double grad_check(std::uint64_t seed, double h) {
  Rng rng(seed);
  const std::size_t height = rng.between(2, 5);
  const std::size_t width = rng.between(2, 5);
  const std::size_t channels = rng.between(1, 6);
  const std::size_t n = height * width;

  ClassFeatures features;
  for (auto& f : features) {
    f = FeatureGrid(channels, height, width);
    for (double& v : f.data()) v = rng.uniform(-1.0, 1.0);
  }
  auto random_field = [&] {
    std::vector<double> fg(n);
    for (double& v : fg) v = rng.uniform();
    return ProbabilityField::from_foreground(height, width, fg);
  };
  const ProbabilityField prev = random_field();
  const ProbabilityField target = random_field();

  FusionParams params;
  for (auto& w : params.weights) {
    w.resize(channels + 1);
    for (double& v : w) v = rng.uniform(-2.0, 2.0);
  }
  for (double& b : params.bias) b = rng.uniform(-1.0, 1.0);

  const FusionParams ga = gradient(features, prev, target, params);
  const FusionParams gn = numeric_gradient(features, prev, target, params, h);

  double worst = 0.0;
  auto rel = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b) / std::max(1e-8, std::abs(a) + std::abs(b)));
  };
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < ga.weights[k].size(); ++j) rel(ga.weights[k][j], gn.weights[k][j]);
    rel(ga.bias[k], gn.bias[k]);
  }
  return worst;
}

FusionParams fit_fusion(const ClassFeatures& features, const ProbabilityField& prev_mask,
                        const ProbabilityField& target, FusionParams initial, FitOptions options) {
  FusionParams p = std::move(initial);
  for (std::size_t step = 0; step < options.steps; ++step) {
    const FusionParams g = gradient(features, prev_mask, target, p);
    for (std::size_t k = 0; k < 2; ++k) {
      for (std::size_t j = 0; j < p.weights[k].size(); ++j)
        p.weights[k][j] -= options.learning_rate * g.weights[k][j];
      p.bias[k] -= options.learning_rate * g.bias[k];
    }
  }
  return p;
}

}  // namespace pmvos
