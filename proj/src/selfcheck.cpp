#include "pmvos/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "pmvos/attention.hpp"
#include "pmvos/fusion.hpp"
#include "pmvos/matching.hpp"
#include "pmvos/metrics.hpp"
#include "pmvos/oracle.hpp"
#include "pmvos/random.hpp"
#include "pmvos/templates.hpp"

namespace pmvos::selfcheck {

namespace {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

FeatureGrid random_grid(Rng& rng, std::size_t c, std::size_t h, std::size_t w, double lo,
                        double hi) {
  FeatureGrid g(c, h, w);
  for (double& v : g.data()) v = rng.uniform(lo, hi);
  return g;
}

ProbabilityField random_field(Rng& rng, std::size_t h, std::size_t w) {
  std::vector<double> fg(h * w);
  for (double& v : fg) v = rng.uniform();
  return ProbabilityField::from_foreground(h, w, fg);
}

}  // namespace

CheckResult matching(std::size_t instances, std::uint64_t seed, double tolerance) {
  Timer timer;
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t c = rng.between(1, 8);
    const FeatureGrid input =
        l2_normalize_pixels(random_grid(rng, c, rng.between(1, 8), rng.between(1, 8), -1, 1));
    const std::size_t th = rng.between(1, 8);
    const std::size_t tw = rng.between(1, 8);
    const FeatureGrid tfeat = l2_normalize_pixels(random_grid(rng, c, th, tw, -1, 1));
    const WeightedTemplate tmpl = weighted_template(tfeat, random_field(rng, th, tw));

    const ClassMaps got = match_grid(input, tmpl);
    const auto want = oracle::match(input, tmpl);
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t p = 0; p < input.pixels(); ++p)
        worst = std::max(worst, std::abs(got[k].plane(0)[p] - want[k][p]));
  }
  std::ostringstream d;
  d << instances << " instances, max |diff| " << worst;
  return {"matching vs oracle", worst <= tolerance, worst, timer.seconds(), d.str()};
}

CheckResult attention(std::size_t instances, std::uint64_t seed, double tolerance) {
  Timer timer;
  Rng rng(seed);
  double worst = 0.0;
  double worst_row = 0.0;
  bool negative = false;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = rng.between(1, 3);
    const FeatureGrid stack = random_grid(rng, n, rng.between(1, 6), rng.between(1, 6), -1, 1);
    const double gamma = rng.uniform(0.0, 2.0);

    const FeatureGrid s = spatial_attention(stack, gamma);
    const FeatureGrid c = channel_attention(stack, gamma);
    const auto os = oracle::attention(stack, gamma, oracle::AttentionKind::spatial);
    const auto oc = oracle::attention(stack, gamma, oracle::AttentionKind::channel);
    for (std::size_t j = 0; j < stack.size(); ++j) {
      worst = std::max(worst, std::abs(s.data()[j] - os.output[j]));
      worst = std::max(worst, std::abs(c.data()[j] - oc.output[j]));
    }

    const auto sa = spatial_affinity(stack);
    const auto ca = channel_affinity(stack);
    for (std::size_t j = 0; j < sa.size(); ++j) worst = std::max(worst, std::abs(sa[j] - os.affinity[j]));
    for (std::size_t j = 0; j < ca.size(); ++j) worst = std::max(worst, std::abs(ca[j] - oc.affinity[j]));
    auto rows = [&](const std::vector<double>& a, std::size_t dim) {
      for (std::size_t r = 0; r < dim; ++r) {
        double sum = 0.0;
        for (std::size_t q = 0; q < dim; ++q) {
          negative |= a[r * dim + q] < 0.0;
          sum += a[r * dim + q];
        }
        worst_row = std::max(worst_row, std::abs(sum - 1.0));
      }
    };
    rows(sa, stack.pixels());
    rows(ca, n);
  }
  std::ostringstream d;
  d << instances << " stacks, max |diff| " << worst << ", max |row sum - 1| " << worst_row;
  return {"attention vs oracle", worst <= tolerance && worst_row <= tolerance && !negative,
          std::max(worst, worst_row), timer.seconds(), d.str()};
}

CheckResult completeness(std::size_t instances, std::uint64_t seed, double tolerance) {
  Timer timer;
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t h = rng.between(1, 10);
    const std::size_t w = rng.between(1, 10);
    const FeatureGrid x = l2_normalize_pixels(random_grid(rng, rng.between(1, 16), h, w, -1, 1));
    const WeightedTemplate t = weighted_template(x, random_field(rng, h, w));
    for (std::size_t j = 0; j < x.size(); ++j)
      worst = std::max(worst,
                       std::abs(t.per_class[0].data()[j] + t.per_class[1].data()[j] - x.data()[j]));
  }
  std::ostringstream d;
  d << instances << " instances, max |Y0 + Y1 - X| " << worst;
  return {"template completeness", worst <= tolerance, worst, timer.seconds(), d.str()};
}

CheckResult ema(const std::vector<double>& alphas, std::size_t max_updates, std::uint64_t seed,
                double tolerance) {
  Timer timer;
  Rng rng(seed);
  double worst = 0.0;
  bool exact_ok = true;
  constexpr std::size_t kChannels = 5;
  auto random_vectors = [&] {
    ClassVectors v;
    for (auto& x : v) {
      x.resize(kChannels);
      for (double& e : x) e = rng.uniform(-1.0, 1.0);
    }
    return v;
  };

  for (double alpha : alphas) {
    std::vector<ClassVectors> seen;
    MedialTemplate state;
    state.alpha = alpha;
    for (std::size_t step = 0; step < max_updates; ++step) {
      seen.push_back(random_vectors());
      state = medial_update(state, seen.back(), step);
      for (std::size_t k = 0; k < 2; ++k) {
        std::vector<std::vector<double>> history;
        for (const auto& s : seen) history.push_back(s[k]);
        const auto want = oracle::ema(history, alpha);
        for (std::size_t c = 0; c < kChannels; ++c)
          worst = std::max(worst, std::abs(state.vectors[k][c] - want[c]));
      }
      // Frame 0 and alpha == 1 are plain replacement.
      if (step == 0 || alpha == 1.0) exact_ok &= state.vectors == seen.back();
    }
  }
  // A stale state handed frame 0 is re-initialized, whatever its alpha.
  MedialTemplate stale;
  stale.alpha = 0.1;
  stale.initialized = true;
  stale.vectors = random_vectors();
  const ClassVectors fresh = random_vectors();
  exact_ok &= medial_update(stale, fresh, 0).vectors == fresh;

  std::ostringstream d;
  d << alphas.size() << " alphas x " << max_updates << " updates, max |diff| " << worst
    << (exact_ok ? ", replacement cases exact" : ", replacement case NOT exact");
  return {"medial EMA closed form", worst <= tolerance && exact_ok, worst, timer.seconds(),
          d.str()};
}

CheckResult gradients(std::size_t seeds, std::uint64_t first_seed, double h, double tolerance) {
  Timer timer;
  double worst = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) worst = std::max(worst, grad_check(first_seed + s, h));
  std::ostringstream d;
  d << seeds << " seeds, h = " << h << ", max relative error " << worst;
  return {"fusion gradient check", worst < tolerance, worst, timer.seconds(), d.str()};
}

CheckResult boundary(std::size_t instances, std::uint64_t seed, std::size_t tolerance_px,
                     double tolerance) {
  Timer timer;
  Rng rng(seed);
  double worst = 0.0;
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t h = rng.between(1, 8);
    const std::size_t w = rng.between(1, 8);
    auto random_mask = [&] {
      const double density = rng.uniform(0.1, 0.9);
      LabelMask m(h, w);
      for (auto& l : m.labels) l = rng.uniform() < density ? 1 : 0;
      return m;
    };
    const LabelMask pred = random_mask();
    const LabelMask gt = random_mask();
    const double diff = std::abs(pmvos::boundary_f(pred, gt, 1, tolerance_px) -
                                 oracle::boundary_f(pred, gt, 1, tolerance_px));
    worst = std::max(worst, diff);
    disagreements += diff > tolerance;
  }
  std::ostringstream d;
  d << instances << " masks at tolerance " << tolerance_px << " px: " << disagreements
    << " disagree, max |diff| " << worst;
  return {"boundary F vs bipartite oracle (tol " + std::to_string(tolerance_px) + ")",
          disagreements == 0, worst, timer.seconds(), d.str()};
}

CheckResult region_cases() {
  Timer timer;
  // 4x4 grid: pred block at rows 0-1, cols 0-1; gt block at rows 0-1, cols 1-2.
  LabelMask pred(4, 4);
  LabelMask gt(4, 4);
  for (std::size_t y = 0; y < 2; ++y) {
    pred.at(y, 0) = pred.at(y, 1) = 1;
    gt.at(y, 1) = gt.at(y, 2) = 1;
  }
  LabelMask far(4, 4);
  far.at(3, 3) = 1;
  const double identity = region_j(pred, pred, 1);
  const double disjoint = region_j(pred, far, 1);
  const double overlap = region_j(pred, gt, 1);
  const bool ok = identity == 1.0 && disjoint == 0.0 && overlap == 2.0 / 6.0;
  std::ostringstream d;
  d << "identity " << identity << ", disjoint " << disjoint << ", strip overlap " << overlap;
  return {"region J hand cases", ok, std::abs(overlap - 2.0 / 6.0), timer.seconds(), d.str()};
}

}  // namespace pmvos::selfcheck
