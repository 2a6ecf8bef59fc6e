#include "pmvos/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmvos/simd/kernels.hpp"

namespace pmvos {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) fail(Errc::invalid_input, std::string(what) + " contains non-finite values");
}

void validate(const ProbabilityField& field) {
  require_finite(field.data(), "probability field");
  const std::size_t n = field.pixels();
  for (std::size_t p = 0; p < n; ++p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < field.classes(); ++k) {
      const double v = field.plane(k)[p];
      require(v >= -ProbabilityField::kSumTolerance && v <= 1.0 + ProbabilityField::kSumTolerance,
              Errc::invalid_input, "probability outside [0,1]");
      sum += v;
    }
    require(std::abs(sum - 1.0) <= ProbabilityField::kSumTolerance, Errc::invalid_input,
            "class probabilities do not sum to 1 at pixel " + std::to_string(p));
  }
}

FeatureGrid l2_normalize_pixels(const FeatureGrid& grid) {
  require_finite(grid.data(), "feature grid");
  const auto& k = simd::active();
  const std::size_t n = grid.pixels();

  std::vector<double> scale(n);
  k.sum_squares_strided(grid.data().data(), grid.channels(), n, n, scale.data());
  for (double& s : scale) {
    const double norm = std::sqrt(s);
    s = norm < 1e-12 ? 0.0 : 1.0 / norm;
  }

  FeatureGrid out = grid;
  k.scale_strided(out.data().data(), out.channels(), n, n, scale.data());
  out.set_normalized(true);
  return out;
}

namespace {

// Input cells covered by each output cell, with overlap weights summing to 1.
struct Span1D {
  std::size_t first;
  std::vector<double> weights;
};

std::vector<Span1D> area_weights(std::size_t in, std::size_t out) {
  std::vector<Span1D> spans(out);
  // Work in units of 1/(in*out) to keep the boundaries exact integers.
  for (std::size_t o = 0; o < out; ++o) {
    const std::size_t lo = o * in;
    const std::size_t hi = (o + 1) * in;
    const std::size_t first = lo / out;
    const std::size_t last = (hi - 1) / out;
    spans[o].first = first;
    for (std::size_t i = first; i <= last; ++i) {
      const std::size_t cell_lo = std::max(lo, i * out);
      const std::size_t cell_hi = std::min(hi, (i + 1) * out);
      spans[o].weights.push_back(static_cast<double>(cell_hi - cell_lo) / static_cast<double>(in));
    }
  }
  return spans;
}

}  // namespace

ProbabilityField resize_probability(const ProbabilityField& field, std::size_t out_h,
                                    std::size_t out_w) {
  require(out_h >= 1 && out_w >= 1, Errc::invalid_argument, "resize target must be at least 1x1");
  if (out_h == field.height() && out_w == field.width()) return field;

  const auto rows = area_weights(field.height(), out_h);
  const auto cols = area_weights(field.width(), out_w);
  std::vector<double> data(field.classes() * out_h * out_w, 0.0);

  for (std::size_t k = 0; k < field.classes(); ++k) {
    for (std::size_t oy = 0; oy < out_h; ++oy) {
      for (std::size_t ox = 0; ox < out_w; ++ox) {
        double acc = 0.0;
        const auto& r = rows[oy];
        const auto& c = cols[ox];
        for (std::size_t i = 0; i < r.weights.size(); ++i)
          for (std::size_t j = 0; j < c.weights.size(); ++j)
            acc += r.weights[i] * c.weights[j] * field.at(k, r.first + i, c.first + j);
        data[(k * out_h + oy) * out_w + ox] = acc;
      }
    }
  }
  return {field.classes(), out_h, out_w, std::move(data)};
}

ProbabilityField softmax_channels(const FeatureGrid& logits) {
  require(logits.channels() >= 2, Errc::invalid_argument, "softmax needs at least two channels");
  require_finite(logits.data(), "logits");
  const std::size_t n = logits.pixels();
  const std::size_t kc = logits.channels();
  std::vector<double> data(kc * n);
  for (std::size_t p = 0; p < n; ++p) {
    double mx = logits.plane(0)[p];
    for (std::size_t k = 1; k < kc; ++k) mx = std::max(mx, logits.plane(k)[p]);
    double sum = 0.0;
    for (std::size_t k = 0; k < kc; ++k) {
      const double e = std::exp(logits.plane(k)[p] - mx);
      data[k * n + p] = e;
      sum += e;
    }
    for (std::size_t k = 0; k < kc; ++k) data[k * n + p] /= sum;
  }
  return {kc, logits.height(), logits.width(), std::move(data)};
}

}  // namespace pmvos
