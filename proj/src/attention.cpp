#include "pmvos/attention.hpp"

#include <algorithm>
#include <cmath>

#include "pmvos/simd/kernels.hpp"

namespace pmvos {

namespace {

// In-place stable softmax of one row.
void softmax_row(std::span<double> row, const simd::KernelTable& k) {
  const double mx = k.max_value(row.data(), row.size());
  double sum = 0.0;
  for (double& v : row) {
    v = std::exp(v - mx);
    sum += v;
  }
  const double inv = 1.0 / sum;
  for (double& v : row) v *= inv;
}

// Row p of the spatial energy: e[q] = sum_c s[c,p] s[c,q].
void spatial_energy_row(const FeatureGrid& s, std::size_t p, std::span<double> e,
                        const simd::KernelTable& k) {
  std::fill(e.begin(), e.end(), 0.0);
  for (std::size_t c = 0; c < s.channels(); ++c) {
    const auto plane = s.plane(c);
    k.axpy(plane[p], plane.data(), e.data(), e.size());
  }
}

void check_stack(const FeatureGrid& stack) { require_finite(stack.data(), "similarity stack"); }

}  // namespace

FeatureGrid spatial_attention(const FeatureGrid& stack, double gamma) {
  check_stack(stack);
  const auto& k = simd::active();
  const std::size_t hw = stack.pixels();
  FeatureGrid out = stack;
  std::vector<double> row(hw);
  for (std::size_t p = 0; p < hw; ++p) {
    spatial_energy_row(stack, p, row, k);
    softmax_row(row, k);
    for (std::size_t c = 0; c < stack.channels(); ++c)
      out.plane(c)[p] += gamma * k.dot(row.data(), stack.plane(c).data(), hw);
  }
  out.set_normalized(false);
  return out;
}

FeatureGrid channel_attention(const FeatureGrid& stack, double gamma) {
  check_stack(stack);
  const auto& k = simd::active();
  const std::size_t hw = stack.pixels();
  const std::size_t n = stack.channels();
  const std::vector<double> affinity = channel_affinity(stack);
  FeatureGrid out = stack;
  for (std::size_t c = 0; c < n; ++c) {
    auto dst = out.plane(c);
    for (std::size_t d = 0; d < n; ++d)
      k.axpy(gamma * affinity[c * n + d], stack.plane(d).data(), dst.data(), hw);
  }
  out.set_normalized(false);
  return out;
}

std::vector<double> spatial_affinity(const FeatureGrid& stack) {
  check_stack(stack);
  const auto& k = simd::active();
  const std::size_t hw = stack.pixels();
  std::vector<double> a(hw * hw);
  for (std::size_t p = 0; p < hw; ++p) {
    std::span<double> row(a.data() + p * hw, hw);
    spatial_energy_row(stack, p, row, k);
    softmax_row(row, k);
  }
  return a;
}

std::vector<double> channel_affinity(const FeatureGrid& stack) {
  check_stack(stack);
  const auto& k = simd::active();
  const std::size_t n = stack.channels();
  const std::size_t hw = stack.pixels();
  std::vector<double> b(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t d = c; d < n; ++d)
      b[c * n + d] = b[d * n + c] = k.dot(stack.plane(c).data(), stack.plane(d).data(), hw);
  for (std::size_t c = 0; c < n; ++c) softmax_row({b.data() + c * n, n}, k);
  return b;
}

AttentionOutput attend(const SimilarityStack& stack, AttentionGammas gammas) {
  require(stack.maps_per_class() >= 1, Errc::invalid_argument, "attention needs at least one map");
  AttentionOutput out;
  out.gammas = gammas;
  for (std::size_t cls = 0; cls < 2; ++cls) {
    const FeatureGrid& in = stack.per_class[cls];
    const FeatureGrid s = spatial_attention(in, gammas.spatial);
    const FeatureGrid c = channel_attention(in, gammas.channel);
    std::vector<double> data;
    data.reserve(s.size() + c.size());
    data.insert(data.end(), s.data().begin(), s.data().end());
    data.insert(data.end(), c.data().begin(), c.data().end());
    out.per_class[cls] = FeatureGrid(2 * in.channels(), in.height(), in.width(), std::move(data));
  }
  return out;
}

}  // namespace pmvos
