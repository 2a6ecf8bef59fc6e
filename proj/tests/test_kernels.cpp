#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pmvos/random.hpp"
#include "pmvos/simd/kernels.hpp"

namespace pmvos {
namespace {

using simd::KernelTable;

std::vector<double> random_vec(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    fast_ = simd::avx2_kernels();
    if (!fast_) GTEST_SKIP() << "AVX2 kernels unavailable on this build or CPU";
  }
  const KernelTable& ref() const { return simd::scalar_kernels(); }
  const KernelTable* fast_ = nullptr;
};

TEST_F(KernelEquivalence, MaxDot) {
  Rng rng(21);
  for (int it = 0; it < 300; ++it) {
    const std::size_t channels = rng.between(1, 17);
    const std::size_t nx = rng.between(1, 70);
    const std::size_t ny = rng.between(1, 70);
    const std::size_t xs = nx + rng.index(3);
    const std::size_t ys = ny + rng.index(3);
    const auto x = random_vec(rng, channels * xs);
    const auto y = random_vec(rng, channels * ys);
    std::vector<double> a(nx), b(nx);
    ref().max_dot(x.data(), xs, nx, y.data(), ys, ny, channels, a.data());
    fast_->max_dot(x.data(), xs, nx, y.data(), ys, ny, channels, b.data());
    for (std::size_t i = 0; i < nx; ++i) EXPECT_NEAR(a[i], b[i], 1e-12) << "it " << it;
  }
}

TEST_F(KernelEquivalence, SumSquaresAndScale) {
  Rng rng(22);
  for (int it = 0; it < 200; ++it) {
    const std::size_t channels = rng.between(1, 9);
    const std::size_t n = rng.between(1, 40);
    const std::size_t stride = n + rng.index(4);
    auto data = random_vec(rng, channels * stride);
    std::vector<double> a(n), b(n);
    ref().sum_squares_strided(data.data(), channels, stride, n, a.data());
    fast_->sum_squares_strided(data.data(), channels, stride, n, b.data());
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);

    const auto scale = random_vec(rng, n);
    auto d1 = data;
    auto d2 = data;
    ref().scale_strided(d1.data(), channels, stride, n, scale.data());
    fast_->scale_strided(d2.data(), channels, stride, n, scale.data());
    EXPECT_EQ(d1, d2);
  }
}

TEST_F(KernelEquivalence, DotAxpyMax) {
  Rng rng(23);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = rng.between(1, 100);
    const auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    EXPECT_NEAR(ref().dot(x.data(), y.data(), n), fast_->dot(x.data(), y.data(), n), 1e-12);
    EXPECT_EQ(ref().max_value(x.data(), n), fast_->max_value(x.data(), n));

    auto y1 = y;
    auto y2 = y;
    const double alpha = rng.uniform(-2.0, 2.0);
    ref().axpy(alpha, x.data(), y1.data(), n);
    fast_->axpy(alpha, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);
  }
}

TEST(ScalarKernels, MaxDotMatchesNaiveLoop) {
  Rng rng(24);
  const auto& k = simd::scalar_kernels();
  for (int it = 0; it < 100; ++it) {
    const std::size_t channels = rng.between(1, 6);
    const std::size_t nx = rng.between(1, 13);
    const std::size_t ny = rng.between(1, 13);
    const auto x = random_vec(rng, channels * nx);
    const auto y = random_vec(rng, channels * ny);
    std::vector<double> out(nx);
    k.max_dot(x.data(), nx, nx, y.data(), ny, ny, channels, out.data());
    for (std::size_t p = 0; p < nx; ++p) {
      double best = -INFINITY;
      for (std::size_t q = 0; q < ny; ++q) {
        double s = 0.0;
        for (std::size_t c = 0; c < channels; ++c) s += x[c * nx + p] * y[c * ny + q];
        best = std::max(best, s);
      }
      EXPECT_NEAR(out[p], best, 1e-12);
    }
  }
}

TEST(Dispatch, ActiveTableIsConsistent) {
  const auto& a = simd::active();
  EXPECT_TRUE(a.name == "scalar" || a.name == "avx2");
  if (!simd::avx2_kernels()) {
    EXPECT_EQ(a.isa, simd::Isa::scalar);
  }
}

}  // namespace
}  // namespace pmvos
