#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "pmvos/grid.hpp"
#include "support.hpp"

namespace pmvos {
namespace {

using test::random_field;
using test::random_grid;

double pixel_norm(const FeatureGrid& g, std::size_t p) {
  double s = 0.0;
  for (std::size_t c = 0; c < g.channels(); ++c) s += g.plane(c)[p] * g.plane(c)[p];
  return std::sqrt(s);
}

TEST(Normalize, ThreeFourFive) {
  const FeatureGrid g(2, 1, 1, {3.0, 4.0});
  const FeatureGrid n = l2_normalize_pixels(g);
  EXPECT_DOUBLE_EQ(n.at(0, 0, 0), 0.6);
  EXPECT_DOUBLE_EQ(n.at(1, 0, 0), 0.8);
  EXPECT_TRUE(n.normalized());
}

TEST(Normalize, ZeroVectorStaysZero) {
  const FeatureGrid n = l2_normalize_pixels(FeatureGrid(2, 1, 1, {0.0, 0.0}));
  EXPECT_EQ(n.at(0, 0, 0), 0.0);
  EXPECT_EQ(n.at(1, 0, 0), 0.0);
  EXPECT_TRUE(n.normalized());
}

TEST(Normalize, TinyNormBecomesZero) {
  const FeatureGrid n = l2_normalize_pixels(FeatureGrid(2, 1, 1, {1e-14, 0.0}));
  EXPECT_EQ(n.at(0, 0, 0), 0.0);
}

TEST(Normalize, RandomGridUnitNorms) {
  Rng rng(11);
  FeatureGrid g = random_grid(rng, 4, 5, 5);
  for (std::size_t c = 0; c < 4; ++c) g.at(c, 2, 3) = 0.0;
  const FeatureGrid n = l2_normalize_pixels(g);
  for (std::size_t p = 0; p < n.pixels(); ++p) {
    const double norm = pixel_norm(n, p);
    if (p == 2 * 5 + 3) EXPECT_EQ(norm, 0.0);
    else EXPECT_NEAR(norm, 1.0, 1e-5);
  }
}

TEST(Normalize, Idempotent) {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    const FeatureGrid once = l2_normalize_pixels(random_grid(rng, rng.between(1, 9), 3, 4));
    const FeatureGrid twice = l2_normalize_pixels(once);
    EXPECT_LE(test::max_abs_diff(once.data(), twice.data()), 1e-6);
  }
}

TEST(Normalize, NonFiniteRejected) {
  const FeatureGrid g(2, 1, 1, {std::numeric_limits<double>::quiet_NaN(), 1.0});
  try {
    l2_normalize_pixels(g);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_input);
  }
}

TEST(Grid, RejectsBadDimensions) {
  EXPECT_THROW(FeatureGrid(0, 1, 1), Error);
  EXPECT_THROW(FeatureGrid(1, 2, 2, {1.0}), Error);
  EXPECT_THROW(ProbabilityField(1, 1, 1, {1.0}), Error);
}

TEST(Resize, UniformIsFixedPoint) {
  const ProbabilityField u = ProbabilityField::uniform(2, 8, 8);
  const ProbabilityField r = resize_probability(u, 4, 4);
  ASSERT_EQ(r.height(), 4u);
  for (double v : r.data()) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Resize, QuarterMass) {
  const ProbabilityField f = ProbabilityField::from_foreground(2, 2, std::vector{1.0, 0.0, 0.0, 0.0});
  const ProbabilityField r = resize_probability(f, 1, 1);
  EXPECT_DOUBLE_EQ(r.at(1, 0, 0), 0.25);
  EXPECT_DOUBLE_EQ(r.at(0, 0, 0), 0.75);
}

TEST(Resize, BlockMeansAndSums) {
  Rng rng(13);
  const ProbabilityField f = random_field(rng, 6, 6);
  const ProbabilityField r = resize_probability(f, 3, 3);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t x = 0; x < 3; ++x) {
        const double want = (f.at(k, 2 * y, 2 * x) + f.at(k, 2 * y, 2 * x + 1) +
                             f.at(k, 2 * y + 1, 2 * x) + f.at(k, 2 * y + 1, 2 * x + 1)) /
                            4.0;
        EXPECT_NEAR(r.at(k, y, x), want, 1e-12);
      }
  for (std::size_t p = 0; p < 9; ++p) EXPECT_NEAR(r.plane(0)[p] + r.plane(1)[p], 1.0, 1e-5);
}

TEST(Resize, IntegerFactorPreservesClassMean) {
  Rng rng(14);
  for (int i = 0; i < 30; ++i) {
    const std::size_t fy = rng.between(1, 4);
    const std::size_t fx = rng.between(1, 4);
    const std::size_t h = rng.between(1, 5);
    const std::size_t w = rng.between(1, 5);
    const ProbabilityField f = random_field(rng, h * fy, w * fx);
    const ProbabilityField r = resize_probability(f, h, w);
    for (std::size_t k = 0; k < 2; ++k) {
      double a = 0.0;
      double b = 0.0;
      for (double v : f.plane(k)) a += v;
      for (double v : r.plane(k)) b += v;
      EXPECT_NEAR(a / static_cast<double>(f.pixels()), b / static_cast<double>(r.pixels()), 1e-6);
    }
  }
}

TEST(Resize, NonIntegerRatiosKeepSums) {
  Rng rng(15);
  for (int i = 0; i < 30; ++i) {
    const ProbabilityField f = random_field(rng, rng.between(1, 9), rng.between(1, 9));
    const ProbabilityField r = resize_probability(f, rng.between(1, 9), rng.between(1, 9));
    for (std::size_t p = 0; p < r.pixels(); ++p) {
      EXPECT_NEAR(r.plane(0)[p] + r.plane(1)[p], 1.0, 1e-5);
      EXPECT_GE(r.plane(1)[p], -1e-12);
      EXPECT_LE(r.plane(1)[p], 1.0 + 1e-12);
    }
  }
}

TEST(Resize, ZeroTargetRejected) {
  try {
    resize_probability(ProbabilityField::uniform(2, 2, 2), 0, 1);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_argument);
  }
}

TEST(Softmax, Symmetric) {
  const ProbabilityField p = softmax_channels(FeatureGrid(2, 1, 1, {0.0, 0.0}));
  EXPECT_DOUBLE_EQ(p.at(0, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(p.at(1, 0, 0), 0.5);
}

TEST(Softmax, LargeLogitsStable) {
  const ProbabilityField p = softmax_channels(FeatureGrid(2, 1, 1, {1000.0, 0.0}));
  EXPECT_DOUBLE_EQ(p.at(0, 0, 0), 1.0);
  EXPECT_GE(p.at(1, 0, 0), 0.0);
  EXPECT_LT(p.at(1, 0, 0), 1e-300);
}

TEST(Softmax, ThreeClassesMatchLongDouble) {
  const ProbabilityField p = softmax_channels(FeatureGrid(3, 1, 1, {1.0, 2.0, 3.0}));
  const long double z = std::exp(1.0L) + std::exp(2.0L) + std::exp(3.0L);
  EXPECT_NEAR(p.at(0, 0, 0), static_cast<double>(std::exp(1.0L) / z), 1e-15);
  EXPECT_NEAR(p.at(1, 0, 0), static_cast<double>(std::exp(2.0L) / z), 1e-15);
  EXPECT_NEAR(p.at(2, 0, 0), static_cast<double>(std::exp(3.0L) / z), 1e-15);
}

TEST(Softmax, ShiftInvariant) {
  Rng rng(16);
  for (int i = 0; i < 50; ++i) {
    FeatureGrid g = random_grid(rng, rng.between(2, 4), 3, 3, -5, 5);
    const ProbabilityField a = softmax_channels(g);
    const double shift = rng.uniform(-100, 100);
    for (std::size_t c = 0; c < g.channels(); ++c) g.at(c, 1, 2) += shift;
    const ProbabilityField b = softmax_channels(g);
    EXPECT_LE(test::max_abs_diff(a.data(), b.data()), 1e-6);
  }
}

TEST(Softmax, SingleChannelRejected) {
  EXPECT_THROW(softmax_channels(FeatureGrid(1, 1, 1, {0.0})), Error);
}

TEST(Validate, RejectsBadSums) {
  EXPECT_THROW(validate(ProbabilityField(2, 1, 1, {0.5, 0.6})), Error);
  EXPECT_NO_THROW(validate(ProbabilityField(2, 1, 1, {0.5, 0.5})));
}

}  // namespace
}  // namespace pmvos
