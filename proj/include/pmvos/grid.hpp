#pragma once

// Dense C x H x W grids used throughout the library.
//
// Storage is row-major (channel, row, column): element (c, y, x) lives at
// c * H * W + y * W + x, so each channel plane is contiguous. All kernels in
// pmvos/simd rely on that layout.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pmvos/error.hpp"

namespace pmvos {

class FeatureGrid {
 public:
  FeatureGrid() = default;

  FeatureGrid(std::size_t channels, std::size_t height, std::size_t width)
      : FeatureGrid(channels, height, width, std::vector<double>(channels * height * width, 0.0)) {}

  FeatureGrid(std::size_t channels, std::size_t height, std::size_t width, std::vector<double> data,
              bool normalized = false)
      : channels_(channels), height_(height), width_(width), data_(std::move(data)),
        normalized_(normalized) {
    require(channels > 0 && height > 0 && width > 0, Errc::invalid_argument,
            "feature grid dimensions must be positive");
    require(data_.size() == channels * height * width, Errc::invalid_argument,
            "feature grid data length does not match C*H*W");
  }

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t pixels() const noexcept { return height_ * width_; }
  std::size_t size() const noexcept { return data_.size(); }

  /// True when every pixel vector has unit L2 norm or is exactly zero.
  bool normalized() const noexcept { return normalized_; }
  void set_normalized(bool v) noexcept { normalized_ = v; }

  double& at(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * height_ + y) * width_ + x];
  }
  double at(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * height_ + y) * width_ + x];
  }

  /// Contiguous H*W plane of channel c.
  std::span<double> plane(std::size_t c) { return {data_.data() + c * pixels(), pixels()}; }
  std::span<const double> plane(std::size_t c) const {
    return {data_.data() + c * pixels(), pixels()};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::vector<double>& storage() noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  bool same_shape(const FeatureGrid& o) const noexcept {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }

  friend bool operator==(const FeatureGrid&, const FeatureGrid&) = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
  bool normalized_ = false;
};

/// K x H x W per-pixel class probabilities. Class 0 is background.
class ProbabilityField {
 public:
  static constexpr double kSumTolerance = 1e-5;

  ProbabilityField() = default;

  ProbabilityField(std::size_t classes, std::size_t height, std::size_t width,
                   std::vector<double> data)
      : classes_(classes), height_(height), width_(width), data_(std::move(data)) {
    require(classes >= 2, Errc::invalid_argument, "probability field needs at least two classes");
    require(height > 0 && width > 0, Errc::invalid_argument,
            "probability field dimensions must be positive");
    require(data_.size() == classes * height * width, Errc::invalid_argument,
            "probability field data length does not match K*H*W");
  }

  /// Every class equal to 1/K.
  static ProbabilityField uniform(std::size_t classes, std::size_t height, std::size_t width) {
    return {classes, height, width,
            std::vector<double>(classes * height * width, 1.0 / static_cast<double>(classes))};
  }

  /// Two-class field from a foreground probability plane (bg = 1 - fg).
  static ProbabilityField from_foreground(std::size_t height, std::size_t width,
                                          std::span<const double> fg) {
    require(fg.size() == height * width, Errc::invalid_argument,
            "foreground plane length does not match H*W");
    std::vector<double> data(2 * fg.size());
    for (std::size_t i = 0; i < fg.size(); ++i) {
      data[i] = 1.0 - fg[i];
      data[fg.size() + i] = fg[i];
    }
    return {2, height, width, std::move(data)};
  }

  std::size_t classes() const noexcept { return classes_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t pixels() const noexcept { return height_ * width_; }

  double& at(std::size_t k, std::size_t y, std::size_t x) {
    return data_[(k * height_ + y) * width_ + x];
  }
  double at(std::size_t k, std::size_t y, std::size_t x) const {
    return data_[(k * height_ + y) * width_ + x];
  }

  std::span<double> plane(std::size_t k) { return {data_.data() + k * pixels(), pixels()}; }
  std::span<const double> plane(std::size_t k) const {
    return {data_.data() + k * pixels(), pixels()};
  }

  std::span<const double> data() const noexcept { return data_; }
  const std::vector<double>& storage() const noexcept { return data_; }

  friend bool operator==(const ProbabilityField&, const ProbabilityField&) = default;

 private:
  std::size_t classes_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Throws invalid_input unless every value is finite, in [0,1] (with slack),
/// and each pixel's class values sum to 1 within kSumTolerance.
void validate(const ProbabilityField& field);

/// Throws invalid_input if any element is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

/// Divides each pixel's C-vector by its L2 norm. Pixels with norm below 1e-12
/// become all-zero. The result carries normalized() == true.
FeatureGrid l2_normalize_pixels(const FeatureGrid& grid);

/// Area-average resampling of each class plane to out_h x out_w. Every output
/// cell is the overlap-weighted mean of the input cells it covers, so the
/// per-pixel class sums are preserved.
ProbabilityField resize_probability(const ProbabilityField& field, std::size_t out_h,
                                    std::size_t out_w);

/// Per-pixel softmax across channels (channels are treated as class logits).
ProbabilityField softmax_channels(const FeatureGrid& logits);

}  // namespace pmvos
