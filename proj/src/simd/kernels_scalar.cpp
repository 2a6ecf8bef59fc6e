#include <algorithm>
#include <limits>

#include "kernels_internal.hpp"

namespace pmvos::simd::detail {

namespace {

constexpr std::size_t kTileX = 4;
constexpr std::size_t kTileY = 4;

}  // namespace

void sum_squares_strided_scalar(const double* data, std::size_t channels, std::size_t stride,
                                std::size_t n, double* out) {
  std::fill(out, out + n, 0.0);
  for (std::size_t c = 0; c < channels; ++c) {
    const double* row = data + c * stride;
    for (std::size_t i = 0; i < n; ++i) out[i] += row[i] * row[i];
  }
}

void scale_strided_scalar(double* data, std::size_t channels, std::size_t stride, std::size_t n,
                          const double* scale) {
  for (std::size_t c = 0; c < channels; ++c) {
    double* row = data + c * stride;
    for (std::size_t i = 0; i < n; ++i) row[i] *= scale[i];
  }
}

// Register-tiled product: a kTileX x kTileY block of dot products is
// accumulated across channels, then folded into the running maxima.
void max_dot_scalar(const double* x, std::size_t x_stride, std::size_t n_x, const double* y,
                    std::size_t y_stride, std::size_t n_y, std::size_t channels, double* out) {
  std::fill(out, out + n_x, -std::numeric_limits<double>::infinity());
  for (std::size_t p0 = 0; p0 < n_x; p0 += kTileX) {
    const std::size_t np = std::min(kTileX, n_x - p0);
    for (std::size_t q0 = 0; q0 < n_y; q0 += kTileY) {
      const std::size_t nq = std::min(kTileY, n_y - q0);
      double acc[kTileX][kTileY] = {};
      for (std::size_t c = 0; c < channels; ++c) {
        const double* xr = x + c * x_stride + p0;
        const double* yr = y + c * y_stride + q0;
        for (std::size_t i = 0; i < np; ++i)
          for (std::size_t j = 0; j < nq; ++j) acc[i][j] += xr[i] * yr[j];
      }
      for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < nq; ++j) out[p0 + i] = std::max(out[p0 + i], acc[i][j]);
    }
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double max_value_scalar(const double* x, std::size_t n) {
  return *std::max_element(x, x + n);
}

}  // namespace pmvos::simd::detail
