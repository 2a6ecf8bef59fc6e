// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must not include standard headers that instantiate inline templates: those
// instantiations could be merged with the baseline ones at link time and leak
// AVX2 encodings into code that runs on older CPUs.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace pmvos::simd::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double smax(double a, double b) { return a > b ? a : b; }

const double kNegInf = -__builtin_inf();

// Scalar tail of max_dot for x points [p0, n_x).
void max_dot_tail(const double* x, std::size_t x_stride, std::size_t p0, std::size_t n_x,
                  const double* y, std::size_t y_stride, std::size_t n_y, std::size_t channels,
                  double* out) {
  for (std::size_t p = p0; p < n_x; ++p) {
    double best = kNegInf;
    for (std::size_t q = 0; q < n_y; ++q) {
      double s = 0.0;
      for (std::size_t c = 0; c < channels; ++c) s += x[c * x_stride + p] * y[c * y_stride + q];
      best = smax(best, s);
    }
    out[p] = best;
  }
}

}  // namespace

void sum_squares_strided_avx2(const double* data, std::size_t channels, std::size_t stride,
                              std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t c = 0; c < channels; ++c) {
      __m256d v = _mm256_loadu_pd(data + c * stride + i);
      acc = _mm256_fmadd_pd(v, v, acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < channels; ++c) s += data[c * stride + i] * data[c * stride + i];
    out[i] = s;
  }
}

void scale_strided_avx2(double* data, std::size_t channels, std::size_t stride, std::size_t n,
                        const double* scale) {
  for (std::size_t c = 0; c < channels; ++c) {
    double* row = data + c * stride;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
      _mm256_storeu_pd(row + i, _mm256_mul_pd(_mm256_loadu_pd(row + i), _mm256_loadu_pd(scale + i)));
    for (; i < n; ++i) row[i] *= scale[i];
  }
}

// 8 x-points (two ymm lanes) against 4 y-points per register tile, accumulated
// over channels with FMA; y tails fall back to one broadcast per point.
void max_dot_avx2(const double* x, std::size_t x_stride, std::size_t n_x, const double* y,
                  std::size_t y_stride, std::size_t n_y, std::size_t channels, double* out) {
  std::size_t p = 0;
  for (; p + 8 <= n_x; p += 8) {
    __m256d best0 = _mm256_set1_pd(kNegInf);
    __m256d best1 = best0;
    std::size_t q = 0;
    for (; q + 4 <= n_y; q += 4) {
      __m256d a00 = _mm256_setzero_pd(), a01 = a00, a02 = a00, a03 = a00;
      __m256d a10 = a00, a11 = a00, a12 = a00, a13 = a00;
      for (std::size_t c = 0; c < channels; ++c) {
        const double* xr = x + c * x_stride + p;
        const double* yr = y + c * y_stride + q;
        const __m256d x0 = _mm256_loadu_pd(xr);
        const __m256d x1 = _mm256_loadu_pd(xr + 4);
        __m256d b = _mm256_broadcast_sd(yr);
        a00 = _mm256_fmadd_pd(x0, b, a00);
        a10 = _mm256_fmadd_pd(x1, b, a10);
        b = _mm256_broadcast_sd(yr + 1);
        a01 = _mm256_fmadd_pd(x0, b, a01);
        a11 = _mm256_fmadd_pd(x1, b, a11);
        b = _mm256_broadcast_sd(yr + 2);
        a02 = _mm256_fmadd_pd(x0, b, a02);
        a12 = _mm256_fmadd_pd(x1, b, a12);
        b = _mm256_broadcast_sd(yr + 3);
        a03 = _mm256_fmadd_pd(x0, b, a03);
        a13 = _mm256_fmadd_pd(x1, b, a13);
      }
      best0 = _mm256_max_pd(best0, _mm256_max_pd(_mm256_max_pd(a00, a01), _mm256_max_pd(a02, a03)));
      best1 = _mm256_max_pd(best1, _mm256_max_pd(_mm256_max_pd(a10, a11), _mm256_max_pd(a12, a13)));
    }
    for (; q < n_y; ++q) {
      __m256d a0 = _mm256_setzero_pd(), a1 = a0;
      for (std::size_t c = 0; c < channels; ++c) {
        const double* xr = x + c * x_stride + p;
        const __m256d b = _mm256_broadcast_sd(y + c * y_stride + q);
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(xr), b, a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(xr + 4), b, a1);
      }
      best0 = _mm256_max_pd(best0, a0);
      best1 = _mm256_max_pd(best1, a1);
    }
    _mm256_storeu_pd(out + p, best0);
    _mm256_storeu_pd(out + p + 4, best1);
  }
  for (; p + 4 <= n_x; p += 4) {
    __m256d best = _mm256_set1_pd(kNegInf);
    for (std::size_t q = 0; q < n_y; ++q) {
      __m256d a = _mm256_setzero_pd();
      for (std::size_t c = 0; c < channels; ++c)
        a = _mm256_fmadd_pd(_mm256_loadu_pd(x + c * x_stride + p),
                            _mm256_broadcast_sd(y + c * y_stride + q), a);
      best = _mm256_max_pd(best, a);
    }
    _mm256_storeu_pd(out + p, best);
  }
  max_dot_tail(x, x_stride, p, n_x, y, y_stride, n_y, channels, out);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double max_value_avx2(const double* x, std::size_t n) {
  std::size_t i = 0;
  double best = kNegInf;
  if (n >= 4) {
    __m256d vb = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) vb = _mm256_max_pd(vb, _mm256_loadu_pd(x + i));
    best = hmax(vb);
  }
  for (; i < n; ++i) best = smax(best, x[i]);
  return best;
}

}  // namespace pmvos::simd::detail
