#pragma once

// Data-parallel inner loops shared by the grid, matching and attention code.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant compiled in its own translation unit. The variant is picked
// once at runtime from CPUID; PMVOS_SIMD=scalar in the environment forces the
// reference path. Both tables are exposed so tests can check them against each
// other.

#include <cstddef>
#include <string_view>

namespace pmvos::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// out[i] = sum_c data[c * stride + i]^2 for i < n.
  void (*sum_squares_strided)(const double* data, std::size_t channels, std::size_t stride,
                              std::size_t n, double* out);

  /// data[c * stride + i] *= scale[i] for every channel c and i < n.
  void (*scale_strided)(double* data, std::size_t channels, std::size_t stride, std::size_t n,
                        const double* scale);

  /// Blocked "dot then max" product between two channel-major point sets.
  ///   out[p] = max_q sum_c x[c * x_stride + p] * y[c * y_stride + q]
  /// for p < n_x, q < n_y. Requires n_y >= 1.
  void (*max_dot)(const double* x, std::size_t x_stride, std::size_t n_x, const double* y,
                  std::size_t y_stride, std::size_t n_y, std::size_t channels, double* out);

  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  /// max_i x[i]; requires n >= 1.
  double (*max_value)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

/// The table used by the library. Selected once, on first use.
const KernelTable& active() noexcept;

}  // namespace pmvos::simd
