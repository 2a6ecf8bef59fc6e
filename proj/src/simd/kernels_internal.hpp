#pragma once

#include <cstddef>

namespace pmvos::simd::detail {

void sum_squares_strided_scalar(const double*, std::size_t, std::size_t, std::size_t, double*);
void scale_strided_scalar(double*, std::size_t, std::size_t, std::size_t, const double*);
void max_dot_scalar(const double*, std::size_t, std::size_t, const double*, std::size_t,
                    std::size_t, std::size_t, double*);
double dot_scalar(const double*, const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
double max_value_scalar(const double*, std::size_t);

#if defined(PMVOS_HAVE_AVX2)
void sum_squares_strided_avx2(const double*, std::size_t, std::size_t, std::size_t, double*);
void scale_strided_avx2(double*, std::size_t, std::size_t, std::size_t, const double*);
void max_dot_avx2(const double*, std::size_t, std::size_t, const double*, std::size_t,
                  std::size_t, std::size_t, double*);
double dot_avx2(const double*, const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
double max_value_avx2(const double*, std::size_t);
#endif

}  // namespace pmvos::simd::detail
