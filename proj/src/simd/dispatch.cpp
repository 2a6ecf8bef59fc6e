#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"
#include "pmvos/simd/kernels.hpp"

namespace pmvos::simd {

namespace {

constexpr KernelTable kScalar{
    Isa::scalar,
    "scalar",
    detail::sum_squares_strided_scalar,
    detail::scale_strided_scalar,
    detail::max_dot_scalar,
    detail::dot_scalar,
    detail::axpy_scalar,
    detail::max_value_scalar,
};

#if defined(PMVOS_HAVE_AVX2)
constexpr KernelTable kAvx2{
    Isa::avx2,
    "avx2",
    detail::sum_squares_strided_avx2,
    detail::scale_strided_avx2,
    detail::max_dot_avx2,
    detail::dot_avx2,
    detail::axpy_avx2,
    detail::max_value_avx2,
};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("PMVOS_SIMD"); env && std::string_view(env) == "scalar")
    return kScalar;
  if (const KernelTable* t = avx2_kernels()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

const KernelTable* avx2_kernels() noexcept {
#if defined(PMVOS_HAVE_AVX2)
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace pmvos::simd
