#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace mcwlan::kernels {

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, "scalar",
                                 detail::subset_products_scalar,
                                 detail::masked_sum_scalar,
                                 detail::masked_product_sum_scalar};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(MCWLAN_BUILD_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{Isa::avx2, "avx2",
                                 detail::subset_products_avx2,
                                 detail::masked_sum_avx2,
                                 detail::masked_product_sum_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* force = std::getenv("MCWLAN_KERNELS");
    if (force && std::strcmp(force, "scalar") == 0) return scalar_kernels();
    if (const KernelTable* v = avx2_kernels()) return *v;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace mcwlan::kernels
