#include <bit>

#include "kernels_internal.hpp"

namespace mcwlan::kernels::detail {

void subset_products_scalar(const VertexMask* masks, std::size_t count,
                            const double* factors, int /*n_factors*/,
                            double* out) {
  for (std::size_t s = 0; s < count; ++s) {
    double p = 1.0;
    for (VertexMask m = masks[s]; m; m &= m - 1) p *= factors[std::countr_zero(m)];
    out[s] = p;
  }
}

double masked_sum_scalar(const VertexMask* masks, const double* weights,
                         std::size_t count, VertexMask select,
                         VertexMask expect) {
  double acc = 0.0;
  for (std::size_t s = 0; s < count; ++s)
    if ((masks[s] & select) == expect) acc += weights[s];
  return acc;
}

double masked_product_sum_scalar(const VertexMask* select_masks,
                                 const VertexMask* product_masks,
                                 const double* weights, std::size_t count,
                                 VertexMask select, VertexMask expect,
                                 VertexMask filter, const double* factors) {
  double acc = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    if ((select_masks[s] & select) != expect) continue;
    double p = 1.0;
    for (VertexMask m = product_masks[s] & filter; m; m &= m - 1)
      p *= factors[std::countr_zero(m)];
    acc += weights[s] * p;
  }
  return acc;
}

}  // namespace mcwlan::kernels::detail
