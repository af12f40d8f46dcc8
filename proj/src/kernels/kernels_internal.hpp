#pragma once

#include "mcwlan/kernels.hpp"

namespace mcwlan::kernels::detail {

void subset_products_scalar(const VertexMask* masks, std::size_t count,
                            const double* factors, int n_factors, double* out);
double masked_sum_scalar(const VertexMask* masks, const double* weights,
                         std::size_t count, VertexMask select,
                         VertexMask expect);
double masked_product_sum_scalar(const VertexMask* select_masks,
                                 const VertexMask* product_masks,
                                 const double* weights, std::size_t count,
                                 VertexMask select, VertexMask expect,
                                 VertexMask filter, const double* factors);

#if defined(MCWLAN_BUILD_AVX2)
void subset_products_avx2(const VertexMask* masks, std::size_t count,
                          const double* factors, int n_factors, double* out);
double masked_sum_avx2(const VertexMask* masks, const double* weights,
                       std::size_t count, VertexMask select, VertexMask expect);
double masked_product_sum_avx2(const VertexMask* select_masks,
                               const VertexMask* product_masks,
                               const double* weights, std::size_t count,
                               VertexMask select, VertexMask expect,
                               VertexMask filter, const double* factors);
#endif

}  // namespace mcwlan::kernels::detail
