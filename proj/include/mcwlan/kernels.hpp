#pragma once

// Inner loops over the state space. Each kernel exists as a portable scalar
// reference and, on x86-64, an AVX2 variant that processes four states per
// step. The active table is picked once at first use from the CPU's feature
// bits; MCWLAN_KERNELS=scalar in the environment forces the reference path.
//
// Products are formed in ascending cell order in every variant, so
// subset_products agrees bit for bit across variants. The two reductions
// accumulate in four lanes under AVX2 and differ from scalar only by
// summation order.

#include <cstddef>

#include "mcwlan/topology.hpp"

namespace mcwlan::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  // out[s] = prod of factors[j] over bits j set in masks[s] (bit j is cell j+1).
  void (*subset_products)(const VertexMask* masks, std::size_t count,
                          const double* factors, int n_factors, double* out);

  // Sum of weights[s] over states with (masks[s] & select) == expect.
  double (*masked_sum)(const VertexMask* masks, const double* weights,
                       std::size_t count, VertexMask select, VertexMask expect);

  // Sum over states with (select_masks[s] & select) == expect of
  //   weights[s] * prod of factors[j] over bits j of (product_masks[s] & filter).
  double (*masked_product_sum)(const VertexMask* select_masks,
                               const VertexMask* product_masks,
                               const double* weights, std::size_t count,
                               VertexMask select, VertexMask expect,
                               VertexMask filter, const double* factors);
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();
const KernelTable& active_kernels();

}  // namespace mcwlan::kernels
