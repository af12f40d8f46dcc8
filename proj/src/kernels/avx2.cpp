// Built with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "kernels_internal.hpp"

namespace mcwlan::kernels::detail {

namespace {

inline __m256i load4(const VertexMask* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

// All-ones lanes where (m & bits) == bits.
inline __m256d has_bits(__m256i m, __m256i bits) {
  return _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(m, bits), bits));
}

inline __m256d select_lanes(__m256i m, __m256i select, __m256i expect) {
  return _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(m, select), expect));
}

inline double hsum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

void subset_products_avx2(const VertexMask* masks, std::size_t count,
                          const double* factors, int n_factors, double* out) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t s = 0;
  for (; s + 4 <= count; s += 4) {
    const __m256i m = load4(masks + s);
    __m256d acc = one;
    for (int j = 0; j < n_factors; ++j) {
      const __m256i bit = _mm256_set1_epi64x(static_cast<long long>(VertexMask{1} << j));
      acc = _mm256_mul_pd(acc, _mm256_blendv_pd(one, _mm256_set1_pd(factors[j]),
                                                has_bits(m, bit)));
    }
    _mm256_storeu_pd(out + s, acc);
  }
  subset_products_scalar(masks + s, count - s, factors, n_factors, out + s);
}

double masked_sum_avx2(const VertexMask* masks, const double* weights,
                       std::size_t count, VertexMask select, VertexMask expect) {
  const __m256i sel = _mm256_set1_epi64x(static_cast<long long>(select));
  const __m256i exp = _mm256_set1_epi64x(static_cast<long long>(expect));
  __m256d acc = _mm256_setzero_pd();
  std::size_t s = 0;
  for (; s + 4 <= count; s += 4) {
    const __m256d keep = select_lanes(load4(masks + s), sel, exp);
    acc = _mm256_add_pd(acc, _mm256_and_pd(keep, _mm256_loadu_pd(weights + s)));
  }
  return hsum(acc) +
         masked_sum_scalar(masks + s, weights + s, count - s, select, expect);
}

double masked_product_sum_avx2(const VertexMask* select_masks,
                               const VertexMask* product_masks,
                               const double* weights, std::size_t count,
                               VertexMask select, VertexMask expect,
                               VertexMask filter, const double* factors) {
  const __m256i sel = _mm256_set1_epi64x(static_cast<long long>(select));
  const __m256i exp = _mm256_set1_epi64x(static_cast<long long>(expect));
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t s = 0;
  for (; s + 4 <= count; s += 4) {
    const __m256d keep = select_lanes(load4(select_masks + s), sel, exp);
    if (_mm256_movemask_pd(keep) == 0) continue;
    const __m256i pm = load4(product_masks + s);
    __m256d prod = one;
    for (VertexMask f = filter; f; f &= f - 1) {
      const int j = std::countr_zero(f);
      const __m256i bit = _mm256_set1_epi64x(static_cast<long long>(VertexMask{1} << j));
      prod = _mm256_mul_pd(prod, _mm256_blendv_pd(one, _mm256_set1_pd(factors[j]),
                                                  has_bits(pm, bit)));
    }
    const __m256d term = _mm256_mul_pd(_mm256_loadu_pd(weights + s), prod);
    acc = _mm256_add_pd(acc, _mm256_and_pd(keep, term));
  }
  return hsum(acc) + masked_product_sum_scalar(select_masks + s, product_masks + s,
                                               weights + s, count - s, select,
                                               expect, filter, factors);
}

}  // namespace mcwlan::kernels::detail
