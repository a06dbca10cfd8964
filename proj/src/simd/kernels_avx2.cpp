// Compiled with -mavx2; only reached through dispatch after a CPU check.

#include <immintrin.h>

#include <bit>

#include "dsbn/simd/kernels.hpp"

namespace dsbn::simd {
namespace {

void superset_sum(double* values, std::size_t len, std::size_t stride) {
  if (stride < 4) {
    scalar_kernels().superset_sum(values, len, stride);
    return;
  }
  // stride is a power of two >= 4, so every half-block is a whole number of
  // 4-wide vectors.
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    double* lo = values + base;
    const double* hi = lo + stride;
    for (std::size_t i = 0; i < stride; i += 4) {
      __m256d a = _mm256_loadu_pd(lo + i);
      __m256d b = _mm256_loadu_pd(hi + i);
      _mm256_storeu_pd(lo + i, _mm256_add_pd(a, b));
    }
  }
}

void superset_diff(double* values, std::size_t len, std::size_t stride) {
  if (stride < 4) {
    scalar_kernels().superset_diff(values, len, stride);
    return;
  }
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    double* lo = values + base;
    const double* hi = lo + stride;
    for (std::size_t i = 0; i < stride; i += 4) {
      __m256d a = _mm256_loadu_pd(lo + i);
      __m256d b = _mm256_loadu_pd(hi + i);
      _mm256_storeu_pd(lo + i, _mm256_sub_pd(a, b));
    }
  }
}

void twice_minus(double* dst, const double* a, const double* b, std::size_t n) {
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_mul_pd(two, va), vb));
  }
  for (; i < n; ++i) dst[i] = 2.0 * a[i] - b[i];
}

void conjoin_row(std::uint64_t key, double mass, const std::uint64_t* keys,
                 const double* masses, std::size_t n, std::uint64_t* out_keys,
                 double* out_mass, std::uint8_t* out_empty) {
  const __m256i vkey = _mm256_set1_epi64x(static_cast<long long>(key));
  const __m256d vmass = _mm256_set1_pd(mass);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i k = _mm256_and_si256(vkey, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys + i)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out_keys + i), k);
    _mm256_storeu_pd(out_mass + i, _mm256_mul_pd(vmass, _mm256_loadu_pd(masses + i)));
    auto zero_bytes = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(k, zero)));
    for (int lane = 0; lane < 4; ++lane) {
      out_empty[i + lane] = ((zero_bytes >> (8 * lane)) & 0xffu) != 0;
    }
  }
  if (i < n) {
    scalar_kernels().conjoin_row(key, mass, keys + i, masses + i, n - i, out_keys + i,
                                 out_mass + i, out_empty + i);
  }
}

std::size_t count_at_most(const double* cdf, std::size_t n, double t) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d c = _mm256_loadu_pd(cdf + i);
    int le = _mm256_movemask_pd(_mm256_cmp_pd(c, vt, _CMP_LE_OQ));
    if (le != 0xf) return i + static_cast<std::size_t>(std::countr_one(static_cast<unsigned>(le)));
  }
  for (; i < n && cdf[i] <= t; ++i) {
  }
  return i;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{Isa::avx2, superset_sum, superset_diff,
                                 twice_minus, conjoin_row, count_at_most};
  return table;
}

}  // namespace dsbn::simd
