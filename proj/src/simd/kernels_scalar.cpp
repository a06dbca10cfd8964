#include "dsbn/simd/kernels.hpp"

namespace dsbn::simd {
namespace {

void superset_sum(double* values, std::size_t len, std::size_t stride) {
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) values[i] += values[i + stride];
  }
}

void superset_diff(double* values, std::size_t len, std::size_t stride) {
  for (std::size_t base = 0; base < len; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) values[i] -= values[i + stride];
  }
}

void twice_minus(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = 2.0 * a[i] - b[i];
}

void conjoin_row(std::uint64_t key, double mass, const std::uint64_t* keys,
                 const double* masses, std::size_t n, std::uint64_t* out_keys,
                 double* out_mass, std::uint8_t* out_empty) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t k = key & keys[i];
    out_keys[i] = k;
    out_mass[i] = mass * masses[i];
    std::uint8_t empty = 0;
    for (int lane = 0; lane < 8; ++lane) {
      if (((k >> (8 * lane)) & 0xffu) == 0) empty = 1;
    }
    out_empty[i] = empty;
  }
}

std::size_t count_at_most(const double* cdf, std::size_t n, double t) {
  std::size_t i = 0;
  while (i < n && cdf[i] <= t) ++i;
  return i;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::scalar, superset_sum, superset_diff,
                                 twice_minus, conjoin_row,  count_at_most};
  return table;
}

}  // namespace dsbn::simd
