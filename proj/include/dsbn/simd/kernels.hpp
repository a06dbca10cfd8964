#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, on
// x86-64, an AVX2 variant chosen at runtime. Variants perform the same
// floating-point operations per element in the same order, so results are
// bit-identical across ISAs.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace dsbn::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;

  /// In each block of 2 * stride entries, adds the upper half into the lower
  /// half. `stride` is a power of two and `len` a multiple of 2 * stride.
  /// One sweep of the superset-sum (zeta) transform along one lattice bit.
  void (*superset_sum)(double* values, std::size_t len, std::size_t stride);

  /// Inverse sweep: values[i] -= values[i + stride].
  void (*superset_diff)(double* values, std::size_t len, std::size_t stride);

  /// dst[i] = 2 * a[i] - b[i].
  void (*twice_minus)(double* dst, const double* a, const double* b, std::size_t n);

  /// Intersects one product focal (packed key) with a run of focals.
  /// out_keys[i] = key & keys[i], out_mass[i] = mass * masses[i],
  /// out_empty[i] = 1 iff some byte lane of out_keys[i] is zero.
  void (*conjoin_row)(std::uint64_t key, double mass, const std::uint64_t* keys,
                      const double* masses, std::size_t n, std::uint64_t* out_keys,
                      double* out_mass, std::uint8_t* out_empty);

  /// Number of leading entries of a nondecreasing `cdf` that are <= t.
  std::size_t (*count_at_most)(const double* cdf, std::size_t n, double t);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels();

/// The dispatched table. Defaults to the best supported ISA; the
/// DSBN_ISA environment variable (`scalar` or `avx2`) overrides it.
const KernelTable& active();

/// Pins the dispatched ISA (tests, benchmarking). Returns false if unsupported.
bool force_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace dsbn::simd
