#include <atomic>
#include <cstdlib>
#include <string>

#include "dsbn/simd/kernels.hpp"

namespace dsbn::simd {

#if DSBN_HAVE_AVX2
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels() {
#if DSBN_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_kernel_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_choice() {
  if (const char* env = std::getenv("DSBN_ISA")) {
    if (std::string(env) == "scalar") return &scalar_kernels();
  }
  if (const KernelTable* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_choice()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool force_isa(Isa isa) {
  const KernelTable* table = isa == Isa::scalar ? &scalar_kernels() : avx2_kernels();
  if (!table) return false;
  current().store(table, std::memory_order_release);
  return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::scalar ? "scalar" : "avx2"; }

}  // namespace dsbn::simd
