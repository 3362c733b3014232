#include <atomic>

#include "kernels_internal.hpp"

namespace semcomm::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SEMCOMM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* detect() {
  if (const KernelTable* t = avx2_kernels()) return t;
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* avx2_kernels() {
#if defined(SEMCOMM_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(Isa isa) {
  const KernelTable* t = isa == Isa::kAvx2 ? avx2_kernels() : &detail::kScalarTable;
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace semcomm::kernels
