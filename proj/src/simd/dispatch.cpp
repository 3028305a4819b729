#include "pdtls/simd/kernels.hpp"

#include <stdexcept>
#include <string>

namespace pdtls::simd {
namespace {

thread_local const KernelTable* thread_override = nullptr;

bool cpu_has_avx2() noexcept {
#if defined(PDTLS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select_best() noexcept {
#if defined(PDTLS_HAVE_AVX2)
  if (cpu_has_avx2()) return detail::avx2_table;
#endif
#if defined(PDTLS_HAVE_NEON)
  return detail::neon_table;
#endif
  return detail::scalar_table;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept { return kernels_for(isa) != nullptr; }

const KernelTable* kernels_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_table;
    case Isa::avx2:
#if defined(PDTLS_HAVE_AVX2)
      if (cpu_has_avx2()) return &detail::avx2_table;
#endif
      return nullptr;
    case Isa::neon:
#if defined(PDTLS_HAVE_NEON)
      return &detail::neon_table;
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& kernels() noexcept {
  if (thread_override != nullptr) return *thread_override;
  static const KernelTable& best = select_best();
  return best;
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(thread_override) {
  const KernelTable* table = kernels_for(isa);
  if (table == nullptr) {
    throw std::invalid_argument("kernel variant not available on this CPU: " +
                                std::string(isa_name(isa)));
  }
  thread_override = table;
}

ScopedIsa::~ScopedIsa() { thread_override = previous_; }

}  // namespace pdtls::simd
