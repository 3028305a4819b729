#pragma once

// Vector kernels behind every dense inner loop of the library. A scalar
// reference implementation is always present; AVX2+FMA (x86-64) or NEON
// (aarch64) variants are compiled when the target supports them and picked
// at runtime from the CPU feature set.

#include <cstddef>
#include <string_view>

namespace pdtls::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  /// Σ x[i]·y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y ← y + alpha·x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// x ← alpha·x
  void (*scale)(double alpha, double* x, std::size_t n);
  /// Plane rotation: x ← c·x − s·y, y ← s·x + c·y
  void (*rot)(double* x, double* y, std::size_t n, double c, double s);
  /// Σ x[i]²
  double (*sum_squares)(const double* x, std::size_t n);
};

/// True if the variant was compiled in and the running CPU can execute it.
bool isa_available(Isa isa) noexcept;

/// Table for a specific variant; nullptr when unavailable.
const KernelTable* kernels_for(Isa isa) noexcept;

/// Best available variant for this CPU, unless a ScopedIsa override is active
/// on the calling thread.
const KernelTable& kernels() noexcept;

/// Pins the calling thread to one kernel variant for the lifetime of the
/// object. Used by the equivalence tests to run whole solvers on the scalar
/// reference path.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  const KernelTable* previous_;
};

namespace detail {
extern const KernelTable scalar_table;
#if defined(PDTLS_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(PDTLS_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace pdtls::simd
