#pragma once

// Dense double-precision kernels behind every cosine, mean and sub-word
// accumulation in the toolkit. Each kernel has a scalar reference version and
// vectorized variants; the variant is picked once at runtime from CPU
// features (override with K2T_SIMD=scalar|avx2|neon).

#include <cstddef>
#include <span>
#include <string_view>

namespace k2t::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  /// acc[i] += x[i]
  void (*add_into)(double* acc, const double* x, std::size_t n);
  /// x[i] *= s
  void (*scale)(double* x, double s, std::size_t n);
};

namespace scalar {
const KernelTable& table() noexcept;
}
namespace avx2 {
/// Null when the build has no AVX2 variant.
const KernelTable* table() noexcept;
}
namespace neon {
const KernelTable* table() noexcept;
}

/// True when the variant is compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// The kernels for one specific variant. Throws InvalidArgument when the
/// variant is unavailable on this machine.
const KernelTable& kernels_for(Isa isa);

Isa active_isa() noexcept;
const KernelTable& active() noexcept;

/// Switches the process-wide variant. Intended for tests and benchmarks.
void force_isa(Isa isa);

// Span conveniences over the active table. Sizes must match.
double dot(std::span<const double> a, std::span<const double> b);
double sum_squares(std::span<const double> a);
double norm(std::span<const double> a);
void add_into(std::span<double> acc, std::span<const double> x);
void scale(std::span<double> x, double s);

/// Cosine similarity. Returns 0 when either vector has zero norm; callers
/// that must reject zero vectors check the norm themselves.
double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace k2t::simd
