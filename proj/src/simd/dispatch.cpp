#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "k2t/error.hpp"
#include "k2t/simd/kernels.hpp"

namespace k2t::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() noexcept {
  if (const char* env = std::getenv("K2T_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    if (want == "neon" && isa_available(Isa::Neon)) return Isa::Neon;
  }
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

std::atomic<int>& current() {
  static std::atomic<int> isa{static_cast<int>(detect())};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) {
    throw InvalidArgument("vector size mismatch: " + std::to_string(a) +
                          " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return avx2::table() != nullptr && cpu_has_avx2();
    case Isa::Neon: return neon::table() != nullptr;
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) {
    throw InvalidArgument("SIMD variant not available: " +
                          std::string(isa_name(isa)));
  }
  switch (isa) {
    case Isa::Avx2: return *avx2::table();
    case Isa::Neon: return *neon::table();
    case Isa::Scalar: break;
  }
  return scalar::table();
}

Isa active_isa() noexcept { return static_cast<Isa>(current().load()); }

const KernelTable& active() noexcept {
  // active_isa() is only ever set to an available variant.
  switch (active_isa()) {
    case Isa::Avx2: return *avx2::table();
    case Isa::Neon: return *neon::table();
    case Isa::Scalar: break;
  }
  return scalar::table();
}

void force_isa(Isa isa) {
  kernels_for(isa);
  current().store(static_cast<int>(isa));
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return active().dot(a.data(), b.data(), a.size());
}

double sum_squares(std::span<const double> a) {
  return active().sum_squares(a.data(), a.size());
}

double norm(std::span<const double> a) { return std::sqrt(sum_squares(a)); }

void add_into(std::span<double> acc, std::span<const double> x) {
  check_sizes(acc.size(), x.size());
  active().add_into(acc.data(), x.data(), x.size());
}

void scale(std::span<double> x, double s) {
  active().scale(x.data(), s, x.size());
}

double cosine(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  const auto& k = active();
  const double na = k.sum_squares(a.data(), a.size());
  const double nb = k.sum_squares(b.data(), b.size());
  if (na == 0.0 || nb == 0.0) return 0.0;
  return k.dot(a.data(), b.data(), a.size()) / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace k2t::simd
