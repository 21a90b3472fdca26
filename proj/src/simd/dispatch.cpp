#include <cstdlib>
#include <cstring>

#include "axrel/error.hpp"
#include "axrel/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace axrel::simd {

namespace {

void check_lengths(std::size_t a, std::size_t b, std::size_t out) {
  if (a != b || a != out) throw Error(Errc::ShapeMismatch, "kernel operand spans differ in length");
}

Isa detect() noexcept {
  if (const char* env = std::getenv("AXREL_ISA"); env && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if AXREL_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

void mitchell_products(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                       std::span<std::uint32_t> out, unsigned n, unsigned t, Isa isa) {
  check_lengths(a.size(), b.size(), out.size());
#if AXREL_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
    avx2::mitchell_products(a.data(), b.data(), out.data(), a.size(), n, t);
    return;
  }
#endif
  scalar::mitchell_products(a.data(), b.data(), out.data(), a.size(), n, t);
}

void exact_products(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out, Isa isa) {
  check_lengths(a.size(), b.size(), out.size());
#if AXREL_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) {
    avx2::exact_products(a.data(), b.data(), out.data(), a.size());
    return;
  }
#endif
  scalar::exact_products(a.data(), b.data(), out.data(), a.size());
}

std::int32_t dot_i32(std::span<const std::int32_t> x, std::span<const std::int32_t> y, Isa isa) {
  check_lengths(x.size(), y.size(), x.size());
#if AXREL_HAVE_AVX2_KERNELS
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return avx2::dot_i32(x.data(), y.data(), x.size());
#endif
  return scalar::dot_i32(x.data(), y.data(), x.size());
}

}  // namespace axrel::simd
