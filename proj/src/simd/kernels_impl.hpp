#pragma once

#include <cstddef>
#include <cstdint>

namespace axrel::simd {

namespace scalar {
void mitchell_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                       std::size_t len, unsigned n, unsigned t);
void exact_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t len);
std::int32_t dot_i32(const std::int32_t* x, const std::int32_t* y, std::size_t len);
}  // namespace scalar

#if defined(__x86_64__) || defined(__i386__)
#define AXREL_HAVE_AVX2_KERNELS 1
namespace avx2 {
void mitchell_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                       std::size_t len, unsigned n, unsigned t);
void exact_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t len);
std::int32_t dot_i32(const std::int32_t* x, const std::int32_t* y, std::size_t len);
}  // namespace avx2
#endif

}  // namespace axrel::simd
