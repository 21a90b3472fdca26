#include <bit>

#include "kernels_impl.hpp"

namespace axrel::simd::scalar {

void mitchell_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                       std::size_t len, unsigned n, unsigned t) {
  const unsigned w = n - 1 - t;
  const std::uint32_t field = (std::uint32_t{1} << (n - 1)) - 1;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint32_t x = a[i];
    const std::uint32_t y = b[i];
    if (x == 0 || y == 0) {
      out[i] = 0;
      continue;
    }
    const unsigned kx = static_cast<unsigned>(std::bit_width(x)) - 1;
    const unsigned ky = static_cast<unsigned>(std::bit_width(y)) - 1;
    const std::uint32_t mx = ((x << (n - 1 - kx)) & field) >> t;
    const std::uint32_t my = ((y << (n - 1 - ky)) & field) >> t;
    const std::uint32_t s = mx + my;
    const std::uint32_t carry = s >> w;
    const std::uint32_t val = carry ? s : s + (std::uint32_t{1} << w);
    const unsigned e = kx + ky + carry;
    out[i] = e >= w ? val << (e - w) : val >> (w - e);
  }
}

void exact_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = a[i] * b[i];
}

std::int32_t dot_i32(const std::int32_t* x, const std::int32_t* y, std::size_t len) {
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < len; ++i) {
    acc += static_cast<std::uint32_t>(x[i]) * static_cast<std::uint32_t>(y[i]);
  }
  return static_cast<std::int32_t>(acc);
}

}  // namespace axrel::simd::scalar
