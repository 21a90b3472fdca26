#include "kernels_impl.hpp"

#if AXREL_HAVE_AVX2_KERNELS

#include <immintrin.h>

#define AXREL_AVX2 __attribute__((target("avx2")))

namespace axrel::simd::avx2 {

namespace {

// floor(log2 x) for 0 < x < 2^24 via the float exponent.
AXREL_AVX2 inline __m256i leading_one(__m256i x) {
  const __m256i bits = _mm256_castps_si256(_mm256_cvtepi32_ps(x));
  return _mm256_sub_epi32(_mm256_srli_epi32(bits, 23), _mm256_set1_epi32(127));
}

}  // namespace

AXREL_AVX2 void mitchell_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                                  std::size_t len, unsigned n, unsigned t) {
  const unsigned w = n - 1 - t;
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i field = _mm256_set1_epi32(static_cast<int>((1U << (n - 1)) - 1));
  const __m256i top = _mm256_set1_epi32(static_cast<int>(n - 1));
  const __m256i width = _mm256_set1_epi32(static_cast<int>(w));
  const __m256i hidden = _mm256_set1_epi32(static_cast<int>(1U << w));
  const __m128i t_count = _mm_cvtsi32_si128(static_cast<int>(t));
  const __m128i w_count = _mm_cvtsi32_si128(static_cast<int>(w));

  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i kx = leading_one(x);
    const __m256i ky = leading_one(y);
    const __m256i mx = _mm256_srl_epi32(
        _mm256_and_si256(_mm256_sllv_epi32(x, _mm256_sub_epi32(top, kx)), field), t_count);
    const __m256i my = _mm256_srl_epi32(
        _mm256_and_si256(_mm256_sllv_epi32(y, _mm256_sub_epi32(top, ky)), field), t_count);
    const __m256i s = _mm256_add_epi32(mx, my);
    const __m256i carry = _mm256_and_si256(_mm256_srl_epi32(s, w_count), one);
    const __m256i no_carry = _mm256_cmpeq_epi32(carry, zero);
    const __m256i val = _mm256_add_epi32(s, _mm256_and_si256(no_carry, hidden));
    const __m256i e = _mm256_add_epi32(_mm256_add_epi32(kx, ky), carry);
    const __m256i lsh = _mm256_max_epi32(_mm256_sub_epi32(e, width), zero);
    const __m256i rsh = _mm256_max_epi32(_mm256_sub_epi32(width, e), zero);
    __m256i p = _mm256_srlv_epi32(_mm256_sllv_epi32(val, lsh), rsh);
    const __m256i any_zero = _mm256_or_si256(_mm256_cmpeq_epi32(x, zero), _mm256_cmpeq_epi32(y, zero));
    p = _mm256_andnot_si256(any_zero, p);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), p);
  }
  scalar::mitchell_products(a + i, b + i, out + i, len - i, n, t);
}

AXREL_AVX2 void exact_products(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out,
                               std::size_t len) {
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), _mm256_mullo_epi32(x, y));
  }
  scalar::exact_products(a + i, b + i, out + i, len - i);
}

AXREL_AVX2 std::int32_t dot_i32(const std::int32_t* x, const std::int32_t* y, std::size_t len) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    const __m256i vx = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    const __m256i vy = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(y + i));
    acc = _mm256_add_epi32(acc, _mm256_mullo_epi32(vx, vy));
  }
  __m128i s = _mm_add_epi32(_mm256_castsi256_si128(acc), _mm256_extracti128_si256(acc, 1));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(1, 0, 3, 2)));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, _MM_SHUFFLE(2, 3, 0, 1)));
  const auto head = static_cast<std::uint32_t>(_mm_cvtsi128_si32(s));
  const auto tail = static_cast<std::uint32_t>(scalar::dot_i32(x + i, y + i, len - i));
  return static_cast<std::int32_t>(head + tail);
}

}  // namespace axrel::simd::avx2

#endif
