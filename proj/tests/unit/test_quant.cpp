#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "axrel/error.hpp"
#include "axrel/faults/rng.hpp"
#include "axrel/quant/quant.hpp"

using namespace axrel;
using namespace axrel::quant;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an axrel::Error");
  return Errc::InvalidConfig;
}

std::vector<float> random_weights(std::uint64_t seed, std::size_t n) {
  std::vector<float> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = static_cast<float>(faults::draw_unit({seed, 5}, i) * 4.0 - 2.0);
  return w;
}

}  // namespace

TEST_CASE("quantize examples") {
  const std::vector<float> w{-1.0F, 0.0F, 0.5F, 1.0F};
  const auto q = quantize(w, 3);
  CHECK(q.scheme.scale == doctest::Approx(1.0 / 3.0));
  CHECK(q.codes == std::vector<Word>{1, 4, 6, 7});
  const auto z = quantize(std::vector<float>(5, 0.0F), 4);
  CHECK(z.scheme.scale == 1.0);
  CHECK(z.codes == std::vector<Word>(5, 8));
}

TEST_CASE("quantize rejects bad input") {
  CHECK(code_of([] { quantize(std::vector<float>{}, 4); }) == Errc::EmptyTensor);
  CHECK(code_of([] { quantize(std::vector<float>{1.0F, std::numeric_limits<float>::quiet_NaN()}, 4); }) ==
        Errc::NonFiniteWeight);
  CHECK(code_of([] { quantize(std::vector<float>{1.0F, INFINITY}, 4); }) == Errc::NonFiniteWeight);
  CHECK(code_of([] { quantize(std::vector<float>{1.0F}, 1); }) == Errc::InvalidConfig);
  CHECK(code_of([] { quantize(std::vector<float>{1.0F}, 9); }) == Errc::InvalidConfig);
}

TEST_CASE("rounding is half away from zero") {
  // s = 1 for max|w| = 3 at b = 3; +-0.5 and +-1.5 sit on ties.
  const auto q = quantize(std::vector<float>{3.0F, 0.5F, -0.5F, 1.5F, -1.5F}, 3);
  CHECK(q.codes == std::vector<Word>{7, 5, 3, 6, 2});
}

TEST_CASE("dequantize examples") {
  const QuantScheme s{3, 1.0 / 3.0};
  CHECK(dequantize(std::vector<Word>{4}, s)[0] == 0.0);
  CHECK(dequantize(std::vector<Word>{7}, s)[0] == doctest::Approx(1.0));
  CHECK(dequantize(std::vector<Word>{0}, s)[0] == doctest::Approx(-4.0 / 3.0));
  CHECK(code_of([&] { dequantize(std::vector<Word>{8}, s); }) == Errc::CodeOutOfRange);
}

TEST_CASE("round trip error is at most half a step") {
  for (unsigned b = 2; b <= 8; ++b) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto w = random_weights(seed, 257);
      const auto q = quantize(w, b);
      const auto back = dequantize(q.codes, q.scheme);
      for (std::size_t i = 0; i < w.size(); ++i) {
        REQUIRE(std::fabs(back[i] - w[i]) <= q.scheme.scale / 2 * (1 + 1e-6));
      }
    }
  }
}

TEST_CASE("quantization is monotone") {
  std::vector<float> w(2001);
  for (int i = 0; i < 2001; ++i) w[i] = static_cast<float>(-1.0 + i * 0.001);
  for (unsigned b = 2; b <= 8; ++b) {
    const auto q = quantize(w, b);
    for (std::size_t i = 1; i < w.size(); ++i) REQUIRE(q.codes[i - 1] <= q.codes[i]);
  }
}

TEST_CASE("protect examples") {
  const auto p = protect(0b101, 3);
  CHECK(p.code == 0b101);
  CHECK(p.msb_copy_1);
  CHECK(p.msb_copy_2);
  CHECK(p.stored() == 0b11101);
  const auto q = protect(0b011, 3);
  CHECK_FALSE(q.msb_copy_1);
  CHECK_FALSE(q.msb_copy_2);
  CHECK(ProtectedWord::from_stored(p.stored(), 3) == p);
  CHECK(protected_width(3) == 5);
}

TEST_CASE("majority vote examples") {
  ProtectedWord p = protect(0b101, 3);
  p.code = 0b001;  // stored MSB flipped
  CHECK(majority_decode(p) == 0b101);
  ProtectedWord c = protect(0b101, 3);
  c.msb_copy_1 = false;
  CHECK(majority_decode(c) == 0b101);
}

TEST_CASE("vote corrects every single flip among the voted bits, for every width") {
  for (unsigned b = 2; b <= 8; ++b) {
    for (Word code = 0; code < (1U << b); ++code) {
      const Word stored = protect(code, b).stored();
      REQUIRE(majority_decode(ProtectedWord::from_stored(stored, b)) == code);
      for (unsigned bit : {b - 1, b, b + 1}) {
        REQUIRE(majority_decode(ProtectedWord::from_stored(stored ^ (1U << bit), b)) == code);
      }
      for (unsigned bit = 0; bit + 1 < b; ++bit) {
        REQUIRE(majority_decode(ProtectedWord::from_stored(stored ^ (1U << bit), b)) == (code ^ (1U << bit)));
      }
    }
  }
}

TEST_CASE("tensor protect/decode helpers") {
  const std::vector<Word> codes{0, 5, 31, 16, 15};
  const auto stored = protect_all(codes, 5);
  CHECK(decode_all(stored, 5) == codes);
}

TEST_CASE("memory model") {
  CHECK(protected_memory_bits(28133056, 8, false) == 225064448ULL);
  CHECK(protected_memory_bits(28133056, 5, true) == 196931392ULL);
  CHECK(protected_memory_bits(28133056, 4, true) == 168798336ULL);
  CHECK(protected_memory_bits(28133056, 3, true) == 140665280ULL);
  for (std::uint64_t n : {1ULL, 7ULL, 1000ULL, 28133056ULL}) {
    for (unsigned b = 2; b <= 8; ++b) {
      REQUIRE(protected_memory_bits(n, b, true) - protected_memory_bits(n, b, false) == 2 * n);
    }
  }
}
