#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace axrel::quant {

using Word = std::uint32_t;

// Symmetric real range [-A, A] mapped onto unsigned b-bit codes centred on
// 2^(b-1): code = clamp(round(w / scale) + 2^(b-1), 0, 2^b - 1).
struct QuantScheme {
  unsigned bits = 8;
  double scale = 1.0;

  Word zero_code() const noexcept { return Word{1} << (bits - 1); }
  Word max_code() const noexcept { return (Word{1} << bits) - 1; }

  bool operator==(const QuantScheme&) const = default;
};

struct QuantizedTensor {
  std::vector<Word> codes;
  QuantScheme scheme;
};

// Per-tensor scale max|w| / (2^(b-1) - 1), or 1 for an all-zero tensor.
// Rounds half away from zero. Throws EmptyTensor, NonFiniteWeight, InvalidConfig.
QuantizedTensor quantize(std::span<const float> weights, unsigned bits);

// Throws CodeOutOfRange.
std::vector<double> dequantize(std::span<const Word> codes, const QuantScheme& scheme);

// b-bit code followed by two copies of its MSB at stored bits b and b+1.
struct ProtectedWord {
  Word code = 0;
  bool msb_copy_1 = false;
  bool msb_copy_2 = false;
  unsigned bits = 0;

  Word stored() const noexcept;
  static ProtectedWord from_stored(Word stored, unsigned bits);

  bool operator==(const ProtectedWord&) const = default;
};

constexpr unsigned protected_width(unsigned bits) noexcept { return bits + 2; }

ProtectedWord protect(Word code, unsigned bits);

// 2-of-3 vote over {code MSB, copy 1, copy 2}; lower bits pass through.
Word majority_decode(const ProtectedWord& p);

// Stored-word helpers over whole tensors.
std::vector<Word> protect_all(std::span<const Word> codes, unsigned bits);
std::vector<Word> decode_all(std::span<const Word> stored, unsigned bits);

std::uint64_t protected_memory_bits(std::uint64_t param_count, unsigned bits, bool is_protected);

}  // namespace axrel::quant
