#include "axrel/quant/quant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "axrel/error.hpp"

namespace axrel::quant {

namespace {

void check_bits(unsigned bits) {
  if (bits < 2 || bits > 8) {
    throw Error(Errc::InvalidConfig, "quantization bit width must be in [2, 8], got " + std::to_string(bits));
  }
}

}  // namespace

QuantizedTensor quantize(std::span<const float> weights, unsigned bits) {
  check_bits(bits);
  if (weights.empty()) throw Error(Errc::EmptyTensor, "cannot quantize an empty tensor");
  double max_abs = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) {
      throw Error(Errc::NonFiniteWeight, "weight " + std::to_string(i) + " is not finite");
    }
    max_abs = std::max(max_abs, std::fabs(static_cast<double>(weights[i])));
  }
  QuantScheme scheme{bits, 1.0};
  if (max_abs > 0.0) scheme.scale = max_abs / static_cast<double>((1U << (bits - 1)) - 1);

  QuantizedTensor out{{}, scheme};
  out.codes.reserve(weights.size());
  const auto zero = static_cast<double>(scheme.zero_code());
  const auto top = static_cast<double>(scheme.max_code());
  for (float w : weights) {
    const double q = std::round(static_cast<double>(w) / scheme.scale) + zero;
    out.codes.push_back(static_cast<Word>(std::clamp(q, 0.0, top)));
  }
  return out;
}

std::vector<double> dequantize(std::span<const Word> codes, const QuantScheme& scheme) {
  check_bits(scheme.bits);
  std::vector<double> out;
  out.reserve(codes.size());
  const auto zero = static_cast<std::int64_t>(scheme.zero_code());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] > scheme.max_code()) {
      throw Error(Errc::CodeOutOfRange, "code " + std::to_string(codes[i]) + " at index " +
                                            std::to_string(i) + " exceeds " + std::to_string(scheme.bits) +
                                            " bits");
    }
    out.push_back(static_cast<double>(static_cast<std::int64_t>(codes[i]) - zero) * scheme.scale);
  }
  return out;
}

Word ProtectedWord::stored() const noexcept {
  return code | (Word{msb_copy_1} << bits) | (Word{msb_copy_2} << (bits + 1));
}

ProtectedWord ProtectedWord::from_stored(Word stored, unsigned bits) {
  const Word mask = (Word{1} << bits) - 1;
  return {stored & mask, ((stored >> bits) & 1U) != 0, ((stored >> (bits + 1)) & 1U) != 0, bits};
}

ProtectedWord protect(Word code, unsigned bits) {
  check_bits(bits);
  if (code >> bits) {
    throw Error(Errc::CodeOutOfRange, "code " + std::to_string(code) + " exceeds " + std::to_string(bits) + " bits");
  }
  const bool msb = ((code >> (bits - 1)) & 1U) != 0;
  return {code, msb, msb, bits};
}

Word majority_decode(const ProtectedWord& p) {
  const Word msb_bit = Word{1} << (p.bits - 1);
  const int votes = ((p.code & msb_bit) != 0) + p.msb_copy_1 + p.msb_copy_2;
  return votes >= 2 ? (p.code | msb_bit) : (p.code & ~msb_bit);
}

std::vector<Word> protect_all(std::span<const Word> codes, unsigned bits) {
  std::vector<Word> out;
  out.reserve(codes.size());
  for (Word c : codes) out.push_back(protect(c, bits).stored());
  return out;
}

std::vector<Word> decode_all(std::span<const Word> stored, unsigned bits) {
  std::vector<Word> out;
  out.reserve(stored.size());
  for (Word s : stored) out.push_back(majority_decode(ProtectedWord::from_stored(s, bits)));
  return out;
}

std::uint64_t protected_memory_bits(std::uint64_t param_count, unsigned bits, bool is_protected) {
  return param_count * (is_protected ? protected_width(bits) : bits);
}

}  // namespace axrel::quant
