#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Batch kernels for the hot loops: multiplier sweeps and integer MAC rows.
// Every kernel has a scalar reference; vector variants must match it bit for bit.
namespace axrel::simd {

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

bool isa_available(Isa isa) noexcept;

// Widest available ISA. AXREL_ISA=scalar in the environment forces the
// scalar path.
Isa best_isa() noexcept;

// Fault-free Mitchell products of n-bit operands with t truncated mantissa
// bits; a zero operand yields 0. Spans must have equal length.
void mitchell_products(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                       std::span<std::uint32_t> out, unsigned n, unsigned t, Isa isa = best_isa());

void exact_products(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::span<std::uint32_t> out, Isa isa = best_isa());

// Dot product with a 32-bit two's-complement accumulator (wraps on overflow).
std::int32_t dot_i32(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                     Isa isa = best_isa());

}  // namespace axrel::simd
