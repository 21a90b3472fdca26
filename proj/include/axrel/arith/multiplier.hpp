#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace axrel::faults {
class FaultPlan;
}

namespace axrel::arith {

enum class Family : std::uint8_t { Exact, Mitchell, AdAM };

// Unsigned operand of a fixed-width multiplier, 0 <= value < 2^width.
class UWord {
 public:
  UWord(std::uint32_t value, unsigned width);

  std::uint32_t value() const noexcept { return value_; }
  unsigned width() const noexcept { return width_; }

 private:
  std::uint32_t value_;
  unsigned width_;
};

// n: operand width (8 or 16). t: mantissa bits dropped. h: duplication level.
// t and h are ignored for Exact, h for Mitchell.
struct MultConfig {
  Family family = Family::Exact;
  unsigned n = 8;
  unsigned t = 0;
  unsigned h = 0;

  static MultConfig exact(unsigned n) { return {Family::Exact, n, 0, 0}; }
  static MultConfig mitchell(unsigned n, unsigned t = 0) { return {Family::Mitchell, n, t, 0}; }
  static MultConfig adam(unsigned n, unsigned t, unsigned h) { return {Family::AdAM, n, t, h}; }

  // Width of the truncated mantissa adder inputs, n - 1 - t.
  unsigned mantissa_width() const noexcept { return n - 1 - t; }

  // Throws InvalidConfig.
  void validate() const;

  bool operator==(const MultConfig&) const = default;
};

// "Exact", "Mitchell(t)", "AdAM(t,h)". Label order is (t, h).
std::string to_label(const MultConfig& cfg);
MultConfig parse_label(const std::string& label, unsigned n);
std::string_view to_string(Family f) noexcept;

struct MulOutcome {
  std::uint32_t product = 0;
  bool fault_detected = false;
  bool mitigated = false;

  bool operator==(const MulOutcome&) const = default;
};

// Index of the highest set bit. Throws ZeroOperand for 0.
unsigned lod(UWord x);

std::uint32_t exact_mul(UWord a, UWord b);

MulOutcome mitchell_mul(UWord a, UWord b, const MultConfig& cfg);

// Mitchell datapath with single-event upsets on the mantissa adder outputs.
// Bit j of `adder_flips` (j <= mantissa_width()) toggles adder output bit j;
// bit mantissa_width() is the carry-out. No detection.
MulOutcome mitchell_mul(UWord a, UWord b, const MultConfig& cfg, std::uint32_t adder_flips);

// Internal layout of the AdAM adder for one operand pair.
struct AdderLayout {
  unsigned width = 0;          // w = n - 1 - t; outputs are bits [0, w]
  unsigned k_max = 0;
  unsigned significant = 0;    // top adder cells carrying mantissa bits
  unsigned duplicated = 0;     // d: cells recomputed by the duplicate slice
  // Output bits checked by the duplicate: [w - d, w] when d > 0.
  std::uint32_t checked_mask() const noexcept;
};

// Zero operands never reach the adder; the layout is empty for them.
AdderLayout adam_layout(UWord a, UWord b, const MultConfig& cfg);

MulOutcome adam_mul(UWord a, UWord b, const MultConfig& cfg, std::uint32_t adder_flips = 0);

// Applies every AdderInternalBit site of the plan (element and invocation are
// not consulted; callers route plans per invocation).
MulOutcome adam_mul(UWord a, UWord b, const MultConfig& cfg, const faults::FaultPlan& plan);

// Dispatches on cfg.family. Flips are ignored by Exact.
MulOutcome multiply(UWord a, UWord b, const MultConfig& cfg, std::uint32_t adder_flips = 0);

}  // namespace axrel::arith
