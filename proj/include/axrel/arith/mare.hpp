#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "axrel/arith/multiplier.hpp"

namespace axrel::arith {

struct Exhaustive {};
struct Sampled {
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
};
using SamplePolicy = std::variant<Exhaustive, Sampled>;

struct MareResult {
  double percent = 0.0;
  std::uint64_t pairs_drawn = 0;
  std::uint64_t pairs_counted = 0;  // pairs with nonzero exact product
};

// Mean absolute relative error over operand pairs with a nonzero exact product.
// Exhaustive sweeps all 2^n x 2^n pairs and is limited to n = 8. Sampled draws
// `count` uniform pairs from a counter-based stream keyed by the seed.
MareResult mare(const MultConfig& cfg, const SamplePolicy& policy);

std::string policy_name(const SamplePolicy& policy);

}  // namespace axrel::arith
