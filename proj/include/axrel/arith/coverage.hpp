#pragma once

#include <cstdint>

#include "axrel/arith/multiplier.hpp"

namespace axrel::arith {

// Outcome counts of single adder-output flips. A corrupted product that is
// flagged is not silent.
struct AdderCampaign {
  std::uint64_t injections = 0;
  std::uint64_t masked = 0;    // product unchanged, nothing flagged
  std::uint64_t detected = 0;  // flagged (product may still differ)
  std::uint64_t silent = 0;    // product changed, nothing flagged

  double sdc_percent() const noexcept;
  double coverage_percent() const noexcept;
};

// Every nonzero operand pair of an n = 8 Mitchell or AdAM multiplier times
// every adder output bit [0, n-1-t], one flip per injection.
AdderCampaign adder_flip_campaign(const MultConfig& cfg);

}  // namespace axrel::arith
