#include "axrel/arith/coverage.hpp"

#include "axrel/arith/mare.hpp"
#include "axrel/error.hpp"

namespace axrel::arith {

double AdderCampaign::sdc_percent() const noexcept {
  return injections == 0 ? 0.0 : 100.0 * static_cast<double>(silent) / static_cast<double>(injections);
}

double AdderCampaign::coverage_percent() const noexcept {
  return 100.0 - sdc_percent();
}

AdderCampaign adder_flip_campaign(const MultConfig& cfg) {
  cfg.validate();
  if (cfg.family == Family::Exact) {
    throw Error(Errc::InvalidConfig, "the exact multiplier has no mantissa adder");
  }
  if (cfg.n != 8) {
    throw Error(Errc::ExhaustiveTooLarge, "adder flip campaigns enumerate n=8 only");
  }
  const unsigned w = cfg.mantissa_width();
  AdderCampaign c;
  for (std::uint32_t x = 1; x < 256; ++x) {
    for (std::uint32_t y = 1; y < 256; ++y) {
      const UWord a(x, 8), b(y, 8);
      const std::uint32_t golden = multiply(a, b, cfg).product;
      for (unsigned bit = 0; bit <= w; ++bit) {
        const MulOutcome out = multiply(a, b, cfg, std::uint32_t{1} << bit);
        ++c.injections;
        if (out.fault_detected) {
          ++c.detected;
        } else if (out.product != golden) {
          ++c.silent;
        } else {
          ++c.masked;
        }
      }
    }
  }
  return c;
}

}  // namespace axrel::arith
