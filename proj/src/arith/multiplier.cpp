#include "axrel/arith/multiplier.hpp"

#include <algorithm>
#include <bit>
#include <regex>

#include "axrel/error.hpp"
#include "axrel/faults/plan.hpp"

namespace axrel::arith {

UWord::UWord(std::uint32_t value, unsigned width) : value_(value), width_(width) {
  if (width == 0 || width > 16) {
    throw Error(Errc::InvalidConfig, "operand width must be in [1, 16], got " + std::to_string(width));
  }
  if (value >> width) {
    throw Error(Errc::InvalidConfig,
                "operand " + std::to_string(value) + " does not fit in " + std::to_string(width) + " bits");
  }
}

void MultConfig::validate() const {
  if (n != 8 && n != 16) {
    throw Error(Errc::InvalidConfig, "multiplier width n must be 8 or 16, got " + std::to_string(n));
  }
  if (family == Family::Exact) return;
  if (t > n - 2) {
    throw Error(Errc::InvalidConfig, "truncation t=" + std::to_string(t) +
                                         " leaves no mantissa bits for n=" + std::to_string(n));
  }
  if (family == Family::AdAM && h > n - 1) {
    throw Error(Errc::InvalidConfig, "duplication level h=" + std::to_string(h) + " exceeds n-1");
  }
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Exact: return "Exact";
    case Family::Mitchell: return "Mitchell";
    case Family::AdAM: return "AdAM";
  }
  return "?";
}

std::string to_label(const MultConfig& cfg) {
  switch (cfg.family) {
    case Family::Exact: return "Exact";
    case Family::Mitchell: return "Mitchell(" + std::to_string(cfg.t) + ")";
    case Family::AdAM: return "AdAM(" + std::to_string(cfg.t) + "," + std::to_string(cfg.h) + ")";
  }
  return "?";
}

MultConfig parse_label(const std::string& label, unsigned n) {
  static const std::regex exact_re(R"(\s*Exact\s*)");
  static const std::regex mitchell_re(R"(\s*Mitchell(?:\(\s*(\d+)\s*\))?\s*)");
  static const std::regex adam_re(R"(\s*AdAM\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
  std::smatch m;
  MultConfig cfg;
  if (std::regex_match(label, exact_re)) {
    cfg = MultConfig::exact(n);
  } else if (std::regex_match(label, m, mitchell_re)) {
    cfg = MultConfig::mitchell(n, m[1].matched ? static_cast<unsigned>(std::stoul(m[1])) : 0u);
  } else if (std::regex_match(label, m, adam_re)) {
    cfg = MultConfig::adam(n, static_cast<unsigned>(std::stoul(m[1])),
                           static_cast<unsigned>(std::stoul(m[2])));
  } else {
    throw Error(Errc::InvalidConfig, "unknown multiplier label '" + label + "'");
  }
  cfg.validate();
  return cfg;
}

unsigned lod(UWord x) {
  if (x.value() == 0) throw Error(Errc::ZeroOperand, "leading-one detection of a zero operand");
  return static_cast<unsigned>(std::bit_width(x.value())) - 1;
}

std::uint32_t exact_mul(UWord a, UWord b) {
  return a.value() * b.value();
}

namespace {

void check_operands(UWord a, UWord b, const MultConfig& cfg) {
  cfg.validate();
  if (a.width() != cfg.n || b.width() != cfg.n) {
    throw Error(Errc::InvalidConfig, "operand width does not match multiplier width n=" +
                                         std::to_string(cfg.n));
  }
}

// Operand after leading-one alignment: characteristic k and the truncated
// mantissa of width n-1-t.
struct LogOperand {
  unsigned k;
  std::uint32_t mantissa;
};

LogOperand log_operand(UWord x, const MultConfig& cfg) {
  const unsigned k = lod(x);
  const std::uint32_t field = (std::uint32_t{1} << (cfg.n - 1)) - 1;
  const std::uint32_t aligned = x.value() << (cfg.n - 1 - k);
  return {k, (aligned & field) >> cfg.t};
}

// Piecewise antilog of the adder output. `sum` holds w+1 bits, bit w being
// the carry-out of the mantissa addition.
//   no carry: 2^K * (1 + S/2^w)
//   carry:    2^(K+1) * (S/2^w)
// Fractional bits below 2^0 are dropped.
std::uint32_t antilog(std::uint32_t sum, unsigned k_sum, unsigned w) {
  const bool carry = (sum >> w) & 1U;
  const std::uint64_t val = carry ? std::uint64_t{sum} : (std::uint64_t{1} << w) + sum;
  const unsigned e = k_sum + (carry ? 1U : 0U);
  const std::uint64_t p = e >= w ? val << (e - w) : val >> (w - e);
  return static_cast<std::uint32_t>(p);
}

void check_flips(std::uint32_t flips, unsigned w) {
  if (w + 1 < 32 && (flips >> (w + 1)) != 0) {
    throw Error(Errc::InvalidFaultSite,
                "adder flip outside output bits [0, " + std::to_string(w) + "]");
  }
}

MulOutcome log_multiply(UWord a, UWord b, const MultConfig& cfg, std::uint32_t flips, bool duplicate) {
  const unsigned w = cfg.mantissa_width();
  check_flips(flips, w);
  if (a.value() == 0 || b.value() == 0) return {};

  const auto la = log_operand(a, cfg);
  const auto lb = log_operand(b, cfg);
  std::uint32_t sum = (la.mantissa + lb.mantissa) ^ flips;

  MulOutcome out;
  if (duplicate) {
    const AdderLayout layout = adam_layout(a, b, cfg);
    if (layout.duplicated > 0) {
      const unsigned low = w - layout.duplicated;
      const std::uint32_t low_mask = (std::uint32_t{1} << low) - 1;
      const std::uint32_t carry_in = ((la.mantissa & low_mask) + (lb.mantissa & low_mask)) >> low;
      const std::uint32_t replica = (la.mantissa >> low) + (lb.mantissa >> low) + carry_in;
      const std::uint32_t mismatch = (sum >> low) ^ replica;
      if (mismatch != 0) {
        sum &= ~(mismatch << low);
        out.fault_detected = true;
        out.mitigated = true;
      }
    }
  }
  out.product = antilog(sum, la.k + lb.k, w);
  return out;
}

}  // namespace

std::uint32_t AdderLayout::checked_mask() const noexcept {
  if (duplicated == 0) return 0;
  const std::uint32_t all = (std::uint32_t{1} << (width + 1)) - 1;
  const std::uint32_t below = (std::uint32_t{1} << (width - duplicated)) - 1;
  return all & ~below;
}

AdderLayout adam_layout(UWord a, UWord b, const MultConfig& cfg) {
  AdderLayout layout;
  layout.width = cfg.mantissa_width();
  if (a.value() == 0 || b.value() == 0) return layout;
  layout.k_max = std::max(lod(a), lod(b));
  // Mantissa bits of the larger operand fill the top k_max adder cells; the
  // cells below are idle in both operands and host the duplicate.
  layout.significant = std::min(layout.k_max, layout.width);
  const unsigned unused = layout.width - layout.significant;
  layout.duplicated = std::min({cfg.h, layout.significant, unused});
  return layout;
}

MulOutcome mitchell_mul(UWord a, UWord b, const MultConfig& cfg) {
  return mitchell_mul(a, b, cfg, 0);
}

MulOutcome mitchell_mul(UWord a, UWord b, const MultConfig& cfg, std::uint32_t adder_flips) {
  check_operands(a, b, cfg);
  if (cfg.family != Family::Mitchell) {
    throw Error(Errc::InvalidConfig, "mitchell_mul requires a Mitchell configuration");
  }
  return log_multiply(a, b, cfg, adder_flips, false);
}

MulOutcome adam_mul(UWord a, UWord b, const MultConfig& cfg, std::uint32_t adder_flips) {
  check_operands(a, b, cfg);
  if (cfg.family != Family::AdAM) {
    throw Error(Errc::InvalidConfig, "adam_mul requires an AdAM configuration");
  }
  return log_multiply(a, b, cfg, adder_flips, true);
}

MulOutcome adam_mul(UWord a, UWord b, const MultConfig& cfg, const faults::FaultPlan& plan) {
  std::uint32_t flips = 0;
  const unsigned w = cfg.mantissa_width();
  for (const auto& s : plan.select(faults::SiteKind::AdderInternalBit)) {
    if (s.bit > w) {
      throw Error(Errc::InvalidFaultSite,
                  "adder bit " + std::to_string(s.bit) + " outside [0, " + std::to_string(w) + "]");
    }
    flips ^= std::uint32_t{1} << s.bit;
  }
  return adam_mul(a, b, cfg, flips);
}

MulOutcome multiply(UWord a, UWord b, const MultConfig& cfg, std::uint32_t adder_flips) {
  switch (cfg.family) {
    case Family::Exact:
      check_operands(a, b, cfg);
      return {exact_mul(a, b), false, false};
    case Family::Mitchell: return mitchell_mul(a, b, cfg, adder_flips);
    case Family::AdAM: return adam_mul(a, b, cfg, adder_flips);
  }
  return {};
}

}  // namespace axrel::arith
