#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axrel/faults/rng.hpp"

namespace axrel::faults {

using Word = std::uint32_t;

enum class SiteKind : std::uint8_t { WeightBit, ActivationBit, AdderInternalBit };

struct FaultSite {
  SiteKind kind = SiteKind::WeightBit;
  std::uint32_t target = 0;        // tensor / layer / unit id
  std::uint64_t element = 0;
  std::uint32_t bit = 0;
  std::uint64_t invocation = 0;    // transient faults only; 0 for weights

  auto operator<=>(const FaultSite&) const = default;
};

// Immutable once built: sites sorted and unique.
class FaultPlan {
 public:
  FaultPlan() = default;
  FaultPlan(std::vector<FaultSite> sites, std::uint64_t seed, std::optional<double> ber);

  const std::vector<FaultSite>& sites() const noexcept { return sites_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::optional<double> ber() const noexcept { return ber_; }
  bool empty() const noexcept { return sites_.empty(); }
  std::size_t size() const noexcept { return sites_.size(); }

  // Sites of one kind, optionally restricted to a target.
  std::vector<FaultSite> select(SiteKind kind, std::optional<std::uint32_t> target = {}) const;

  bool operator==(const FaultPlan&) const = default;

 private:
  std::vector<FaultSite> sites_;
  std::uint64_t seed_ = 0;
  std::optional<double> ber_;
};

// Multi-bit faults are modelled as unions of single-bit plans.
FaultPlan merge(const FaultPlan& a, const FaultPlan& b);

// One stored tensor: `count` words of `width` bits each.
struct TensorShape {
  std::uint64_t count = 0;
  std::uint32_t width = 0;
};

// Bit positions eligible for flipping; empty means every bit of the word.
using BitFilter = std::vector<std::uint32_t>;

// Every eligible stored bit flips independently with probability `ber`.
// Tensor i of `shape` is target i.
FaultPlan plan_ber_weight_faults(std::span<const TensorShape> shape, double ber, RngSpec rng,
                                 const BitFilter& bits = {});

// Variance-controlled variant: exactly round(ber * eligible_bits) distinct flips.
FaultPlan plan_fixed_count_weight_faults(std::span<const TensorShape> shape, double ber, RngSpec rng,
                                         const BitFilter& bits = {});

struct ActivationLayerShape {
  std::uint32_t layer = 0;
  std::uint64_t elements = 0;
  std::uint32_t width = 8;
};

FaultPlan plan_single_activation_fault(const ActivationLayerShape& layer, std::uint64_t element,
                                       std::uint32_t bit, std::uint64_t invocation);

// One transient activation flip per invocation in [0, invocations): layer,
// element and bit (from `bits`, or any bit when empty) drawn uniformly.
FaultPlan plan_transient_activation_faults(std::span<const ActivationLayerShape> layers,
                                           std::uint64_t invocations, const BitFilter& bits, RngSpec rng);

// Returns a flipped copy of `words` (tensor `target` of a plan). Non-weight sites
// and other targets are ignored.
std::vector<Word> apply_word_faults(std::span<const Word> words, std::uint32_t width,
                                    const FaultPlan& plan, std::uint32_t target = 0);

// Line-oriented text form; round-trips bit-exactly.
std::string to_text(const FaultPlan& plan);
FaultPlan plan_from_text(const std::string& text);

std::string_view to_string(SiteKind kind) noexcept;

}  // namespace axrel::faults
