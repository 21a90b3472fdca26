#include "axrel/arith/mare.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "axrel/error.hpp"
#include "axrel/faults/rng.hpp"
#include "axrel/simd/kernels.hpp"

namespace axrel::arith {

namespace {

constexpr std::size_t kBatch = 4096;

// Relative errors are summed as exact 2^-52 fixed-point integers, so the
// total does not depend on evaluation order or partitioning.
class ErrorAccumulator {
 public:
  void add(std::uint32_t exact, std::uint32_t approx) {
    ++drawn_;
    if (exact == 0) return;
    ++counted_;
    const std::uint32_t diff = exact > approx ? exact - approx : approx - exact;
    const double rel = static_cast<double>(diff) / static_cast<double>(exact);
    sum_ += static_cast<unsigned __int128>(static_cast<std::uint64_t>(std::ldexp(rel, 52)));
  }

  MareResult result() const {
    MareResult r;
    r.pairs_drawn = drawn_;
    r.pairs_counted = counted_;
    if (counted_ > 0) {
      const auto whole = static_cast<double>(sum_ / counted_);
      const auto frac = static_cast<double>(sum_ % counted_) / static_cast<double>(counted_);
      r.percent = 100.0 * std::ldexp(whole + frac, -52);
    }
    return r;
  }

 private:
  unsigned __int128 sum_ = 0;
  std::uint64_t drawn_ = 0;
  std::uint64_t counted_ = 0;
};

void products(const MultConfig& cfg, std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
              std::span<std::uint32_t> out) {
  if (cfg.family == Family::Exact) {
    simd::exact_products(a, b, out);
  } else {
    // Fault-free AdAM is the Mitchell datapath; the duplicate only checks.
    simd::mitchell_products(a, b, out, cfg.n, cfg.t);
  }
}

}  // namespace

std::string policy_name(const SamplePolicy& policy) {
  return std::holds_alternative<Exhaustive>(policy) ? "exhaustive" : "sampled";
}

MareResult mare(const MultConfig& cfg, const SamplePolicy& policy) {
  cfg.validate();
  std::vector<std::uint32_t> a(kBatch), b(kBatch), approx(kBatch), exact(kBatch);
  ErrorAccumulator acc;

  auto flush = [&](std::size_t len) {
    const std::span<const std::uint32_t> sa(a.data(), len), sb(b.data(), len);
    products(cfg, sa, sb, std::span(approx.data(), len));
    simd::exact_products(sa, sb, std::span(exact.data(), len));
    for (std::size_t i = 0; i < len; ++i) acc.add(exact[i], approx[i]);
  };

  if (std::holds_alternative<Exhaustive>(policy)) {
    if (cfg.n > 8) {
      throw Error(Errc::ExhaustiveTooLarge,
                  "exhaustive MARE is limited to n=8 (requested n=" + std::to_string(cfg.n) + ")");
    }
    const std::uint32_t limit = std::uint32_t{1} << cfg.n;
    std::size_t len = 0;
    for (std::uint32_t x = 0; x < limit; ++x) {
      for (std::uint32_t y = 0; y < limit; ++y) {
        a[len] = x;
        b[len] = y;
        if (++len == kBatch) {
          flush(len);
          len = 0;
        }
      }
    }
    flush(len);
  } else {
    const auto& s = std::get<Sampled>(policy);
    const std::uint32_t mask = (std::uint32_t{1} << cfg.n) - 1;
    const faults::RngSpec rng{s.seed, 0};
    std::size_t len = 0;
    for (std::uint64_t i = 0; i < s.count; ++i) {
      const std::uint64_t r = faults::draw(rng, i);
      a[len] = static_cast<std::uint32_t>(r) & mask;
      b[len] = static_cast<std::uint32_t>(r >> 32) & mask;
      if (++len == kBatch) {
        flush(len);
        len = 0;
      }
    }
    flush(len);
  }
  return acc.result();
}

}  // namespace axrel::arith
