#include "axrel/faults/plan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "axrel/error.hpp"

namespace axrel::faults {

namespace {

void check_ber(double ber) {
  if (!(ber >= 0.0 && ber <= 1.0)) {
    throw Error(Errc::InvalidConfig, "ber must lie in [0, 1], got " + std::to_string(ber));
  }
}

std::vector<std::uint32_t> eligible_bits(const TensorShape& t, const BitFilter& filter) {
  std::vector<std::uint32_t> bits;
  if (filter.empty()) {
    for (std::uint32_t b = 0; b < t.width; ++b) bits.push_back(b);
  } else {
    for (auto b : filter) {
      if (b < t.width) bits.push_back(b);
    }
    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
  }
  return bits;
}

// Uniform integer in [0, bound) from a 64-bit draw (Lemire reduction).
std::uint64_t reduce(std::uint64_t x, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * bound) >> 64);
}

}  // namespace

FaultPlan::FaultPlan(std::vector<FaultSite> sites, std::uint64_t seed, std::optional<double> ber)
    : sites_(std::move(sites)), seed_(seed), ber_(ber) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

std::vector<FaultSite> FaultPlan::select(SiteKind kind, std::optional<std::uint32_t> target) const {
  std::vector<FaultSite> out;
  for (const auto& s : sites_) {
    if (s.kind == kind && (!target || s.target == *target)) out.push_back(s);
  }
  return out;
}

FaultPlan merge(const FaultPlan& a, const FaultPlan& b) {
  std::vector<FaultSite> sites = a.sites();
  sites.insert(sites.end(), b.sites().begin(), b.sites().end());
  return FaultPlan(std::move(sites), a.seed(), a.ber());
}

FaultPlan plan_ber_weight_faults(std::span<const TensorShape> shape, double ber, RngSpec rng,
                                 const BitFilter& filter) {
  check_ber(ber);
  std::vector<FaultSite> sites;
  if (ber > 0.0) {
    std::uint64_t offset = 0;  // global bit index of the tensor's first bit
    for (std::uint32_t t = 0; t < shape.size(); ++t) {
      const auto& tensor = shape[t];
      const auto bits = eligible_bits(tensor, filter);
      for (std::uint64_t e = 0; e < tensor.count; ++e) {
        for (auto b : bits) {
          const std::uint64_t counter = offset + e * tensor.width + b;
          if (draw_unit(rng, counter) < ber) {
            sites.push_back({SiteKind::WeightBit, t, e, b, 0});
          }
        }
      }
      offset += tensor.count * tensor.width;
    }
  }
  return FaultPlan(std::move(sites), rng.seed, ber);
}

FaultPlan plan_fixed_count_weight_faults(std::span<const TensorShape> shape, double ber, RngSpec rng,
                                         const BitFilter& filter) {
  check_ber(ber);
  struct Span {
    std::uint32_t target;
    std::uint64_t count;
    std::vector<std::uint32_t> bits;
  };
  std::vector<Span> spans;
  std::uint64_t total = 0;
  for (std::uint32_t t = 0; t < shape.size(); ++t) {
    auto bits = eligible_bits(shape[t], filter);
    total += shape[t].count * bits.size();
    spans.push_back({t, shape[t].count, std::move(bits)});
  }
  const auto wanted = static_cast<std::uint64_t>(std::llround(ber * static_cast<double>(total)));

  // Floyd's sampling of `wanted` distinct indices out of `total`.
  std::set<std::uint64_t> chosen;
  std::uint64_t counter = 0;
  for (std::uint64_t j = total - wanted; j < total; ++j) {
    const std::uint64_t r = reduce(draw(rng, counter++), j + 1);
    if (!chosen.insert(r).second) chosen.insert(j);
  }

  std::vector<FaultSite> sites;
  sites.reserve(chosen.size());
  for (auto idx : chosen) {
    for (const auto& s : spans) {
      const std::uint64_t n = s.count * s.bits.size();
      if (idx < n) {
        sites.push_back({SiteKind::WeightBit, s.target, idx / s.bits.size(),
                         s.bits[idx % s.bits.size()], 0});
        break;
      }
      idx -= n;
    }
  }
  return FaultPlan(std::move(sites), rng.seed, ber);
}

FaultPlan plan_single_activation_fault(const ActivationLayerShape& layer, std::uint64_t element,
                                       std::uint32_t bit, std::uint64_t invocation) {
  if (element >= layer.elements) {
    throw Error(Errc::IndexOutOfRange, "activation element " + std::to_string(element) +
                                           " >= " + std::to_string(layer.elements));
  }
  if (bit >= layer.width) {
    throw Error(Errc::IndexOutOfRange,
                "activation bit " + std::to_string(bit) + " >= width " + std::to_string(layer.width));
  }
  return FaultPlan({{SiteKind::ActivationBit, layer.layer, element, bit, invocation}}, 0, std::nullopt);
}

FaultPlan plan_transient_activation_faults(std::span<const ActivationLayerShape> layers,
                                           std::uint64_t invocations, const BitFilter& bits, RngSpec rng) {
  if (layers.empty()) throw Error(Errc::InvalidConfig, "no activation layers to target");
  std::vector<FaultSite> sites;
  sites.reserve(invocations);
  for (std::uint64_t inv = 0; inv < invocations; ++inv) {
    const auto& layer = layers[reduce(draw(rng, 3 * inv), layers.size())];
    const std::uint64_t element = reduce(draw(rng, 3 * inv + 1), layer.elements);
    std::uint32_t bit = 0;
    if (bits.empty()) {
      bit = static_cast<std::uint32_t>(reduce(draw(rng, 3 * inv + 2), layer.width));
    } else {
      bit = bits[reduce(draw(rng, 3 * inv + 2), bits.size())];
      if (bit >= layer.width) {
        throw Error(Errc::IndexOutOfRange, "activation bit " + std::to_string(bit) + " >= width");
      }
    }
    sites.push_back({SiteKind::ActivationBit, layer.layer, element, bit, inv});
  }
  return FaultPlan(std::move(sites), rng.seed, std::nullopt);
}

std::vector<Word> apply_word_faults(std::span<const Word> words, std::uint32_t width,
                                    const FaultPlan& plan, std::uint32_t target) {
  std::vector<Word> out(words.begin(), words.end());
  for (const auto& s : plan.sites()) {
    if (s.kind != SiteKind::WeightBit || s.target != target) continue;
    if (s.element >= out.size() || s.bit >= width) {
      throw Error(Errc::IndexOutOfRange, "weight site (" + std::to_string(s.element) + ", bit " +
                                             std::to_string(s.bit) + ") outside tensor");
    }
    out[s.element] ^= Word{1} << s.bit;
  }
  return out;
}

std::string_view to_string(SiteKind kind) noexcept {
  switch (kind) {
    case SiteKind::WeightBit: return "weight";
    case SiteKind::ActivationBit: return "activation";
    case SiteKind::AdderInternalBit: return "adder";
  }
  return "?";
}

std::string to_text(const FaultPlan& plan) {
  std::ostringstream os;
  os << "#faultplan v1\n";
  os << "#seed=" << plan.seed() << "\n";
  if (plan.ber()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *plan.ber());
    os << "#ber=" << buf << "\n";
  } else {
    os << "#ber=none\n";
  }
  os << "kind,target,element,bit,invocation\n";
  for (const auto& s : plan.sites()) {
    os << to_string(s.kind) << ',' << s.target << ',' << s.element << ',' << s.bit << ','
       << s.invocation << '\n';
  }
  return os.str();
}

namespace {

template <typename T>
T parse_uint(std::string_view field, std::size_t line_no) {
  T v{};
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || p != field.data() + field.size()) {
    throw Error(Errc::ParseError, "fault plan line " + std::to_string(line_no) + ": bad integer '" +
                                      std::string(field) + "'");
  }
  return v;
}

SiteKind parse_kind(std::string_view s, std::size_t line_no) {
  if (s == "weight") return SiteKind::WeightBit;
  if (s == "activation") return SiteKind::ActivationBit;
  if (s == "adder") return SiteKind::AdderInternalBit;
  throw Error(Errc::ParseError,
              "fault plan line " + std::to_string(line_no) + ": unknown kind '" + std::string(s) + "'");
}

}  // namespace

FaultPlan plan_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t seed = 0;
  std::optional<double> ber;
  bool have_magic = false;
  std::vector<FaultSite> sites;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line == "#faultplan v1") {
      have_magic = true;
    } else if (line.rfind("#seed=", 0) == 0) {
      seed = parse_uint<std::uint64_t>(std::string_view(line).substr(6), line_no);
    } else if (line.rfind("#ber=", 0) == 0) {
      const auto v = line.substr(5);
      if (v != "none") {
        try {
          std::size_t used = 0;
          ber = std::stod(v, &used);
          if (used != v.size()) throw std::invalid_argument(v);
        } catch (const std::exception&) {
          throw Error(Errc::ParseError, "fault plan: bad ber '" + v + "'");
        }
      }
    } else if (line[0] == '#' || line.rfind("kind,", 0) == 0) {
      continue;
    } else {
      std::vector<std::string_view> f;
      std::string_view rest(line);
      for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
        f.push_back(rest.substr(0, pos));
        rest.remove_prefix(pos + 1);
      }
      f.push_back(rest);
      if (f.size() != 5) {
        throw Error(Errc::ParseError, "fault plan line " + std::to_string(line_no) + ": expected 5 fields");
      }
      sites.push_back({parse_kind(f[0], line_no), parse_uint<std::uint32_t>(f[1], line_no),
                       parse_uint<std::uint64_t>(f[2], line_no), parse_uint<std::uint32_t>(f[3], line_no),
                       parse_uint<std::uint64_t>(f[4], line_no)});
    }
  }
  if (!have_magic) throw Error(Errc::ParseError, "fault plan: missing '#faultplan v1' header");
  return FaultPlan(std::move(sites), seed, ber);
}

}  // namespace axrel::faults
