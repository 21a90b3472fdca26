#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "axrel/dse/search.hpp"
#include "axrel/net/engine.hpp"
#include "axrel/net/model.hpp"

namespace axrel::campaign {

// "none", "msb", "clamp:m3", "msb+clamp:m1", ...
struct Protection {
  bool msb_triplication = false;
  std::optional<net::ClampMethod> clamp;

  std::string label() const;
  static Protection parse(const std::string& label);
  bool operator==(const Protection&) const = default;
};

enum class WeightBits : std::uint8_t { All, Msb, MsbCopies };
WeightBits parse_weight_bits(const std::string& s);

// Per-MAC cost table for the execution-time proxy: one unit per MAC plus
// `vote_cost` per majority vote on a protected weight read.
struct CostModel {
  double vote_cost = 0.25;

  double execution_cost(const net::NetworkModel& model) const;
  // Relative to the same MAC count with no votes.
  double perf_overhead(const net::NetworkModel& model) const;
};

struct LifetimeModel {
  double lifetime = 1.0;
  double test_interval = 1.0;
  double p_single = 1.0;
};

struct WeightCampaign {
  unsigned bits = 8;
  std::vector<double> ber_grid;
  std::vector<std::uint64_t> seeds;
  std::vector<Protection> protections;
  WeightBits target_bits = WeightBits::All;
  CostModel cost;
  LifetimeModel lifetime;
};

struct ActivationCampaign {
  std::vector<std::uint64_t> seeds;
  std::vector<Protection> protections;
  std::vector<std::uint32_t> bits;  // activation bit positions to flip
};

struct CampaignRow {
  std::optional<double> ber;  // empty for transient activation campaigns
  std::uint64_t seed = 0;
  std::string protection;
  double golden_acc = 0.0;
  double faulty_acc = 0.0;
  double vulnerability = 0.0;
  double sdc1 = 0.0;
  double sdc10 = 0.0;
  double fault_coverage = 0.0;
  std::uint64_t memory_bits = 0;
  double p_drop = 0.0;
  double rap = 0.0;
  bool within_bounds = true;  // every clamped layer output inside its bounds
};

// Weight BER campaign. Plans are keyed by (seed, BER) so every protection
// setting sees the same random stream. Clamp protections need `bounds`.
std::vector<CampaignRow> run_weight_campaign(const net::FloatModel& model, const net::Dataset& data,
                                             const WeightCampaign& cfg,
                                             const std::vector<net::Bounds>& bounds = {});

// One transient activation flip per input; input i is invocation i.
std::vector<CampaignRow> run_activation_campaign(const net::NetworkModel& model, const net::Dataset& data,
                                                 const ActivationCampaign& cfg,
                                                 const std::vector<net::Bounds>& bounds = {});

std::string campaign_csv_header();
std::string to_csv_line(const CampaignRow& row);

// Measures bit widths for the bit-width search on a real model with MSB
// triplication enabled on every layer.
class ModelEvaluator : public dse::WidthEvaluator {
 public:
  ModelEvaluator(net::FloatModel model, net::Dataset data, CostModel cost = {});

  double golden_accuracy(unsigned bits) override;
  std::vector<double> vulnerabilities(unsigned bits, const dse::SearchConfig& cfg) override;
  std::uint64_t memory_bits(unsigned bits) override;
  double execution_cost(unsigned bits) override;

 private:
  const net::NetworkModel& quantized(unsigned bits);

  net::FloatModel model_;
  net::Dataset data_;
  CostModel cost_;
  std::vector<std::optional<net::NetworkModel>> cache_;
};

}  // namespace axrel::campaign
