#include "axrel/campaign/campaign.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

#include "axrel/error.hpp"
#include "axrel/faults/plan.hpp"
#include "axrel/metrics/metrics.hpp"
#include "axrel/metrics/stats.hpp"
#include "axrel/quant/quant.hpp"

namespace axrel::campaign {

std::string Protection::label() const {
  std::string s = msb_triplication ? "msb" : "";
  if (clamp) {
    if (!s.empty()) s += "+";
    s += "clamp:" + std::string(net::to_string(*clamp));
  }
  return s.empty() ? "none" : s;
}

Protection Protection::parse(const std::string& label) {
  Protection p;
  if (label == "none") return p;
  std::string_view rest(label);
  while (!rest.empty()) {
    const auto plus = rest.find('+');
    const std::string part(rest.substr(0, plus));
    if (part == "msb") {
      p.msb_triplication = true;
    } else if (part.rfind("clamp:", 0) == 0) {
      p.clamp = net::parse_clamp_method(part.substr(6));
    } else {
      throw Error(Errc::InvalidConfig, "unknown protection '" + label + "'");
    }
    if (plus == std::string_view::npos) break;
    rest.remove_prefix(plus + 1);
  }
  return p;
}

WeightBits parse_weight_bits(const std::string& s) {
  if (s == "all") return WeightBits::All;
  if (s == "msb") return WeightBits::Msb;
  if (s == "msb_copies") return WeightBits::MsbCopies;
  throw Error(Errc::InvalidConfig, "unknown fault_bits '" + s + "'");
}

double CostModel::execution_cost(const net::NetworkModel& model) const {
  double cost = 0.0;
  for (const auto& l : model.layers) {
    const auto macs = static_cast<double>(l.spec.mac_count());
    cost += macs * (1.0 + (l.spec.msb_triplication ? vote_cost : 0.0));
  }
  return cost;
}

double CostModel::perf_overhead(const net::NetworkModel& model) const {
  return execution_cost(model) / static_cast<double>(model.mac_count());
}

namespace {

net::NetworkModel apply_protection(const net::NetworkModel& base, const Protection& p,
                                   const std::vector<net::Bounds>& bounds) {
  net::NetworkModel m = net::with_protection(base, p.msb_triplication);
  if (p.clamp) {
    if (bounds.empty()) {
      throw Error(Errc::InvalidConfig, "protection '" + p.label() + "' needs profiled bounds");
    }
    m = net::with_bounds(std::move(m), bounds);
  }
  return net::with_clamp(std::move(m), p.clamp);
}

faults::BitFilter filter_for(WeightBits which, unsigned bits) {
  switch (which) {
    case WeightBits::All: return {};
    case WeightBits::Msb: return {bits - 1};
    case WeightBits::MsbCopies: return {bits, bits + 1};
  }
  return {};
}

// Plans for different BERs use distinct streams of the same seed.
faults::RngSpec weight_rng(std::uint64_t seed, double ber) {
  return {seed, std::bit_cast<std::uint64_t>(ber)};
}

void fill_sdc(CampaignRow& row, const net::BatchResult& golden, const net::BatchResult& faulty) {
  const auto sdc = metrics::sdc_rates(golden.logits, faulty.logits);
  row.sdc1 = sdc.sdc1;
  row.sdc10 = sdc.sdc10;
  row.fault_coverage = metrics::fault_coverage(sdc.sdc1);
}

}  // namespace

std::vector<CampaignRow> run_weight_campaign(const net::FloatModel& model, const net::Dataset& data,
                                             const WeightCampaign& cfg, const std::vector<net::Bounds>& bounds) {
  if (cfg.protections.empty() || cfg.seeds.empty() || cfg.ber_grid.empty()) {
    throw Error(Errc::InvalidConfig, "campaign needs at least one BER, seed and protection");
  }
  const net::NetworkModel base = net::quantize_model(net::with_protection(model, false), cfg.bits);
  const double baseline_bits = static_cast<double>(base.param_count()) * 8.0;

  struct Variant {
    Protection protection;
    net::NetworkModel model;
    net::BatchResult golden;
  };
  std::vector<Variant> variants;
  for (const auto& p : cfg.protections) {
    net::NetworkModel m = apply_protection(base, p, bounds);
    net::BatchResult golden = net::evaluate(m, data, {}, true);
    variants.push_back({p, std::move(m), std::move(golden)});
  }

  std::vector<CampaignRow> rows;
  for (double ber : cfg.ber_grid) {
    for (std::uint64_t seed : cfg.seeds) {
      for (const auto& v : variants) {
        const auto plan = faults::plan_ber_weight_faults(v.model.weight_shape(), ber, weight_rng(seed, ber),
                                                         filter_for(cfg.target_bits, cfg.bits));
        const net::BatchResult faulty = net::evaluate(v.model, data, plan, true);
        CampaignRow row;
        row.ber = ber;
        row.seed = seed;
        row.protection = v.protection.label();
        row.golden_acc = v.golden.accuracy;
        row.faulty_acc = faulty.accuracy;
        row.vulnerability = metrics::vulnerability(row.golden_acc, row.faulty_acc);
        fill_sdc(row, v.golden, faulty);
        row.memory_bits = v.model.memory_bits();
        const double acc_drop = std::max(0.0, row.vulnerability / 100.0);
        const unsigned stored_width = v.model.layers.front().stored_width();
        row.p_drop = metrics::p_drop({static_cast<double>(v.model.param_count()), double(stored_width),
                                      cfg.lifetime.lifetime, cfg.lifetime.test_interval,
                                      cfg.lifetime.p_single, ber, acc_drop});
        row.rap = metrics::rap({acc_drop, static_cast<double>(row.memory_bits) / baseline_bits,
                                cfg.cost.perf_overhead(v.model)});
        row.within_bounds = faulty.outputs_within_bounds;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<CampaignRow> run_activation_campaign(const net::NetworkModel& model, const net::Dataset& data,
                                                 const ActivationCampaign& cfg,
                                                 const std::vector<net::Bounds>& bounds) {
  if (cfg.protections.empty() || cfg.seeds.empty()) {
    throw Error(Errc::InvalidConfig, "campaign needs at least one seed and protection");
  }
  struct Variant {
    Protection protection;
    net::NetworkModel model;
    net::BatchResult golden;
  };
  std::vector<Variant> variants;
  for (const auto& p : cfg.protections) {
    net::NetworkModel m = apply_protection(model, p, bounds);
    net::BatchResult golden = net::evaluate(m, data, {}, true);
    variants.push_back({p, std::move(m), std::move(golden)});
  }
  const auto shape = model.activation_shape();
  const double baseline_bits = static_cast<double>(model.param_count()) * 8.0;

  std::vector<CampaignRow> rows;
  for (std::uint64_t seed : cfg.seeds) {
    const auto plan = faults::plan_transient_activation_faults(shape, data.rows, cfg.bits, {seed, 0xAC7});
    for (const auto& v : variants) {
      const net::BatchResult faulty = net::evaluate(v.model, data, plan, true);
      CampaignRow row;
      row.seed = seed;
      row.protection = v.protection.label();
      row.golden_acc = v.golden.accuracy;
      row.faulty_acc = faulty.accuracy;
      row.vulnerability = metrics::vulnerability(row.golden_acc, row.faulty_acc);
      fill_sdc(row, v.golden, faulty);
      row.memory_bits = v.model.memory_bits();
      row.rap = metrics::rap({std::max(0.0, row.vulnerability / 100.0),
                              static_cast<double>(row.memory_bits) / baseline_bits, 1.0});
      row.within_bounds = faulty.outputs_within_bounds;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string campaign_csv_header() {
  return "ber,seed,protection,golden_acc,faulty_acc,vulnerability,sdc1,sdc10,fault_coverage,memory_bits,"
         "p_drop,rap\n";
}

std::string to_csv_line(const CampaignRow& r) {
  char buf[512];
  char ber[32] = "";
  if (r.ber) std::snprintf(ber, sizeof ber, "%g", *r.ber);
  std::snprintf(buf, sizeof buf, "%s,%llu,%s,%.6f,%.6f,%.4f,%.4f,%.4f,%.4f,%llu,%.6e,%.6e\n", ber,
                static_cast<unsigned long long>(r.seed), r.protection.c_str(), r.golden_acc, r.faulty_acc,
                r.vulnerability, r.sdc1, r.sdc10, r.fault_coverage,
                static_cast<unsigned long long>(r.memory_bits), r.p_drop, r.rap);
  return buf;
}

ModelEvaluator::ModelEvaluator(net::FloatModel model, net::Dataset data, CostModel cost)
    : model_(net::with_protection(std::move(model), true)), data_(std::move(data)), cost_(cost), cache_(9) {
  model_.validate();
  data_.validate();
}

const net::NetworkModel& ModelEvaluator::quantized(unsigned bits) {
  if (bits >= cache_.size()) throw Error(Errc::InvalidConfig, "bit width out of range");
  if (!cache_[bits]) cache_[bits] = net::quantize_model(model_, bits);
  return *cache_[bits];
}

double ModelEvaluator::golden_accuracy(unsigned bits) {
  return net::evaluate_accuracy(quantized(bits), data_, {});
}

std::vector<double> ModelEvaluator::vulnerabilities(unsigned bits, const dse::SearchConfig& cfg) {
  const auto& m = quantized(bits);
  const double golden = golden_accuracy(bits);
  std::vector<double> out;
  for (double ber : cfg.ber_grid) {
    std::vector<double> v;
    for (std::uint64_t seed : cfg.seeds) {
      const auto plan = faults::plan_ber_weight_faults(m.weight_shape(), ber, weight_rng(seed, ber));
      v.push_back(metrics::vulnerability(golden, net::evaluate_accuracy(m, data_, plan)));
    }
    out.push_back(metrics::summarize(v).mean);
  }
  return out;
}

std::uint64_t ModelEvaluator::memory_bits(unsigned bits) {
  return quant::protected_memory_bits(model_.param_count(), bits, true);
}

double ModelEvaluator::execution_cost(unsigned bits) {
  return cost_.execution_cost(quantized(bits));
}

}  // namespace axrel::campaign
