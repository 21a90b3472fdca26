#include "axrel/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "axrel/error.hpp"

namespace axrel::metrics {

double vulnerability(double golden_accuracy, double faulty_accuracy) {
  return 100.0 * (golden_accuracy - faulty_accuracy);
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double top = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& x : p) total += (x = std::exp(x - top));
  for (double& x : p) x /= total;
  return p;
}

SdcRates sdc_rates(std::span<const Logits> golden, std::span<const Logits> faulty) {
  if (golden.size() != faulty.size()) {
    throw Error(Errc::ShapeMismatch, "golden and faulty logit batches differ in size");
  }
  if (golden.empty()) return {};
  std::size_t changed = 0;
  std::size_t degraded = 0;
  for (std::size_t i = 0; i < golden.size(); ++i) {
    if (golden[i].size() != faulty[i].size() || golden[i].empty()) {
      throw Error(Errc::ShapeMismatch, "logit vectors differ in size at input " + std::to_string(i));
    }
    const std::size_t g = argmax(golden[i]);
    const std::size_t f = argmax(faulty[i]);
    if (g != f) {
      ++changed;
      continue;
    }
    const double pg = softmax(golden[i])[g];
    const double pf = softmax(faulty[i])[f];
    if (pg - pf > 0.1 * pg) ++degraded;
  }
  const auto n = static_cast<double>(golden.size());
  return {100.0 * static_cast<double>(changed) / n, 100.0 * static_cast<double>(degraded) / n};
}

double fault_coverage(double sdc_percent) {
  return 100.0 - sdc_percent;
}

double p_drop(const PDropInputs& in) {
  if (!(in.test_interval > 0.0)) {
    throw Error(Errc::InvalidConfig, "p_drop test interval must be positive");
  }
  const double inputs[] = {in.params, in.bit_width, in.lifetime, in.p_single, in.ber, in.acc_drop};
  for (double x : inputs) {
    if (!(x >= 0.0)) throw Error(Errc::InvalidConfig, "p_drop inputs must be nonnegative");
  }
  return in.params * in.params * in.bit_width * in.bit_width * in.lifetime / in.test_interval *
         in.p_single * in.ber * in.acc_drop;
}

double rap(const RapInputs& in) {
  if (!(in.mem_ovh > 0.0) || !(in.perf_ovh > 0.0)) {
    throw Error(Errc::InvalidConfig, "RAP overhead ratios must be positive");
  }
  return in.acc_drop * in.mem_ovh * in.perf_ovh;
}

}  // namespace axrel::metrics
