#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace axrel::metrics {

// Accuracy drop in percentage points, signed: faults can occasionally help.
double vulnerability(double golden_accuracy, double faulty_accuracy);

struct SdcRates {
  double sdc1 = 0.0;   // % of inputs whose top-1 class changed
  double sdc10 = 0.0;  // % with unchanged top-1 but >10% relative drop in top-1 softmax probability
};

using Logits = std::vector<double>;

// Throws ShapeMismatch.
SdcRates sdc_rates(std::span<const Logits> golden, std::span<const Logits> faulty);

// Percentage of faults handled without silent corruption.
double fault_coverage(double sdc_percent);

struct PDropInputs {
  double params = 0.0;        // N
  double bit_width = 0.0;     // W
  double lifetime = 0.0;      // T
  double test_interval = 1.0; // t
  double p_single = 0.0;
  double ber = 0.0;
  double acc_drop = 0.0;
};

// N^2 * W^2 * T / t * P_single * BER * acc_drop, evaluated left to right.
// The squared N and W are kept as published even though they are unusual
// dimensionally.
double p_drop(const PDropInputs& in);

struct RapInputs {
  double acc_drop = 0.0;
  double mem_ovh = 1.0;
  double perf_ovh = 1.0;
};

// Lower is better.
double rap(const RapInputs& in);

std::size_t argmax(std::span<const double> v);
std::vector<double> softmax(std::span<const double> logits);

}  // namespace axrel::metrics
