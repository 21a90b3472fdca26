#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "axrel/faults/plan.hpp"
#include "axrel/net/model.hpp"

namespace axrel::net {

struct Dataset {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> features;  // rows x cols, row-major
  std::vector<std::int32_t> labels;

  std::span<const float> row(std::size_t i) const { return {features.data() + i * cols, cols}; }
  void validate() const;
};

using Logits = std::vector<double>;

struct InferTrace {
  std::vector<std::vector<double>> outputs;  // per layer, after activation and clamp
  std::size_t adder_faults_applied = 0;
  std::size_t adder_faults_detected = 0;
  std::size_t activation_faults_applied = 0;
};

// Weight faults applied and protected words majority-decoded once, ready for
// repeated inference. Holds a reference to the model, which must outlive it.
class PreparedModel {
 public:
  PreparedModel(const NetworkModel& model, const faults::FaultPlan& plan);

  const NetworkModel& model() const noexcept { return *model_; }
  const faults::FaultPlan& plan() const noexcept { return plan_; }

  struct LayerWeights {
    std::vector<std::int32_t> centered;   // code - zero_code
    std::vector<std::uint32_t> magnitude;
    std::vector<std::uint8_t> negative;
  };
  const LayerWeights& weights(std::size_t layer) const { return weights_[layer]; }

 private:
  const NetworkModel* model_;
  faults::FaultPlan plan_;
  std::vector<LayerWeights> weights_;
};

// Throws InvalidFaultSite when a site does not address the model.
void validate_plan(const NetworkModel& model, const faults::FaultPlan& plan);

// Transient sites fire only when their invocation index equals `invocation`.
Logits infer(const PreparedModel& prepared, std::span<const float> input, std::uint64_t invocation = 0,
             InferTrace* trace = nullptr);
Logits infer(const NetworkModel& model, std::span<const float> input, const faults::FaultPlan& plan,
             std::uint64_t invocation = 0, InferTrace* trace = nullptr);

double clamp_unit(double mac_out, const Bounds& bounds, ClampMethod method);

// Post-activation (min, max) per layer over the dataset, run fault-free with
// clamping disabled.
std::vector<Bounds> profile_ranges(const NetworkModel& model, const Dataset& data);

struct BatchResult {
  double accuracy = 0.0;
  std::vector<Logits> logits;
  std::size_t adder_faults_detected = 0;
  bool outputs_within_bounds = true;  // layers with clamping enabled
};

// Input i of the batch is invocation i.
BatchResult evaluate(const NetworkModel& model, const Dataset& data, const faults::FaultPlan& plan,
                     bool keep_logits = false);
double evaluate_accuracy(const NetworkModel& model, const Dataset& data, const faults::FaultPlan& plan);

// Real-valued forward pass of the float model, used to calibrate per-layer
// activation scales (max input / 255).
std::vector<double> float_forward(const FloatModel& model, std::span<const float> input,
                                  std::vector<std::vector<double>>* layer_inputs = nullptr);
void calibrate_input_scales(FloatModel& model, const Dataset& data);

}  // namespace axrel::net
