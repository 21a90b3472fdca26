#include "axrel/net/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axrel/error.hpp"
#include "axrel/metrics/metrics.hpp"
#include "axrel/simd/kernels.hpp"

namespace axrel::net {

using faults::FaultSite;
using faults::SiteKind;

void Dataset::validate() const {
  if (rows == 0) throw Error(Errc::EmptyDataset, "dataset has no rows");
  if (features.size() != rows * cols || labels.size() != rows) {
    throw Error(Errc::ShapeMismatch, "dataset feature/label sizes disagree with its shape");
  }
}

void validate_plan(const NetworkModel& model, const faults::FaultPlan& plan) {
  for (const auto& s : plan.sites()) {
    if (s.target >= model.layers.size()) {
      throw Error(Errc::InvalidFaultSite, "fault targets missing layer " + std::to_string(s.target));
    }
    const auto& l = model.layers[s.target];
    bool ok = true;
    switch (s.kind) {
      case SiteKind::WeightBit:
        ok = s.element < l.stored.size() && s.bit < l.stored_width();
        break;
      case SiteKind::ActivationBit:
        ok = s.element < l.spec.in_dim && s.bit < kActivationBits;
        break;
      case SiteKind::AdderInternalBit:
        ok = l.spec.backend.family != arith::Family::Exact && s.element < l.spec.mac_count() &&
             s.bit <= l.spec.backend.mantissa_width();
        break;
    }
    if (!ok) {
      throw Error(Errc::InvalidFaultSite, std::string(faults::to_string(s.kind)) + " site (layer " +
                                              std::to_string(s.target) + ", element " +
                                              std::to_string(s.element) + ", bit " +
                                              std::to_string(s.bit) + ") does not address the model");
    }
  }
}

PreparedModel::PreparedModel(const NetworkModel& model, const faults::FaultPlan& plan)
    : model_(&model), plan_(plan) {
  model.validate();
  validate_plan(model, plan);
  weights_.resize(model.layers.size());
  for (std::uint32_t i = 0; i < model.layers.size(); ++i) {
    const auto& l = model.layers[i];
    auto stored = faults::apply_word_faults(l.stored, l.stored_width(), plan, i);
    const auto codes = l.spec.msb_triplication ? quant::decode_all(stored, l.scheme.bits) : std::move(stored);
    auto& w = weights_[i];
    const auto zero = static_cast<std::int32_t>(l.scheme.zero_code());
    w.centered.reserve(codes.size());
    w.magnitude.reserve(codes.size());
    w.negative.reserve(codes.size());
    for (auto c : codes) {
      const std::int32_t v = static_cast<std::int32_t>(c) - zero;
      w.centered.push_back(v);
      w.magnitude.push_back(static_cast<std::uint32_t>(v < 0 ? -v : v));
      w.negative.push_back(v < 0 ? 1 : 0);
    }
  }
}

double clamp_unit(double mac_out, const Bounds& bounds, ClampMethod method) {
  if (bounds.contains(mac_out)) return mac_out;
  switch (method) {
    case ClampMethod::LowerBound: return bounds.lower;
    case ClampMethod::UpperBound: return bounds.upper;
    case ClampMethod::SignBased: return mac_out > 0.0 ? bounds.upper : bounds.lower;
  }
  return mac_out;
}

namespace {

std::uint32_t quantize_activation(double x, double scale) {
  const double q = std::round(x / scale);
  return static_cast<std::uint32_t>(std::clamp(q, 0.0, double((1U << kActivationBits) - 1)));
}

// Gathers the input patch for output position `p` (im2col).
void gather_patch(const LayerSpec& spec, std::span<const std::int32_t> act, std::size_t p,
                  std::vector<std::int32_t>& patch) {
  if (spec.kind == LayerKind::Dense) {
    patch.assign(act.begin(), act.end());
    return;
  }
  const auto& c = spec.conv;
  const std::size_t oy = p / c.out_width();
  const std::size_t ox = p % c.out_width();
  patch.resize(spec.fan_in());
  std::size_t idx = 0;
  for (std::size_t ch = 0; ch < c.in_channels; ++ch) {
    for (std::size_t ky = 0; ky < c.kernel; ++ky) {
      for (std::size_t kx = 0; kx < c.kernel; ++kx) {
        patch[idx++] = act[(ch * c.height + oy + ky) * c.width + ox + kx];
      }
    }
  }
}

}  // namespace

Logits infer(const PreparedModel& prepared, std::span<const float> input, std::uint64_t invocation,
             InferTrace* trace) {
  const NetworkModel& model = prepared.model();
  if (input.size() != model.input_dim()) {
    throw Error(Errc::ShapeMismatch, "input has " + std::to_string(input.size()) + " features, model expects " +
                                         std::to_string(model.input_dim()));
  }
  if (trace) *trace = InferTrace{};

  // Transient sites for this invocation.
  std::vector<FaultSite> transient;
  for (const auto& s : prepared.plan().sites()) {
    if (s.kind != SiteKind::WeightBit && s.invocation == invocation) transient.push_back(s);
  }

  std::vector<double> x(input.begin(), input.end());
  std::vector<std::int32_t> act;
  std::vector<std::int32_t> patch;
  std::vector<std::uint32_t> patch_u, products;

  for (std::uint32_t li = 0; li < model.layers.size(); ++li) {
    const auto& layer = model.layers[li];
    const auto& spec = layer.spec;
    const auto& w = prepared.weights(li);

    act.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      act[i] = static_cast<std::int32_t>(quantize_activation(x[i], layer.input_scale));
    }
    std::vector<FaultSite> adder_sites;
    for (const auto& s : transient) {
      if (s.target != li) continue;
      if (s.kind == SiteKind::ActivationBit) {
        act[s.element] ^= std::int32_t{1} << s.bit;
        if (trace) ++trace->activation_faults_applied;
      } else {
        adder_sites.push_back(s);
      }
    }

    const std::size_t rows = spec.rows();
    const std::size_t positions = spec.positions();
    const std::size_t fan_in = spec.fan_in();
    const double out_scale = layer.scheme.scale * layer.input_scale;
    const auto& backend = spec.backend;
    std::vector<double> y(rows * positions);

    for (std::size_t p = 0; p < positions; ++p) {
      gather_patch(spec, act, p, patch);
      if (backend.family != arith::Family::Exact) {
        patch_u.assign(patch.begin(), patch.end());
        products.resize(fan_in);
      }
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t row_off = r * fan_in;
        std::uint32_t acc = 0;  // 32-bit two's-complement accumulator
        if (backend.family == arith::Family::Exact) {
          acc = static_cast<std::uint32_t>(
              simd::dot_i32(std::span(w.centered).subspan(row_off, fan_in), patch));
        } else {
          simd::mitchell_products(std::span(w.magnitude).subspan(row_off, fan_in), patch_u, products,
                                  backend.n, backend.t);
          const std::uint64_t mac_base = (r * positions + p) * fan_in;
          for (const auto& s : adder_sites) {
            if (s.element < mac_base || s.element >= mac_base + fan_in) continue;
            const std::size_t i = s.element - mac_base;
            const auto out = arith::multiply(arith::UWord(w.magnitude[row_off + i], backend.n),
                                             arith::UWord(patch_u[i], backend.n), backend,
                                             std::uint32_t{1} << s.bit);
            products[i] = out.product;
            if (trace) {
              ++trace->adder_faults_applied;
              if (out.fault_detected) ++trace->adder_faults_detected;
            }
          }
          for (std::size_t i = 0; i < fan_in; ++i) {
            acc += w.negative[row_off + i] ? 0U - products[i] : products[i];
          }
        }
        double v = static_cast<double>(static_cast<std::int32_t>(acc)) * out_scale +
                   static_cast<double>(layer.bias[r]);
        if (spec.activation == Activation::ReLU) v = std::max(v, 0.0);
        if (spec.clamp) v = clamp_unit(v, *layer.bounds, *spec.clamp);
        y[r * positions + p] = v;
      }
    }
    x = std::move(y);
    if (trace) trace->outputs.push_back(x);
  }
  return x;
}

Logits infer(const NetworkModel& model, std::span<const float> input, const faults::FaultPlan& plan,
             std::uint64_t invocation, InferTrace* trace) {
  const PreparedModel prepared(model, plan);
  return infer(prepared, input, invocation, trace);
}

std::vector<Bounds> profile_ranges(const NetworkModel& model, const Dataset& data) {
  if (data.rows == 0) throw Error(Errc::EmptyDataset, "cannot profile ranges on an empty dataset");
  data.validate();
  const NetworkModel plain = with_clamp(model, std::nullopt);
  const PreparedModel prepared(plain, faults::FaultPlan{});
  std::vector<Bounds> bounds(plain.layers.size(),
                             Bounds{std::numeric_limits<double>::infinity(),
                                    -std::numeric_limits<double>::infinity()});
  InferTrace trace;
  for (std::size_t i = 0; i < data.rows; ++i) {
    infer(prepared, data.row(i), i, &trace);
    for (std::size_t l = 0; l < bounds.size(); ++l) {
      for (double v : trace.outputs[l]) {
        bounds[l].lower = std::min(bounds[l].lower, v);
        bounds[l].upper = std::max(bounds[l].upper, v);
      }
    }
  }
  return bounds;
}

BatchResult evaluate(const NetworkModel& model, const Dataset& data, const faults::FaultPlan& plan,
                     bool keep_logits) {
  if (data.rows == 0) throw Error(Errc::EmptyDataset, "cannot evaluate on an empty dataset");
  data.validate();
  const PreparedModel prepared(model, plan);
  BatchResult result;
  std::size_t correct = 0;
  InferTrace trace;
  for (std::size_t i = 0; i < data.rows; ++i) {
    Logits logits = infer(prepared, data.row(i), i, &trace);
    result.adder_faults_detected += trace.adder_faults_detected;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
      const auto& layer = model.layers[l];
      if (!layer.spec.clamp) continue;
      for (double v : trace.outputs[l]) {
        if (!layer.bounds->contains(v)) result.outputs_within_bounds = false;
      }
    }
    if (static_cast<std::int64_t>(metrics::argmax(logits)) == data.labels[i]) ++correct;
    if (keep_logits) result.logits.push_back(std::move(logits));
  }
  result.accuracy = static_cast<double>(correct) / static_cast<double>(data.rows);
  return result;
}

double evaluate_accuracy(const NetworkModel& model, const Dataset& data, const faults::FaultPlan& plan) {
  return evaluate(model, data, plan).accuracy;
}

std::vector<double> float_forward(const FloatModel& model, std::span<const float> input,
                                  std::vector<std::vector<double>>* layer_inputs) {
  std::vector<double> x(input.begin(), input.end());
  if (layer_inputs) layer_inputs->clear();
  for (const auto& l : model.layers) {
    if (layer_inputs) layer_inputs->push_back(x);
    const auto& spec = l.spec;
    const std::size_t rows = spec.rows();
    const std::size_t positions = spec.positions();
    const std::size_t fan_in = spec.fan_in();
    std::vector<double> y(rows * positions);
    for (std::size_t p = 0; p < positions; ++p) {
      for (std::size_t r = 0; r < rows; ++r) {
        double acc = l.bias[r];
        for (std::size_t i = 0; i < fan_in; ++i) {
          std::size_t src = i;
          if (spec.kind == LayerKind::Conv2dAsMatmul) {
            const auto& c = spec.conv;
            const std::size_t ch = i / (c.kernel * c.kernel);
            const std::size_t ky = (i / c.kernel) % c.kernel;
            const std::size_t kx = i % c.kernel;
            src = (ch * c.height + p / c.out_width() + ky) * c.width + p % c.out_width() + kx;
          }
          acc += static_cast<double>(l.weights[r * fan_in + i]) * x[src];
        }
        if (spec.activation == Activation::ReLU) acc = std::max(acc, 0.0);
        y[r * positions + p] = acc;
      }
    }
    x = std::move(y);
  }
  return x;
}

void calibrate_input_scales(FloatModel& model, const Dataset& data) {
  data.validate();
  std::vector<double> peak(model.layers.size(), 0.0);
  std::vector<std::vector<double>> inputs;
  for (std::size_t i = 0; i < data.rows; ++i) {
    float_forward(model, data.row(i), &inputs);
    for (std::size_t l = 0; l < peak.size(); ++l) {
      for (double v : inputs[l]) peak[l] = std::max(peak[l], v);
    }
  }
  for (std::size_t l = 0; l < peak.size(); ++l) {
    model.layers[l].input_scale = peak[l] > 0.0 ? peak[l] / double((1U << kActivationBits) - 1) : 1.0;
  }
}

}  // namespace axrel::net
