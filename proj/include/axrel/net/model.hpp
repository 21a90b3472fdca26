#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "axrel/arith/multiplier.hpp"
#include "axrel/faults/plan.hpp"
#include "axrel/quant/quant.hpp"

namespace axrel::net {

enum class LayerKind : std::uint8_t { Dense, Conv2dAsMatmul };
enum class Activation : std::uint8_t { None, ReLU, Softmax };

// Range-restriction correction for out-of-bounds outputs.
enum class ClampMethod : std::uint8_t {
  LowerBound,  // method 1
  UpperBound,  // method 2
  SignBased,   // method 3: upper for positive outputs, lower otherwise
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const noexcept { return x >= lower && x <= upper; }
  bool operator==(const Bounds&) const = default;
};

// Stride 1, no padding; input laid out channel-major (C x H x W).
struct ConvGeometry {
  unsigned in_channels = 0;
  unsigned height = 0;
  unsigned width = 0;
  unsigned kernel = 0;
  unsigned out_channels = 0;

  unsigned out_height() const noexcept { return height - kernel + 1; }
  unsigned out_width() const noexcept { return width - kernel + 1; }
};

struct LayerSpec {
  std::string id;
  LayerKind kind = LayerKind::Dense;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  ConvGeometry conv;  // Conv2dAsMatmul only
  Activation activation = Activation::ReLU;
  arith::MultConfig backend = arith::MultConfig::exact(8);
  bool msb_triplication = false;
  std::optional<ClampMethod> clamp;

  // Matmul view: `rows` weight rows, each applied at `positions` input patches
  // of `fan_in` elements.
  std::size_t rows() const noexcept;
  std::size_t fan_in() const noexcept;
  std::size_t positions() const noexcept;
  std::size_t weight_count() const noexcept { return rows() * fan_in(); }
  std::size_t mac_count() const noexcept { return rows() * positions() * fan_in(); }
};

// Activations are carried as unsigned 8-bit codes.
inline constexpr unsigned kActivationBits = 8;

struct FloatLayer {
  LayerSpec spec;
  std::vector<float> weights;  // rows x fan_in, row-major
  std::vector<float> bias;     // rows
  double input_scale = 1.0;    // real value of one activation code step
  std::optional<Bounds> bounds;
};

struct FloatModel {
  std::vector<FloatLayer> layers;

  void validate() const;  // throws ShapeMismatch / InvalidConfig
  std::uint64_t param_count() const;
};

struct QuantizedLayer {
  LayerSpec spec;
  quant::QuantScheme scheme;
  std::vector<quant::Word> stored;  // b-bit codes, or (b+2)-bit protected words
  std::vector<float> bias;
  double input_scale = 1.0;
  std::optional<Bounds> bounds;

  unsigned stored_width() const noexcept {
    return spec.msb_triplication ? quant::protected_width(scheme.bits) : scheme.bits;
  }
};

struct NetworkModel {
  std::vector<QuantizedLayer> layers;

  void validate() const;
  std::uint64_t param_count() const;
  std::uint64_t memory_bits() const;
  std::uint64_t mac_count() const;
  std::size_t input_dim() const { return layers.front().spec.in_dim; }
  std::size_t output_dim() const { return layers.back().spec.out_dim; }

  // Weight tensors as stored (target i = layer i), for fault planning.
  std::vector<faults::TensorShape> weight_shape() const;
  std::vector<faults::ActivationLayerShape> activation_shape() const;
};

// Quantizes every layer at `bits`; layers flagged for MSB triplication are
// stored protected.
NetworkModel quantize_model(const FloatModel& model, unsigned bits);

// Copies of `model` with per-layer settings overridden.
NetworkModel with_protection(NetworkModel model, bool msb_triplication);
FloatModel with_protection(FloatModel model, bool msb_triplication);
NetworkModel with_clamp(NetworkModel model, std::optional<ClampMethod> method);
NetworkModel with_bounds(NetworkModel model, std::span<const Bounds> bounds);
NetworkModel with_backend(NetworkModel model, const arith::MultConfig& backend);

std::string_view to_string(LayerKind k) noexcept;
std::string_view to_string(Activation a) noexcept;
std::string_view to_string(ClampMethod m) noexcept;
LayerKind parse_layer_kind(const std::string& s);
Activation parse_activation(const std::string& s);
ClampMethod parse_clamp_method(const std::string& s);

}  // namespace axrel::net
